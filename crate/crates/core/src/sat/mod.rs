//! CNF encodings of canonical (weighted) tournament solutions, DIMACS I/O,
//! solver invocation, model decoding and domain minimization.

mod dimacs;
mod encode;
mod minimize;
mod solver;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::candidate::{Candidate, CandidateSet};
use crate::error::{domain, Error, Result};

pub use dimacs::{read_dimacs, read_solver_output, write_dimacs, write_dimacs_to, DimacsCnf};
pub use encode::{
    build_majoritarian_cnf, build_pairwise_cnf, EmbeddingRestriction, EmbeddingTriple,
    MajoritarianOptions,
};
pub use minimize::{minimize_domain, MinimizeReport};
pub use solver::{run_solver, ExternalSolver, SatBackend, SolveReport};

pub type Lit = i32;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Func,
    Bqr,
    Bg,
    Ar,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Func => "func",
            Origin::Bqr => "bqr",
            Origin::Bg => "bg",
            Origin::Ar => "ar",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FuncPart {
    AtLeastOne,
    AtMostOne,
}

/// `e: T' -> T` and `f: T'' -> T`, as image lists in the labels of `T`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EmbeddingPair {
    pub e: Vec<Candidate>,
    pub f: Vec<Candidate>,
}

/// Provenance of one clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseRecord {
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<FuncPart>,
    /// Domain indices: `[T]` for func and bqr, `[T, T', T'']` for bg and ar.
    pub tournaments: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embeddings: Option<EmbeddingPair>,
    /// `(a, b)` in `T`: `a` survives in `T'`, `b` is the removed node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(Candidate, Candidate)>,
    /// func: the sets of the literals in order; bg/ar: `[Y', Y'']`.
    pub winner_sets: Vec<CandidateSet>,
}

/// Dense map `(member, winner set) -> variable`, numbered from 1 in member order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableRegistry {
    sets: Vec<Vec<CandidateSet>>,
    first: Vec<u32>,
    index: HashMap<(usize, CandidateSet), u32>,
}

impl VariableRegistry {
    pub fn new(sets: Vec<Vec<CandidateSet>>) -> Self {
        let mut first = Vec::with_capacity(sets.len());
        let mut index = HashMap::new();
        let mut next = 1u32;
        for (i, s) in sets.iter().enumerate() {
            first.push(next);
            for &y in s {
                index.insert((i, y), next);
                next += 1;
            }
        }
        VariableRegistry { sets, first, index }
    }

    pub fn var(&self, member: usize, y: CandidateSet) -> Option<Lit> {
        self.index.get(&(member, y)).map(|&v| v as Lit)
    }

    pub fn sets(&self, member: usize) -> &[CandidateSet] {
        &self.sets[member]
    }

    pub fn vars(&self, member: usize) -> impl Iterator<Item = (CandidateSet, Lit)> + '_ {
        let f = self.first[member];
        self.sets[member]
            .iter()
            .enumerate()
            .map(move |(k, &y)| (y, (f as usize + k) as Lit))
    }

    pub fn member_count(&self) -> usize {
        self.sets.len()
    }

    pub fn num_vars(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// `(member, set)` of variable `v`.
    pub fn lookup(&self, v: Lit) -> Option<(usize, CandidateSet)> {
        if v <= 0 {
            return None;
        }
        let m = self
            .first
            .partition_point(|&f| f as Lit <= v)
            .checked_sub(1)?;
        self.sets[m]
            .get((v as u32 - self.first[m]) as usize)
            .map(|&y| (m, y))
    }

    /// Rebuild from at-least-one func records, which list every variable of a member in order.
    pub fn from_records(
        clauses: &[Vec<Lit>],
        meta: &[ClauseRecord],
        members: usize,
    ) -> Result<Self> {
        let mut sets = vec![Vec::new(); members];
        let mut seen = vec![false; members];
        for (c, r) in clauses.iter().zip(meta) {
            if r.origin != Origin::Func || r.part != Some(FuncPart::AtLeastOne) {
                continue;
            }
            let m = *r
                .tournaments
                .first()
                .ok_or_else(|| Error::Integrity("func record without a tournament".into()))?;
            if m >= members || seen[m] || r.winner_sets.len() != c.len() {
                return Err(Error::Integrity(format!(
                    "inconsistent at-least-one record for member {m}"
                )));
            }
            seen[m] = true;
            sets[m] = r.winner_sets.clone();
        }
        if let Some(m) = seen.iter().position(|s| !s) {
            return Err(Error::Integrity(format!(
                "no at-least-one clause for member {m}"
            )));
        }
        let reg = VariableRegistry::new(sets);
        for (c, r) in clauses.iter().zip(meta) {
            if r.part == Some(FuncPart::AtLeastOne) {
                let m = r.tournaments[0];
                let expect: Vec<Lit> = reg.vars(m).map(|x| x.1).collect();
                if *c != expect {
                    return Err(Error::Integrity(format!(
                        "variables of member {m} are not dense"
                    )));
                }
            }
        }
        Ok(reg)
    }
}

/// A CNF with per-clause provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfDocument {
    pub registry: VariableRegistry,
    pub clauses: Vec<Vec<Lit>>,
    pub meta: Vec<ClauseRecord>,
    /// Clauses generated before exact-duplicate removal.
    pub raw_clause_count: usize,
}

/// Assembles clauses, dropping exact duplicates (same literal set).
pub(crate) struct CnfBuilder {
    seen: HashSet<Vec<Lit>>,
    clauses: Vec<Vec<Lit>>,
    meta: Vec<ClauseRecord>,
    raw: usize,
}

impl CnfBuilder {
    pub(crate) fn new() -> Self {
        CnfBuilder {
            seen: HashSet::new(),
            clauses: Vec::new(),
            meta: Vec::new(),
            raw: 0,
        }
    }

    pub(crate) fn push(&mut self, clause: Vec<Lit>, rec: ClauseRecord) {
        debug_assert!(!clause.is_empty());
        self.raw += 1;
        let mut key = clause.clone();
        key.sort_unstable();
        key.dedup();
        if self.seen.insert(key) {
            self.clauses.push(clause);
            self.meta.push(rec);
        }
    }

    pub(crate) fn finish(self, registry: VariableRegistry) -> CnfDocument {
        CnfDocument {
            registry,
            clauses: self.clauses,
            meta: self.meta,
            raw_clause_count: self.raw,
        }
    }
}

impl CnfDocument {
    pub fn num_vars(&self) -> usize {
        self.registry.num_vars()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn counts_by_origin(&self) -> BTreeMap<Origin, usize> {
        let mut m = BTreeMap::new();
        for r in &self.meta {
            *m.entry(r.origin).or_insert(0) += 1;
        }
        m
    }

    /// Sub-document on the members with `keep[i]`, renumbered as if built on the
    /// filtered domain: func clauses of kept members and the bg/ar/bqr clauses
    /// whose tournaments are all kept.
    pub fn restrict_to_members(&self, keep: &[bool]) -> Result<CnfDocument> {
        let n = self.registry.member_count();
        if keep.len() != n {
            return domain(format!(
                "keep mask has {} entries for {n} members",
                keep.len()
            ));
        }
        let mut new_index = vec![usize::MAX; n];
        let mut sets = Vec::new();
        for i in (0..n).filter(|&i| keep[i]) {
            new_index[i] = sets.len();
            sets.push(self.registry.sets(i).to_vec());
        }
        let registry = VariableRegistry::new(sets);
        let mut clauses = Vec::new();
        let mut meta = Vec::new();
        for (c, r) in self.clauses.iter().zip(&self.meta) {
            if !r.tournaments.iter().all(|&t| keep[t]) {
                continue;
            }
            let lits = c
                .iter()
                .map(|&l| {
                    let (m, y) = self.registry.lookup(l.abs()).expect("registered variable");
                    let v = registry.var(new_index[m], y).expect("kept member");
                    if l > 0 {
                        v
                    } else {
                        -v
                    }
                })
                .collect();
            let mut r = r.clone();
            r.tournaments.iter_mut().for_each(|t| *t = new_index[*t]);
            clauses.push(lits);
            meta.push(r);
        }
        let raw = clauses.len();
        Ok(CnfDocument {
            registry,
            clauses,
            meta,
            raw_clause_count: raw,
        })
    }

    /// Add unit clauses (no metadata origin beyond func of the variable's member).
    pub fn with_units(&self, lits: &[Lit]) -> CnfDocument {
        let mut d = self.clone();
        for &l in lits {
            let (m, y) = self.registry.lookup(l.abs()).expect("registered variable");
            d.clauses.push(vec![l]);
            d.meta.push(ClauseRecord {
                origin: Origin::Func,
                part: None,
                tournaments: vec![m],
                embeddings: None,
                pair: None,
                winner_sets: vec![y],
            });
        }
        d.raw_clause_count += lits.len();
        d
    }

    /// Whether `model` (indexed by variable, entry 0 unused) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| {
            !c.iter().any(|&l| {
                let v = model
                    .get(l.unsigned_abs() as usize)
                    .copied()
                    .unwrap_or(false);
                v == (l > 0)
            })
        })
    }

    pub fn meta_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.meta).expect("metadata serializes")
    }
}

/// A truth assignment, `values[v]` for variable `v >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub values: Vec<bool>,
}

impl Model {
    pub fn from_literals(num_vars: usize, lits: &[Lit]) -> Result<Model> {
        let mut values = vec![false; num_vars + 1];
        for &l in lits {
            let v = l.unsigned_abs() as usize;
            if l == 0 || v > num_vars {
                return domain(format!("literal {l} outside 1..={num_vars}"));
            }
            values[v] = l > 0;
        }
        Ok(Model { values })
    }

    pub fn literals(&self) -> Vec<Lit> {
        (1..self.values.len())
            .map(|v| {
                if self.values[v] {
                    v as Lit
                } else {
                    -(v as Lit)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Model),
    Unsat,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }
}

/// Winner sets in domain order read off a model.
pub fn decode_model(doc: &CnfDocument, model: &Model) -> Result<crate::axioms::SolutionAssignment> {
    if model.values.len() < doc.num_vars() + 1 {
        return Err(Error::Integrity(format!(
            "model covers {} of {} variables",
            model.values.len().saturating_sub(1),
            doc.num_vars()
        )));
    }
    if let Some(i) = doc.satisfied_by(&model.values) {
        return Err(Error::Integrity(format!(
            "model falsifies clause {i} ({:?})",
            doc.clauses[i]
        )));
    }
    let mut winners = Vec::with_capacity(doc.registry.member_count());
    for m in 0..doc.registry.member_count() {
        let on: Vec<CandidateSet> = doc
            .registry
            .vars(m)
            .filter(|x| model.values[x.1 as usize])
            .map(|x| x.0)
            .collect();
        if on.len() != 1 {
            return Err(Error::Integrity(format!(
                "member {m} has {} winner sets set true",
                on.len()
            )));
        }
        winners.push(on[0]);
    }
    Ok(crate::axioms::SolutionAssignment { winners })
}

/// Grouped description of a clause subset, e.g. an externally extracted MUS.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MusReport {
    pub clause_count: usize,
    pub by_origin: BTreeMap<Origin, usize>,
    pub tournaments: Vec<usize>,
    pub embeddings: Vec<(usize, usize, EmbeddingPair)>,
    pub text: String,
}

pub fn decode_mus(doc: &CnfDocument, clause_indices: &[usize]) -> Result<MusReport> {
    let mut by_origin = BTreeMap::new();
    let mut tournaments = BTreeSet::new();
    let mut embeddings = BTreeSet::new();
    let mut groups: BTreeMap<Origin, Vec<String>> = BTreeMap::new();
    for &i in clause_indices {
        let r = doc.meta.get(i).ok_or_else(|| {
            Error::Domain(format!(
                "clause index {i} out of range 0..{}",
                doc.meta.len()
            ))
        })?;
        *by_origin.entry(r.origin).or_insert(0) += 1;
        tournaments.extend(r.tournaments.iter().copied());
        let mut line = format!("clause {i}: T{}", r.tournaments[0]);
        if let (Some(e), [t, t1, t2]) = (&r.embeddings, r.tournaments.as_slice()) {
            embeddings.insert((*t1, *t, e.clone()));
            let _ = write!(line, " <- T{t1} via e={:?}, T{t2} via f={:?}", e.e, e.f);
        }
        if let Some((a, b)) = r.pair {
            let _ = write!(line, ", a={a} b={b}");
        }
        let _ = write!(line, ", sets {:?}", r.winner_sets);
        groups.entry(r.origin).or_default().push(line);
    }
    let mut text = String::new();
    for (o, lines) in &groups {
        let _ = writeln!(text, "{} ({} clauses)", o.as_str(), lines.len());
        for l in lines {
            let _ = writeln!(text, "  {l}");
        }
    }
    let _ = writeln!(
        text,
        "tournaments: {}",
        tournaments
            .iter()
            .map(|t| format!("T{t}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let embeddings = embeddings.into_iter().collect();
    Ok(MusReport {
        clause_count: clause_indices.len(),
        by_origin,
        tournaments: tournaments.into_iter().collect(),
        embeddings,
        text,
    })
}
