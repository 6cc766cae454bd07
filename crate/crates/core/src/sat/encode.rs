use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    ClauseRecord, CnfBuilder, CnfDocument, EmbeddingPair, FuncPart, Lit, Origin, VariableRegistry,
};
use crate::candidate::{Candidate, CandidateSet};
use crate::canonical::{canonicalize, Embedding};
use crate::domain::CanonicalDomain;
use crate::error::{domain, Result};
use crate::graph::{Structure, TournamentJson, WeakTournament, WeightedWeakTournament};

/// Which axiom schemas to emit; func is always present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MajoritarianOptions {
    /// Replace the bqr disjunction by the unit clause picking node 0 of `T_2`.
    pub fix_two_candidate_case: bool,
    pub bqr: bool,
    pub bg: bool,
    pub ar: bool,
}

impl Default for MajoritarianOptions {
    fn default() -> Self {
        MajoritarianOptions {
            fix_two_candidate_case: false,
            bqr: true,
            bg: true,
            ar: true,
        }
    }
}

/// Embeddings of the domain member isomorphic to `g|_z` into `g`, i.e. the
/// canonical isomorphism composed with every automorphism of that member.
fn embeddings_onto<G: Structure>(
    dom: &CanonicalDomain<G>,
    g: &G,
    z: CandidateSet,
) -> Result<Option<(usize, Vec<Embedding>)>> {
    let c = canonicalize(&g.induced(z)?)?;
    let Some(j) = dom.position(&c.key()) else {
        return Ok(None);
    };
    let embs = dom
        .entry(j)
        .automorphisms
        .iter()
        .map(|h| Embedding {
            images: h.images.iter().map(|x| c.original[x.index()]).collect(),
        })
        .collect();
    Ok(Some((j, embs)))
}

/// One `(T', e)` / `(T'', f)` combination satisfying the side condition, with
/// `a` the common node and `b` the node outside `e`.
struct Step {
    sub: usize,
    e: Embedding,
    pair: usize,
    f: Embedding,
    a: Candidate,
    b: Candidate,
}

impl Step {
    fn pre_e(&self, dom_sub_nodes: &[Candidate]) -> Candidate {
        self.e
            .preimage(dom_sub_nodes, self.a)
            .expect("a in image of e")
    }
    fn pre_f(&self, pair_nodes: &[Candidate]) -> Candidate {
        self.f
            .preimage(pair_nodes, self.a)
            .expect("a in image of f")
    }
}

fn steps<G: Structure>(
    dom: &CanonicalDomain<G>,
    t: usize,
    allow: Option<&HashSet<(usize, usize, Vec<Candidate>)>>,
) -> Result<Vec<Step>> {
    let g = &dom.entry(t).graph;
    let x = g.node_set();
    let mut out = Vec::new();
    if x.len() < 2 {
        return Ok(out);
    }
    for b in x.iter() {
        let Some((sub, es)) = embeddings_onto(dom, g, x.without(b))? else {
            continue;
        };
        for e in es {
            if let Some(allow) = allow {
                if !allow.contains(&(sub, t, e.images.clone())) {
                    continue;
                }
            }
            for a in x.without(b).iter() {
                let Some((pair, fs)) = embeddings_onto(dom, g, CandidateSet::pair(a, b))? else {
                    continue;
                };
                for f in fs {
                    out.push(Step {
                        sub,
                        e: e.clone(),
                        pair,
                        f,
                        a,
                        b,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn func_clauses(reg: &VariableRegistry, t: usize, out: &mut Vec<(Vec<Lit>, ClauseRecord)>) {
    let vars: Vec<(CandidateSet, Lit)> = reg.vars(t).collect();
    out.push((
        vars.iter().map(|v| v.1).collect(),
        ClauseRecord {
            origin: Origin::Func,
            part: Some(FuncPart::AtLeastOne),
            tournaments: vec![t],
            embeddings: None,
            pair: None,
            winner_sets: vars.iter().map(|v| v.0).collect(),
        },
    ));
    for (i, &(y, u)) in vars.iter().enumerate() {
        for &(z, v) in &vars[i + 1..] {
            out.push((
                vec![-u, -v],
                ClauseRecord {
                    origin: Origin::Func,
                    part: Some(FuncPart::AtMostOne),
                    tournaments: vec![t],
                    embeddings: None,
                    pair: None,
                    winner_sets: vec![y, z],
                },
            ));
        }
    }
}

fn axiom_clauses<G: Structure>(
    dom: &CanonicalDomain<G>,
    reg: &VariableRegistry,
    t: usize,
    step: &Step,
    origin: Origin,
    out: &mut Vec<(Vec<Lit>, ClauseRecord)>,
) {
    let sub_nodes = dom.entry(step.sub).graph.nodes();
    let pair_nodes = dom.entry(step.pair).graph.nodes();
    let (ea, fa) = (step.pre_e(sub_nodes), step.pre_f(pair_nodes));
    let y2 = CandidateSet::singleton(fa);
    let Some(v2) = reg.var(step.pair, y2) else {
        return;
    };
    for (y1, v1) in reg.vars(step.sub).filter(|(y, _)| y.contains(ea)) {
        let mut clause = vec![-v1, -v2];
        clause.extend(
            reg.vars(t)
                .filter(|(y, _)| {
                    if origin == Origin::Bg {
                        y.contains(step.a)
                    } else {
                        y.len() <= y1.len()
                    }
                })
                .map(|x| x.1),
        );
        out.push((
            clause,
            ClauseRecord {
                origin,
                part: None,
                tournaments: vec![t, step.sub, step.pair],
                embeddings: Some(EmbeddingPair {
                    e: step.e.images.clone(),
                    f: step.f.images.clone(),
                }),
                pair: Some((step.a, step.b)),
                winner_sets: vec![y1, y2],
            },
        ));
    }
}

/// Per-member clause generation in parallel, merged in domain order.
fn assemble<G: Structure>(
    dom: &CanonicalDomain<G>,
    reg: VariableRegistry,
    extra: impl Fn(usize) -> Vec<(Vec<Lit>, ClauseRecord)> + Sync,
    schemas: &[Origin],
    allow: Option<&HashSet<(usize, usize, Vec<Candidate>)>>,
) -> Result<CnfDocument> {
    let per: Vec<Result<Vec<(Vec<Lit>, ClauseRecord)>>> = (0..dom.len())
        .into_par_iter()
        .map(|t| {
            let mut out = Vec::new();
            func_clauses(&reg, t, &mut out);
            out.extend(extra(t));
            if !schemas.is_empty() {
                let st = steps(dom, t, allow)?;
                for &o in schemas {
                    for s in &st {
                        axiom_clauses(dom, &reg, t, s, o, &mut out);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut b = CnfBuilder::new();
    for r in per {
        for (c, m) in r? {
            b.push(c, m);
        }
    }
    Ok(b.finish(reg))
}

/// Orbit-admissible variables; func, bqr (disjunction or unit), bg and ar clauses.
pub fn build_majoritarian_cnf(
    dom: &CanonicalDomain<WeakTournament>,
    opts: MajoritarianOptions,
) -> Result<CnfDocument> {
    let reg = VariableRegistry::new((0..dom.len()).map(|i| dom.admissible(i)).collect());
    let t2 = dom
        .graphs()
        .position(|g| g.node_count() == 2 && g.edge_count() == 1);
    let bqr = |t: usize| -> Vec<(Vec<Lit>, ClauseRecord)> {
        if !opts.bqr || Some(t) != t2 {
            return Vec::new();
        }
        let (s0, s1) = (
            CandidateSet::singleton(Candidate(0)),
            CandidateSet::singleton(Candidate(1)),
        );
        let sets = if opts.fix_two_candidate_case {
            vec![s0]
        } else {
            vec![s0, s1]
        };
        let lits = sets
            .iter()
            .map(|&y| reg.var(t, y).expect("singletons admissible on T2"))
            .collect();
        vec![(
            lits,
            ClauseRecord {
                origin: Origin::Bqr,
                part: None,
                tournaments: vec![t],
                embeddings: None,
                pair: None,
                winner_sets: sets,
            },
        )]
    };
    let mut schemas = Vec::new();
    if opts.bg {
        schemas.push(Origin::Bg);
    }
    if opts.ar {
        schemas.push(Origin::Ar);
    }
    let bqr_clauses: Vec<_> = (0..dom.len()).map(bqr).collect();
    assemble(dom, reg.clone(), |t| bqr_clauses[t].clone(), &schemas, None)
}

/// One listed embedding `sub -> sup`, with graphs given in full.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingTriple {
    pub sub: TournamentJson,
    pub sup: TournamentJson,
    /// `images[i]` is the image of node `i` of `sub`.
    pub images: Vec<Candidate>,
}

/// Embeddings `e: T' -> T` allowed in bg clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmbeddingRestriction(pub Vec<EmbeddingTriple>);

impl EmbeddingRestriction {
    /// Validate each listed map and resolve it to domain indices.
    fn resolve(
        &self,
        dom: &CanonicalDomain<WeightedWeakTournament>,
    ) -> Result<HashSet<(usize, usize, Vec<Candidate>)>> {
        let mut out = HashSet::new();
        for (k, tr) in self.0.iter().enumerate() {
            let sub = WeightedWeakTournament::from_json(&tr.sub)?;
            let sup = WeightedWeakTournament::from_json(&tr.sup)?;
            let e = Embedding {
                images: tr.images.clone(),
            };
            if !e.is_valid(&sub, &sup) {
                return domain(format!("listed map {k} is not a weighted embedding"));
            }
            if sup.node_count() != sub.node_count() + 1 {
                return domain(format!("listed map {k} does not add exactly one node"));
            }
            let find = |g: &WeightedWeakTournament| -> Result<usize> {
                let c = canonicalize(g)?;
                if c.form != *g {
                    return domain(format!(
                        "listed map {k} uses a graph that is not in canonical form"
                    ));
                }
                dom.position(&c.key()).ok_or_else(|| {
                    crate::Error::Domain(format!("listed map {k} uses a graph outside the domain"))
                })
            };
            out.insert((find(&sub)?, find(&sup)?, tr.images.clone()));
        }
        Ok(out)
    }
}

/// Singleton variables, func and bg clauses over weighted embeddings.
pub fn build_pairwise_cnf(
    dom: &CanonicalDomain<WeightedWeakTournament>,
    restriction: Option<&EmbeddingRestriction>,
) -> Result<CnfDocument> {
    if let Some(g) = dom.graphs().find(|g| !g.is_uniquely_weighted()) {
        return domain(format!(
            "pairwise domain member {g:?} is not uniquely weighted"
        ));
    }
    let allow = restriction.map(|r| r.resolve(dom)).transpose()?;
    let reg = VariableRegistry::new(
        dom.graphs()
            .map(|g| g.node_set().iter().map(CandidateSet::singleton).collect())
            .collect(),
    );
    assemble(dom, reg, |_| Vec::new(), &[Origin::Bg], allow.as_ref())
}
