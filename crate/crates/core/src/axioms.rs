//! Axioms as executable predicates; a failed check returns a re-verifiable witness.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::candidate::{Candidate, CandidateSet, Labels};
use crate::canonical::{canonicalize, satisfies_orbit_condition};
use crate::domain::CanonicalDomain;
use crate::error::{domain, Error, Result};
use crate::graph::{Structure, TournamentJson, WeakTournament, WeightedWeakTournament};
use crate::methods::VotingMethod;
use crate::profile::Profile;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomId {
    Gamma,
    BinaryGamma,
    BinaryAlpha,
    AlphaResoluteness,
    Resoluteness,
    BinaryQuasiResoluteness,
    QuasiResoluteness,
    WeakQuasiResoluteness,
    Neutrality,
    CondorcetConsistency,
    Homogeneity,
    Cancellativity,
    CanonicalBinaryGamma,
    CanonicalAlphaResoluteness,
    OrbitCondition,
}

impl AxiomId {
    pub const ALL: [AxiomId; 15] = [
        AxiomId::Gamma,
        AxiomId::BinaryGamma,
        AxiomId::BinaryAlpha,
        AxiomId::AlphaResoluteness,
        AxiomId::Resoluteness,
        AxiomId::BinaryQuasiResoluteness,
        AxiomId::QuasiResoluteness,
        AxiomId::WeakQuasiResoluteness,
        AxiomId::Neutrality,
        AxiomId::CondorcetConsistency,
        AxiomId::Homogeneity,
        AxiomId::Cancellativity,
        AxiomId::CanonicalBinaryGamma,
        AxiomId::CanonicalAlphaResoluteness,
        AxiomId::OrbitCondition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomId::Gamma => "gamma",
            AxiomId::BinaryGamma => "binary_gamma",
            AxiomId::BinaryAlpha => "binary_alpha",
            AxiomId::AlphaResoluteness => "alpha_resoluteness",
            AxiomId::Resoluteness => "resoluteness",
            AxiomId::BinaryQuasiResoluteness => "binary_quasi_resoluteness",
            AxiomId::QuasiResoluteness => "quasi_resoluteness",
            AxiomId::WeakQuasiResoluteness => "weak_quasi_resoluteness",
            AxiomId::Neutrality => "neutrality",
            AxiomId::CondorcetConsistency => "condorcet_consistency",
            AxiomId::Homogeneity => "homogeneity",
            AxiomId::Cancellativity => "cancellativity",
            AxiomId::CanonicalBinaryGamma => "canonical_binary_gamma",
            AxiomId::CanonicalAlphaResoluteness => "canonical_alpha_resoluteness",
            AxiomId::OrbitCondition => "orbit_condition",
        }
    }

    /// Axioms relating a profile to its restrictions.
    pub fn is_variable_candidate(self) -> bool {
        matches!(
            self,
            AxiomId::Gamma
                | AxiomId::BinaryGamma
                | AxiomId::BinaryAlpha
                | AxiomId::AlphaResoluteness
        )
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxiomId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown axiom {s:?}")))
    }
}

/// Constructions a domain can be closed under.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Closure {
    pub restrictions: bool,
    /// Add `kP` for `k = 2..=max`.
    pub scaling: Option<i64>,
    pub cancellation: bool,
}

impl Closure {
    pub fn restrictions() -> Self {
        Closure {
            restrictions: true,
            ..Closure::default()
        }
    }
}

/// A finite set of profiles with a membership index.
#[derive(Clone, Debug, Default)]
pub struct ProfileDomain {
    profiles: Vec<Profile>,
    index: HashMap<Profile, usize>,
}

impl ProfileDomain {
    pub fn new(profiles: impl IntoIterator<Item = Profile>) -> Self {
        let mut d = ProfileDomain::default();
        for p in profiles {
            d.insert(p);
        }
        d
    }

    fn insert(&mut self, p: Profile) -> bool {
        if self.index.contains_key(&p) {
            return false;
        }
        self.index.insert(p.clone(), self.profiles.len());
        self.profiles.push(p);
        true
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn contains(&self, p: &Profile) -> bool {
        self.index.contains_key(p)
    }

    /// Whether `P_{-y}` and `P|_{x,y}` (or every `P|_Y` when `all_subsets`) are present for every member.
    pub fn is_closed_under_restrictions(&self, all_subsets: bool) -> bool {
        self.profiles.iter().all(|p| {
            let x = p.candidates();
            if x.len() < 2 {
                return true;
            }
            let needed: Vec<CandidateSet> = if all_subsets {
                x.nonempty_subsets().collect()
            } else {
                x.iter()
                    .map(|y| x.without(y))
                    .chain(x.nonempty_subsets().filter(|s| s.len() == 2))
                    .collect()
            };
            needed
                .into_iter()
                .all(|z| self.contains(&p.restrict(z).expect("subset")))
        })
    }

    /// Member indices by ascending candidate count, then insertion order.
    fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.profiles.len()).collect();
        idx.sort_by_key(|&i| self.profiles[i].candidate_count());
        idx
    }
}

/// Smallest superset of `seeds` closed under the requested constructions.
pub fn build_closed_domain(
    seeds: &[Profile],
    closure: Closure,
    cap: usize,
) -> Result<ProfileDomain> {
    let mut d = ProfileDomain::default();
    let mut queue: Vec<Profile> = seeds.to_vec();
    while let Some(p) = queue.pop() {
        if !d.insert(p.clone()) {
            continue;
        }
        if d.len() > cap {
            return Err(Error::Capacity(format!(
                "closed domain exceeds {cap} profiles"
            )));
        }
        if closure.restrictions {
            for z in p.candidates().nonempty_subsets() {
                if z != p.candidates() {
                    queue.push(p.restrict(z)?);
                }
            }
        }
        if let Some(max) = closure.scaling {
            // Scaled copies are not re-scaled, so the closure stays finite.
            for k in 2..=max {
                let q = p.scale(k);
                if !d.contains(&q) {
                    d.insert(q);
                }
            }
        }
        if closure.cancellation && p.cancel_one_of_each().is_ok() {
            queue.push(p.cancel_one_of_each()?);
        }
    }
    let mut profiles = d.profiles;
    profiles.sort_by_key(|p| p.candidate_count());
    Ok(ProfileDomain::new(profiles))
}

/// A concrete counterexample: the profiles involved with their computed winners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationWitness {
    pub axiom: AxiomId,
    /// `(role, profile, winners)`, e.g. `("P", .., ..)`, `("P_-y", .., ..)`.
    pub items: Vec<(String, Profile, CandidateSet)>,
    pub pair: Option<(Candidate, Candidate)>,
}

impl ViolationWitness {
    pub fn profile(&self, role: &str) -> Option<&Profile> {
        self.items.iter().find(|i| i.0 == role).map(|i| &i.1)
    }

    pub fn winners(&self, role: &str) -> Option<CandidateSet> {
        self.items.iter().find(|i| i.0 == role).map(|i| i.2)
    }

    /// Recompute every winner set and confirm the recorded values.
    pub fn reverify(&self, f: &dyn VotingMethod) -> Result<bool> {
        for (_, p, w) in &self.items {
            if f.winners(p)? != *w {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self, labels: &Labels) -> serde_json::Value {
        serde_json::json!({
            "axiom": self.axiom.as_str(),
            "pair": self.pair.map(|(x, y)| [labels.label(x), labels.label(y)]),
            "items": self.items.iter().map(|(role, p, w)| serde_json::json!({
                "role": role,
                "profile": p.to_json(labels),
                "winners": w.iter().map(|c| labels.label(c)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

struct Eval<'a> {
    f: &'a dyn VotingMethod,
    cache: HashMap<Profile, CandidateSet>,
}

impl Eval<'_> {
    fn get(&mut self, p: &Profile) -> Result<CandidateSet> {
        if let Some(w) = self.cache.get(p) {
            return Ok(*w);
        }
        let w = self.f.winners(p)?;
        if w.is_empty() || !w.is_subset(p.candidates()) {
            return Err(Error::Integrity(format!(
                "{} returned an invalid winner set {w:?}",
                self.f.name()
            )));
        }
        self.cache.insert(p.clone(), w);
        Ok(w)
    }
}

/// Largest multiplier tried by the homogeneity check.
pub const MAX_SCALE: i64 = 16;

/// Check `axiom` for `f` over `dom`; `Ok(None)` means it holds.
pub fn check(
    axiom: AxiomId,
    f: &dyn VotingMethod,
    dom: &ProfileDomain,
) -> Result<Option<ViolationWitness>> {
    if axiom.is_variable_candidate() && !dom.is_closed_under_restrictions(axiom == AxiomId::Gamma) {
        return Err(Error::Precondition(format!(
            "domain is not closed under the restrictions {axiom} needs"
        )));
    }
    let mut ev = Eval {
        f,
        cache: HashMap::new(),
    };
    let witness = |items: Vec<(&str, Profile, CandidateSet)>, pair| {
        Some(ViolationWitness {
            axiom,
            items: items
                .into_iter()
                .map(|(r, p, w)| (r.to_string(), p, w))
                .collect(),
            pair,
        })
    };
    for i in dom.order() {
        let p = &dom.profiles()[i];
        let x = p.candidates();
        let fp = ev.get(p)?;
        match axiom {
            AxiomId::BinaryGamma | AxiomId::BinaryAlpha | AxiomId::AlphaResoluteness => {
                if x.len() < 2 {
                    continue;
                }
                for y in x.iter() {
                    let py = p.remove(y)?;
                    let fpy = ev.get(&py)?;
                    for xx in x.without(y).iter() {
                        if !fpy.contains(xx) {
                            continue;
                        }
                        let pxy = p.restrict(CandidateSet::pair(xx, y))?;
                        let fxy = ev.get(&pxy)?;
                        if fxy != CandidateSet::singleton(xx) {
                            continue;
                        }
                        let bad = match axiom {
                            AxiomId::BinaryGamma => !fp.contains(xx),
                            AxiomId::BinaryAlpha => !fp.is_subset(fpy),
                            _ => fp.len() > fpy.len(),
                        };
                        if bad {
                            return Ok(witness(
                                vec![("P", p.clone(), fp), ("P_-y", py, fpy), ("P|xy", pxy, fxy)],
                                Some((xx, y)),
                            ));
                        }
                    }
                }
            }
            AxiomId::Gamma => {
                for a in x.nonempty_subsets().filter(|&a| a != x) {
                    for b in x
                        .nonempty_subsets()
                        .filter(|&b| b != x && a.union(b) == x && a < b)
                    {
                        let (pa, pb) = (p.restrict(a)?, p.restrict(b)?);
                        let (fa, fb) = (ev.get(&pa)?, ev.get(&pb)?);
                        if !fa.intersection(fb).is_subset(fp) {
                            return Ok(witness(
                                vec![("P", p.clone(), fp), ("P|A", pa, fa), ("P|B", pb, fb)],
                                None,
                            ));
                        }
                    }
                }
            }
            AxiomId::Resoluteness => {
                if fp.len() != 1 {
                    return Ok(witness(vec![("P", p.clone(), fp)], None));
                }
            }
            AxiomId::BinaryQuasiResoluteness => {
                let v = x.to_vec();
                if v.len() == 2 && p.margin(v[0], v[1])? != 0 && fp.len() != 1 {
                    return Ok(witness(vec![("P", p.clone(), fp)], None));
                }
            }
            AxiomId::QuasiResoluteness => {
                if p.is_uniquely_weighted() && fp.len() != 1 {
                    return Ok(witness(vec![("P", p.clone(), fp)], None));
                }
            }
            AxiomId::WeakQuasiResoluteness => {
                if p.is_uniquely_weighted() && p.is_uniquely_ranked() && fp.len() != 1 {
                    return Ok(witness(vec![("P", p.clone(), fp)], None));
                }
            }
            AxiomId::CondorcetConsistency => {
                let cw = x
                    .iter()
                    .find(|&c| x.without(c).iter().all(|d| p.margin_unchecked(c, d) > 0));
                if let Some(c) = cw {
                    if fp != CandidateSet::singleton(c) {
                        return Ok(witness(vec![("P", p.clone(), fp)], None));
                    }
                }
            }
            AxiomId::Neutrality => {
                // Swaps inside X(P), plus a swap with one fresh candidate.
                let fresh = (0..crate::MAX_CANDIDATES as u8)
                    .map(Candidate)
                    .find(|c| !x.contains(*c));
                let pool: Vec<Candidate> = x.iter().chain(fresh).collect();
                for (ai, &a) in pool.iter().enumerate() {
                    for &b in &pool[ai + 1..] {
                        let q = p.transpose(a, b)?;
                        let fq = ev.get(&q)?;
                        if fq != fp.transpose(a, b) {
                            return Ok(witness(
                                vec![("P", p.clone(), fp), ("P_ab", q, fq)],
                                Some((a, b)),
                            ));
                        }
                    }
                }
            }
            AxiomId::Homogeneity | AxiomId::Cancellativity => {
                let related: Vec<Profile> = if axiom == AxiomId::Homogeneity {
                    (2..=MAX_SCALE)
                        .map(|k| p.scale(k))
                        .filter(|q| dom.contains(q))
                        .collect()
                } else {
                    p.cancel_one_of_each()
                        .ok()
                        .filter(|q| dom.contains(q))
                        .into_iter()
                        .collect()
                };
                for q in related {
                    let fq = ev.get(&q)?;
                    if fq != fp {
                        return Ok(witness(vec![("P", p.clone(), fp), ("Q", q, fq)], None));
                    }
                }
            }
            AxiomId::CanonicalBinaryGamma
            | AxiomId::CanonicalAlphaResoluteness
            | AxiomId::OrbitCondition => {
                return domain(format!(
                    "{axiom} applies to canonical solutions, see check_canonical_solution"
                ));
            }
        }
    }
    Ok(None)
}

/// Winner sets for each member of a canonical domain, in domain order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionAssignment {
    pub winners: Vec<CandidateSet>,
}

/// A violation found by [`check_canonical_solution`]. Graphs are given in the
/// labels of `T`, the domain member under test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalWitness {
    pub axiom: AxiomId,
    pub domain_index: usize,
    pub graph: TournamentJson,
    pub winners: CandidateSet,
    /// `(x, y)`: `x` survives in `T_{-y}` and beats `y` head to head.
    pub pair: Option<(Candidate, Candidate)>,
    pub winners_without_y: Option<CandidateSet>,
}

/// Graph kinds usable in canonical solutions.
pub trait CanonicalGraph: Structure {
    fn json(&self) -> TournamentJson;
    /// `|X(T)| = 2` and the pair is joined by an edge.
    fn is_decisive_pair(&self) -> bool;
}

impl CanonicalGraph for WeakTournament {
    fn json(&self) -> TournamentJson {
        self.to_json()
    }
    fn is_decisive_pair(&self) -> bool {
        self.node_count() == 2 && self.edge_count() == 1
    }
}

impl CanonicalGraph for WeightedWeakTournament {
    fn json(&self) -> TournamentJson {
        self.to_json()
    }
    fn is_decisive_pair(&self) -> bool {
        self.node_count() == 2 && self.edge_count() == 1
    }
}

/// Re-verify a decoded solution directly from the axiom definitions, without the
/// CNF: `F(T_{-b})` and `F(T|_{a,b})` are read off the canonical forms of the
/// actual subgraphs and carried back along the canonical isomorphism. Subgraphs
/// whose class is not in the domain impose no constraint. Supported axioms:
/// orbit condition, binary and full quasi-resoluteness, canonical binary γ,
/// canonical α-resoluteness.
pub fn check_canonical_solution<G: CanonicalGraph>(
    a: &SolutionAssignment,
    dom: &CanonicalDomain<G>,
    axioms: &[AxiomId],
) -> Result<Option<CanonicalWitness>> {
    if a.winners.len() != dom.len() {
        return Err(Error::Precondition(format!(
            "assignment covers {} of {} domain members",
            a.winners.len(),
            dom.len()
        )));
    }
    for (i, e) in dom.entries().iter().enumerate() {
        let w = a.winners[i];
        if w.is_empty() || !w.is_subset(e.graph.node_set()) {
            return Err(Error::Precondition(format!(
                "winner set {w:?} of member {i} is not a nonempty node subset"
            )));
        }
    }
    let mk = |axiom, i: usize, pair, wy| CanonicalWitness {
        axiom,
        domain_index: i,
        graph: dom.entry(i).graph.json(),
        winners: a.winners[i],
        pair,
        winners_without_y: wy,
    };
    let lookup = |g: &G| -> Result<Option<CandidateSet>> {
        let c = canonicalize(g)?;
        Ok(dom.position(&c.key()).map(|j| c.to_original(a.winners[j])))
    };
    for &axiom in axioms {
        for (i, e) in dom.entries().iter().enumerate() {
            let fw = a.winners[i];
            match axiom {
                AxiomId::OrbitCondition => {
                    if !satisfies_orbit_condition(&e.orbits, fw) {
                        return Ok(Some(mk(axiom, i, None, None)));
                    }
                }
                AxiomId::BinaryQuasiResoluteness => {
                    if e.graph.is_decisive_pair() && fw.len() != 1 {
                        return Ok(Some(mk(axiom, i, None, None)));
                    }
                }
                AxiomId::QuasiResoluteness => {
                    if fw.len() != 1 {
                        return Ok(Some(mk(axiom, i, None, None)));
                    }
                }
                AxiomId::CanonicalBinaryGamma | AxiomId::CanonicalAlphaResoluteness => {
                    let x = e.graph.node_set();
                    if x.len() < 2 {
                        continue;
                    }
                    for y in x.iter() {
                        let Some(fy) = lookup(&e.graph.induced(x.without(y))?)? else {
                            continue;
                        };
                        for xx in x.without(y).iter() {
                            if !fy.contains(xx) {
                                continue;
                            }
                            let Some(fxy) = lookup(&e.graph.induced(CandidateSet::pair(xx, y))?)?
                            else {
                                continue;
                            };
                            if fxy != CandidateSet::singleton(xx) {
                                continue;
                            }
                            let bad = if axiom == AxiomId::CanonicalBinaryGamma {
                                !fw.contains(xx)
                            } else {
                                fw.len() > fy.len()
                            };
                            if bad {
                                return Ok(Some(mk(axiom, i, Some((xx, y)), Some(fy))));
                            }
                        }
                    }
                }
                other => return domain(format!("{other} is not an axiom on canonical solutions")),
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::GraphKind;
    use crate::domain::majoritarian_domain;
    use crate::methods::MethodId;

    #[test]
    fn closure_examples() {
        let p = Profile::from_orders(&[(&[0, 1, 2], 2), (&[2, 1, 0], 1)]).unwrap();
        let d = build_closed_domain(&[p.clone()], Closure::restrictions(), 100).unwrap();
        assert_eq!(d.len(), 7);
        assert!(d.is_closed_under_restrictions(true));
        let again = build_closed_domain(d.profiles(), Closure::restrictions(), 100).unwrap();
        assert_eq!(again.len(), d.len());
        assert!(build_closed_domain(&[p], Closure::restrictions(), 3).is_err());
    }

    #[test]
    fn unclosed_domain_rejected() {
        let p = Profile::from_orders(&[(&[0, 1, 2], 1)]).unwrap();
        let d = ProfileDomain::new([p]);
        assert!(matches!(
            check(AxiomId::BinaryGamma, &MethodId::Copeland, &d),
            Err(Error::Precondition(_))
        ));
        assert!(check(AxiomId::Resoluteness, &MethodId::Copeland, &d)
            .unwrap()
            .is_none());
    }

    #[test]
    fn trivial_solution_fails_only_quasi_resoluteness() {
        let dom = majoritarian_domain(GraphKind::Tournament, 1, 4).unwrap();
        let all = SolutionAssignment {
            winners: dom.graphs().map(|g| g.node_set()).collect(),
        };
        let ok = [AxiomId::OrbitCondition, AxiomId::CanonicalBinaryGamma];
        assert!(check_canonical_solution(&all, &dom, &ok).unwrap().is_none());
        let w = check_canonical_solution(&all, &dom, &[AxiomId::BinaryQuasiResoluteness])
            .unwrap()
            .unwrap();
        assert_eq!(w.axiom, AxiomId::BinaryQuasiResoluteness);
    }

    #[test]
    fn partial_assignment_rejected() {
        let dom = majoritarian_domain(GraphKind::Tournament, 1, 3).unwrap();
        let a = SolutionAssignment { winners: vec![] };
        assert!(check_canonical_solution(&a, &dom, &[AxiomId::OrbitCondition]).is_err());
    }
}
