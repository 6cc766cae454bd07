//! Ordered collections of canonical graphs: the universe of the CNF encodings.

use std::collections::HashMap;

use crate::candidate::CandidateSet;
use crate::canonical::{
    admissible_from_orbits, automorphisms, canonicalize, orbits, CanonicalKey, Embedding,
};
use crate::error::{domain, Result};
use crate::graph::{Structure, TournamentJson, WeakTournament, WeightedWeakTournament};

#[derive(Clone, Debug)]
pub struct DomainEntry<G> {
    pub graph: G,
    pub key: CanonicalKey,
    pub orbits: Vec<CandidateSet>,
    pub automorphisms: Vec<Embedding>,
}

/// Canonical graphs in a fixed order, with orbit data and a key index.
#[derive(Clone, Debug)]
pub struct CanonicalDomain<G> {
    entries: Vec<DomainEntry<G>>,
    index: HashMap<CanonicalKey, usize>,
}

impl<G: Structure> CanonicalDomain<G> {
    /// Members must be canonical and pairwise non-isomorphic; order is kept.
    pub fn new(members: Vec<G>) -> Result<Self> {
        let mut entries = Vec::with_capacity(members.len());
        let mut index = HashMap::new();
        for g in members {
            let c = canonicalize(&g)?;
            if c.form != g {
                return domain(format!("domain member {g:?} is not in canonical form"));
            }
            let key = c.key();
            if index.insert(key.clone(), entries.len()).is_some() {
                return domain("domain lists an isomorphism class twice");
            }
            entries.push(DomainEntry {
                orbits: orbits(&g),
                automorphisms: automorphisms(&g),
                graph: g,
                key,
            });
        }
        Ok(CanonicalDomain { entries, index })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[DomainEntry<G>] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &DomainEntry<G> {
        &self.entries[i]
    }

    pub fn graphs(&self) -> impl Iterator<Item = &G> {
        self.entries.iter().map(|e| &e.graph)
    }

    pub fn position(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Nonempty unions of orbits of member `i`.
    pub fn admissible(&self, i: usize) -> Vec<CandidateSet> {
        admissible_from_orbits(&self.entries[i].orbits)
    }

    /// Keep the members selected by `keep`, preserving order.
    pub fn filter(&self, keep: impl Fn(usize, &G) -> bool) -> Self {
        let entries: Vec<DomainEntry<G>> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(i, e)| keep(*i, &e.graph))
            .map(|(_, e)| e.clone())
            .collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.key.clone(), i))
            .collect();
        CanonicalDomain { entries, index }
    }

    pub fn total_nodes(&self) -> usize {
        self.entries.iter().map(|e| e.graph.node_count()).sum()
    }
}

impl CanonicalDomain<WeakTournament> {
    pub fn to_json(&self) -> Vec<TournamentJson> {
        self.graphs().map(|g| g.to_json()).collect()
    }

    pub fn from_json(v: &[TournamentJson]) -> Result<Self> {
        CanonicalDomain::new(
            v.iter()
                .map(WeakTournament::from_json)
                .collect::<Result<_>>()?,
        )
    }
}

impl CanonicalDomain<WeightedWeakTournament> {
    pub fn to_json(&self) -> Vec<TournamentJson> {
        self.graphs().map(|g| g.to_json()).collect()
    }

    pub fn from_json(v: &[TournamentJson]) -> Result<Self> {
        CanonicalDomain::new(
            v.iter()
                .map(WeightedWeakTournament::from_json)
                .collect::<Result<_>>()?,
        )
    }
}

/// Canonical tournaments (or weak tournaments) with `lo..=hi` nodes.
pub fn majoritarian_domain(
    kind: crate::canonical::GraphKind,
    lo: usize,
    hi: usize,
) -> Result<CanonicalDomain<WeakTournament>> {
    let mut v = Vec::new();
    for n in lo..=hi {
        v.extend(crate::canonical::enumerate_canonical(kind, n)?);
    }
    CanonicalDomain::new(v)
}

/// Canonical uniquely weighted tournaments with `lo..=hi` nodes.
pub fn pairwise_domain(
    lo: usize,
    hi: usize,
    weights: &[u64],
) -> Result<CanonicalDomain<WeightedWeakTournament>> {
    let mut v = Vec::new();
    for n in lo..=hi {
        v.extend(crate::canonical::enumerate_canonical_uniquely_weighted(
            n, weights,
        )?);
    }
    CanonicalDomain::new(v)
}
