//! Canonical forms, automorphism orbits, embeddings and exhaustive enumeration.
//!
//! The canonical form of a graph on `n` nodes relabels it onto `0..n` so that its
//! row-major cell matrix is lexicographically greatest over all `n!` relabelings.
//! With that choice node 0 is the node with the strongest out-row, so the 2-node
//! canonical tournament is `0 -> 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::candidate::{Candidate, CandidateSet};
use crate::error::{domain, Error, Result};
use crate::graph::{Digraph, Structure, WeakTournament, WeightedWeakTournament};

/// Largest graph the brute-force canonicalizer accepts.
pub const MAX_CANONICAL_NODES: usize = 8;

/// Row-major cell matrix of a canonical form. Equal keys iff isomorphic graphs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct CanonicalKey(pub Vec<u64>);

impl CanonicalKey {
    pub fn node_count(&self) -> usize {
        (self.0.len() as f64).sqrt().round() as usize
    }

    /// Big-endian byte encoding, four bytes per cell.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0
            .iter()
            .flat_map(|&c| (c as u32).to_be_bytes())
            .collect()
    }
}

/// Result of [`canonicalize`]: node `i` of `form` is node `original[i]` of the input.
#[derive(Clone, Debug)]
pub struct Canonical<G> {
    pub form: G,
    pub original: Vec<Candidate>,
}

impl<G: Structure> Canonical<G> {
    pub fn key(&self) -> CanonicalKey {
        CanonicalKey(self.form.digraph().cells().to_vec())
    }

    /// Image of a canonical node set in the input graph.
    pub fn to_original(&self, s: CandidateSet) -> CandidateSet {
        s.iter().map(|c| self.original[c.index()]).collect()
    }

    /// Image of an input node set in the canonical form.
    pub fn to_canonical(&self, s: CandidateSet) -> CandidateSet {
        self.original
            .iter()
            .enumerate()
            .filter(|(_, c)| s.contains(**c))
            .map(|(i, _)| Candidate(i as u8))
            .collect()
    }
}

/// Visit every permutation of `0..n` in lexicographic order.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        f(&p);
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

pub fn canonicalize<G: Structure>(g: &G) -> Result<Canonical<G>> {
    let d = g.digraph();
    let n = d.n();
    if n > MAX_CANONICAL_NODES {
        return Err(Error::Capacity(format!(
            "canonicalization supports at most {MAX_CANONICAL_NODES} nodes, got {n}"
        )));
    }
    let mut best: Vec<u64> = Vec::new();
    let mut best_perm: Vec<usize> = Vec::new();
    let mut buf = vec![0u64; n * n];
    for_each_permutation(n, |p| {
        let mut greater = best.is_empty();
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                let c = d.cell(p[i], p[j]);
                if !greater {
                    if c < best[k] {
                        return;
                    }
                    if c > best[k] {
                        greater = true;
                    }
                }
                buf[k] = c;
            }
        }
        if greater {
            best.clone_from(&buf);
            best_perm = p.to_vec();
        }
    });
    if n == 0 {
        best_perm.clear();
    }
    let form = G::from_digraph(d.permuted(&best_perm));
    let original = best_perm.iter().map(|&i| d.nodes()[i]).collect();
    Ok(Canonical { form, original })
}

pub fn canonical_key<G: Structure>(g: &G) -> Result<CanonicalKey> {
    Ok(canonicalize(g)?.key())
}

pub fn is_canonical<G: Structure>(g: &G) -> Result<bool> {
    Ok(canonicalize(g)?.form == *g)
}

/// An injective, structure-preserving map; `images[i]` is the image of `sub.nodes()[i]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Embedding {
    pub images: Vec<Candidate>,
}

impl Embedding {
    pub fn image_set(&self) -> CandidateSet {
        self.images.iter().copied().collect()
    }

    /// Image of `sub`'s node `c`.
    pub fn apply(&self, sub_nodes: &[Candidate], c: Candidate) -> Option<Candidate> {
        sub_nodes
            .iter()
            .position(|&x| x == c)
            .map(|i| self.images[i])
    }

    /// Preimage of `sup`'s node `c` among `sub_nodes`.
    pub fn preimage(&self, sub_nodes: &[Candidate], c: Candidate) -> Option<Candidate> {
        self.images
            .iter()
            .position(|&x| x == c)
            .map(|i| sub_nodes[i])
    }

    pub fn is_valid<G: Structure>(&self, sub: &G, sup: &G) -> bool {
        let (s, t) = (sub.digraph(), sup.digraph());
        if self.images.len() != s.n() || self.image_set().len() != s.n() {
            return false;
        }
        let Some(pos): Option<Vec<usize>> = self.images.iter().map(|&c| t.pos(c)).collect() else {
            return false;
        };
        (0..s.n()).all(|i| (0..s.n()).all(|j| i == j || s.cell(i, j) == t.cell(pos[i], pos[j])))
    }
}

/// Edge-cell equality for the embedding test; unweighted graphs store 0/1 so
/// this is "a->b iff e(a)->e(b)", weighted graphs additionally match weights.
pub fn enumerate_embeddings<G: Structure>(sub: &G, sup: &G) -> Vec<Embedding> {
    let (s, t) = (sub.digraph(), sup.digraph());
    let (k, n) = (s.n(), t.n());
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut map = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn rec(
        s: &Digraph,
        t: &Digraph,
        map: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Embedding>,
    ) {
        let i = map.len();
        if i == s.n() {
            out.push(Embedding {
                images: map.iter().map(|&u| t.nodes()[u]).collect(),
            });
            return;
        }
        for u in 0..t.n() {
            if used[u] {
                continue;
            }
            let ok = (0..i)
                .all(|j| s.cell(i, j) == t.cell(u, map[j]) && s.cell(j, i) == t.cell(map[j], u));
            if ok {
                used[u] = true;
                map.push(u);
                rec(s, t, map, used, out);
                map.pop();
                used[u] = false;
            }
        }
    }
    rec(s, t, &mut map, &mut used, &mut out);
    out
}

pub fn automorphisms<G: Structure>(g: &G) -> Vec<Embedding> {
    enumerate_embeddings(g, g)
}

/// Automorphism orbits, ordered by least member.
pub fn orbits<G: Structure>(g: &G) -> Vec<CandidateSet> {
    let nodes = g.nodes();
    let auts = automorphisms(g);
    let mut out: Vec<CandidateSet> = Vec::new();
    for &c in nodes {
        if out.iter().any(|o| o.contains(c)) {
            continue;
        }
        let i = nodes.iter().position(|&x| x == c).unwrap();
        out.push(auts.iter().map(|a| a.images[i]).collect());
    }
    out
}

/// Nonempty unions of orbits, in ascending bitmask order.
pub fn orbit_admissible_sets<G: Structure>(g: &G) -> Vec<CandidateSet> {
    admissible_from_orbits(&orbits(g))
}

pub fn admissible_from_orbits(orbits: &[CandidateSet]) -> Vec<CandidateSet> {
    let k = orbits.len();
    let mut sets: Vec<CandidateSet> = (1u32..(1 << k))
        .map(|m| {
            (0..k)
                .filter(|&i| m & (1 << i) != 0)
                .fold(CandidateSet::EMPTY, |s, i| s.union(orbits[i]))
        })
        .collect();
    sets.sort();
    sets
}

/// Whether `y` is a union of orbits.
pub fn satisfies_orbit_condition(orbits: &[CandidateSet], y: CandidateSet) -> bool {
    orbits
        .iter()
        .all(|o| o.is_subset(y) || o.intersection(y).is_empty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Tournament,
    Weak,
}

/// Grow canonical forms one node at a time: each `n`-node class contains a graph
/// whose first `n-1` nodes form a canonical `(n-1)`-node graph, so extending every
/// canonical form by every edge pattern to a new last node reaches every class.
fn grow<G: Structure>(
    start: G,
    n: usize,
    mut patterns: impl FnMut(&G) -> Vec<Vec<(u64, u64)>>,
) -> Result<Vec<G>> {
    let mut level = vec![start];
    for size in 2..=n {
        let mut next: BTreeMap<CanonicalKey, G> = BTreeMap::new();
        for g in &level {
            for pat in patterns(g) {
                let d = g.digraph();
                let m = size - 1;
                let mut cells = vec![0u64; size * size];
                for i in 0..m {
                    for j in 0..m {
                        cells[i * size + j] = d.cell(i, j);
                    }
                }
                for (i, &(out, inc)) in pat.iter().enumerate() {
                    cells[m * size + i] = out;
                    cells[i * size + m] = inc;
                }
                let cand = G::from_digraph(Digraph::from_parts(
                    CandidateSet::first(size).to_vec(),
                    cells,
                ));
                let c = canonicalize(&cand)?;
                next.entry(c.key()).or_insert(c.form);
            }
        }
        level = next.into_values().collect();
    }
    Ok(level)
}

/// One representative per isomorphism class, ordered by canonical key.
pub fn enumerate_canonical(kind: GraphKind, n: usize) -> Result<Vec<WeakTournament>> {
    let bound = match kind {
        GraphKind::Tournament => 6,
        GraphKind::Weak => 5,
    };
    if n == 0 || n > bound {
        return Err(Error::Capacity(format!(
            "{kind:?} enumeration supports 1..={bound} nodes, got {n}"
        )));
    }
    grow(WeakTournament::with_nodes(1), n, |g| {
        let m = g.node_count();
        let choices: &[(u64, u64)] = match kind {
            GraphKind::Tournament => &[(1, 0), (0, 1)],
            GraphKind::Weak => &[(1, 0), (0, 1), (0, 0)],
        };
        product(m, choices)
    })
}

/// Canonical complete weighted tournaments on `n` nodes whose weights are drawn
/// from `weights` and are pairwise distinct.
pub fn enumerate_canonical_uniquely_weighted(
    n: usize,
    weights: &[u64],
) -> Result<Vec<WeightedWeakTournament>> {
    if n == 0 || n > 4 {
        return Err(Error::Capacity(format!(
            "uniquely weighted enumeration supports 1..=4 nodes, got {n}"
        )));
    }
    let mut ws: Vec<u64> = weights.to_vec();
    ws.sort_unstable();
    ws.dedup();
    if ws.contains(&0) {
        return domain("weights must be positive");
    }
    grow(WeightedWeakTournament::with_nodes(1), n, |g| {
        let used: Vec<u64> = g.edges().map(|e| e.2).collect();
        let free: Vec<u64> = ws.iter().copied().filter(|w| !used.contains(w)).collect();
        let m = g.node_count();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(
            m: usize,
            free: &[u64],
            cur: &mut Vec<(u64, u64)>,
            taken: &mut Vec<u64>,
            out: &mut Vec<Vec<(u64, u64)>>,
        ) {
            if cur.len() == m {
                out.push(cur.clone());
                return;
            }
            for &w in free {
                if taken.contains(&w) {
                    continue;
                }
                taken.push(w);
                for dir in [(w, 0), (0, w)] {
                    cur.push(dir);
                    rec(m, free, cur, taken, out);
                    cur.pop();
                }
                taken.pop();
            }
        }
        rec(m, &free, &mut cur, &mut Vec::new(), &mut out);
        out
    })
}

fn product(m: usize, choices: &[(u64, u64)]) -> Vec<Vec<(u64, u64)>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                choices.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}
