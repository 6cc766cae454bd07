//! Weak tournaments (asymmetric digraphs) and their weighted variant.
//!
//! Both are stored as a sorted node list plus a dense row-major cell matrix
//! indexed by node position; a cell holds the edge weight, 0 meaning no edge.
//! Unweighted graphs use weight 1 for every edge.

use serde::{Deserialize, Serialize};

use crate::candidate::{Candidate, CandidateSet};
use crate::error::{domain, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Digraph {
    nodes: Vec<Candidate>,
    cells: Vec<u64>,
}

impl Digraph {
    fn on(set: CandidateSet) -> Self {
        let nodes = set.to_vec();
        let n = nodes.len();
        Digraph {
            nodes,
            cells: vec![0; n * n],
        }
    }

    pub(crate) fn from_parts(nodes: Vec<Candidate>, cells: Vec<u64>) -> Self {
        debug_assert_eq!(nodes.len() * nodes.len(), cells.len());
        Digraph { nodes, cells }
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Candidate] {
        &self.nodes
    }

    pub fn node_set(&self) -> CandidateSet {
        self.nodes.iter().copied().collect()
    }

    pub fn pos(&self, c: Candidate) -> Option<usize> {
        self.nodes.binary_search(&c).ok()
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> u64 {
        self.cells[i * self.nodes.len() + j]
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    fn set_cell(&mut self, i: usize, j: usize, w: u64) {
        let n = self.nodes.len();
        self.cells[i * n + j] = w;
    }

    fn add(&mut self, a: Candidate, b: Candidate, w: u64) -> Result<()> {
        let (Some(i), Some(j)) = (self.pos(a), self.pos(b)) else {
            return domain(format!("edge {a}->{b} uses an unknown node"));
        };
        if i == j {
            return domain("self-loops are not allowed");
        }
        if self.cell(j, i) != 0 {
            return domain(format!("edge {a}->{b} would make the graph non-asymmetric"));
        }
        if w == 0 {
            return domain("edge weights must be positive");
        }
        self.set_cell(i, j, w);
        Ok(())
    }

    fn restrict(&self, z: CandidateSet) -> Result<Digraph> {
        if z.is_empty() {
            return domain("cannot restrict to the empty set");
        }
        if !z.is_subset(self.node_set()) {
            return domain(format!("{z:?} is not a subset of the nodes"));
        }
        let keep: Vec<usize> = z.iter().map(|c| self.pos(c).unwrap()).collect();
        Ok(self.induced(&keep, z.to_vec()))
    }

    /// Subgraph on positions `keep`, renamed to `names` (same length).
    fn induced(&self, keep: &[usize], names: Vec<Candidate>) -> Digraph {
        let k = keep.len();
        let mut cells = vec![0; k * k];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                cells[a * k + b] = self.cell(i, j);
            }
        }
        Digraph {
            nodes: names,
            cells,
        }
    }

    fn transpose(&self, a: Candidate, b: Candidate) -> Result<Digraph> {
        if a == b {
            return domain("transposition needs two distinct nodes");
        }
        let sw = |c: Candidate| {
            if c == a {
                b
            } else if c == b {
                a
            } else {
                c
            }
        };
        let mut named: Vec<(Candidate, usize)> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &c)| (sw(c), i))
            .collect();
        named.sort();
        let names = named.iter().map(|x| x.0).collect();
        let keep: Vec<usize> = named.iter().map(|x| x.1).collect();
        Ok(self.induced(&keep, names))
    }

    /// Canonical relabeling: new node `i` (id `i`) is old position `perm[i]`.
    pub(crate) fn permuted(&self, perm: &[usize]) -> Digraph {
        let names = (0..perm.len()).map(|i| Candidate(i as u8)).collect();
        self.induced(perm, names)
    }

    fn edges(&self) -> impl Iterator<Item = (Candidate, Candidate, u64)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            (0..n).filter_map(move |j| {
                let w = self.cell(i, j);
                (w != 0).then(|| (self.nodes[i], self.nodes[j], w))
            })
        })
    }

    fn is_complete(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| self.cell(i, j) != 0 || self.cell(j, i) != 0))
    }
}

/// Shared access for the generic algorithms in [`crate::canonical`].
pub trait Structure: Clone + Eq + std::fmt::Debug + Send + Sync {
    const WEIGHTED: bool;
    fn digraph(&self) -> &Digraph;
    fn from_digraph(d: Digraph) -> Self;

    fn node_count(&self) -> usize {
        self.digraph().n()
    }

    fn nodes(&self) -> &[Candidate] {
        self.digraph().nodes()
    }

    fn node_set(&self) -> CandidateSet {
        self.digraph().node_set()
    }

    /// Induced subgraph on `z`, which must be a nonempty node subset.
    fn induced(&self, z: CandidateSet) -> Result<Self> {
        Ok(Self::from_digraph(self.digraph().restrict(z)?))
    }
}

/// An asymmetric, loop-free digraph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeakTournament(Digraph);

impl Structure for WeakTournament {
    const WEIGHTED: bool = false;
    fn digraph(&self) -> &Digraph {
        &self.0
    }
    fn from_digraph(d: Digraph) -> Self {
        WeakTournament(d)
    }
}

impl WeakTournament {
    /// Edgeless graph on the given nodes.
    pub fn on(nodes: CandidateSet) -> Self {
        WeakTournament(Digraph::on(nodes))
    }

    /// Edgeless graph on nodes `0..n`.
    pub fn with_nodes(n: usize) -> Self {
        WeakTournament::on(CandidateSet::first(n))
    }

    pub fn from_edges(n: usize, edges: &[(u8, u8)]) -> Result<Self> {
        let mut g = WeakTournament::with_nodes(n);
        for &(a, b) in edges {
            g.add_edge(Candidate(a), Candidate(b))?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: Candidate, b: Candidate) -> Result<()> {
        self.0.add(a, b, 1)
    }

    pub fn has_edge(&self, a: Candidate, b: Candidate) -> bool {
        match (self.0.pos(a), self.0.pos(b)) {
            (Some(i), Some(j)) => self.0.cell(i, j) != 0,
            _ => false,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Candidate, Candidate)> + '_ {
        self.0.edges().map(|(a, b, _)| (a, b))
    }

    pub fn edge_count(&self) -> usize {
        self.0.edges().count()
    }

    pub fn is_tournament(&self) -> bool {
        self.0.is_complete()
    }

    pub fn restrict(&self, z: CandidateSet) -> Result<Self> {
        Ok(WeakTournament(self.0.restrict(z)?))
    }

    pub fn remove(&self, y: Candidate) -> Result<Self> {
        if self.0.pos(y).is_none() {
            return domain(format!("node {y} not in graph"));
        }
        self.restrict(self.node_set().without(y))
    }

    pub fn transpose(&self, a: Candidate, b: Candidate) -> Result<Self> {
        Ok(WeakTournament(self.0.transpose(a, b)?))
    }

    /// Every edge given weight `w`.
    pub fn with_weight(&self, w: u64) -> Result<WeightedWeakTournament> {
        if w == 0 {
            return domain("edge weights must be positive");
        }
        let mut d = self.0.clone();
        for c in d.cells.iter_mut() {
            *c *= w;
        }
        Ok(WeightedWeakTournament(d))
    }

    /// Nodes beaten by `a`.
    pub fn out_set(&self, a: Candidate) -> CandidateSet {
        self.edges().filter(|e| e.0 == a).map(|e| e.1).collect()
    }

    /// Nodes beating `a`.
    pub fn in_set(&self, a: Candidate) -> CandidateSet {
        self.edges().filter(|e| e.1 == a).map(|e| e.0).collect()
    }

    pub fn to_json(&self) -> TournamentJson {
        TournamentJson::from_digraph(&self.0, false)
    }

    pub fn from_json(j: &TournamentJson) -> Result<Self> {
        if j.edges.iter().any(|e| e.len() != 2) {
            return domain("unweighted edges are [u, v] pairs");
        }
        Ok(WeakTournament(j.to_digraph()?))
    }
}

/// A weak tournament with a positive integer weight on every edge.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeightedWeakTournament(Digraph);

impl Structure for WeightedWeakTournament {
    const WEIGHTED: bool = true;
    fn digraph(&self) -> &Digraph {
        &self.0
    }
    fn from_digraph(d: Digraph) -> Self {
        WeightedWeakTournament(d)
    }
}

impl WeightedWeakTournament {
    pub fn on(nodes: CandidateSet) -> Self {
        WeightedWeakTournament(Digraph::on(nodes))
    }

    pub fn with_nodes(n: usize) -> Self {
        WeightedWeakTournament::on(CandidateSet::first(n))
    }

    pub fn from_edges(n: usize, edges: &[(u8, u8, u64)]) -> Result<Self> {
        let mut g = WeightedWeakTournament::with_nodes(n);
        for &(a, b, w) in edges {
            g.add_edge(Candidate(a), Candidate(b), w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: Candidate, b: Candidate, w: u64) -> Result<()> {
        self.0.add(a, b, w)
    }

    pub fn weight(&self, a: Candidate, b: Candidate) -> Option<u64> {
        let (i, j) = (self.0.pos(a)?, self.0.pos(b)?);
        let w = self.0.cell(i, j);
        (w != 0).then_some(w)
    }

    /// Signed weight: `w(a,b)`, `-w(b,a)`, or 0 when the pair has no edge.
    pub fn margin(&self, a: Candidate, b: Candidate) -> i64 {
        match (self.weight(a, b), self.weight(b, a)) {
            (Some(w), _) => w as i64,
            (_, Some(w)) => -(w as i64),
            _ => 0,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Candidate, Candidate, u64)> + '_ {
        self.0.edges()
    }

    pub fn edge_count(&self) -> usize {
        self.0.edges().count()
    }

    pub fn support(&self) -> WeakTournament {
        let mut d = self.0.clone();
        for c in d.cells.iter_mut() {
            *c = (*c != 0) as u64;
        }
        WeakTournament(d)
    }

    pub fn is_tournament(&self) -> bool {
        self.0.is_complete()
    }

    /// Complete, with pairwise distinct weights.
    pub fn is_uniquely_weighted(&self) -> bool {
        let mut ws: Vec<u64> = self.edges().map(|e| e.2).collect();
        let k = ws.len();
        ws.sort_unstable();
        ws.dedup();
        self.is_tournament() && ws.len() == k
    }

    pub fn scale(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return domain("scale factor must be positive");
        }
        let mut d = self.0.clone();
        for c in d.cells.iter_mut() {
            *c *= k;
        }
        Ok(WeightedWeakTournament(d))
    }

    pub fn restrict(&self, z: CandidateSet) -> Result<Self> {
        Ok(WeightedWeakTournament(self.0.restrict(z)?))
    }

    pub fn remove(&self, y: Candidate) -> Result<Self> {
        if self.0.pos(y).is_none() {
            return domain(format!("node {y} not in graph"));
        }
        self.restrict(self.node_set().without(y))
    }

    pub fn transpose(&self, a: Candidate, b: Candidate) -> Result<Self> {
        Ok(WeightedWeakTournament(self.0.transpose(a, b)?))
    }

    /// Build from a signed antisymmetric margin function over `nodes`.
    pub fn from_margins(
        nodes: CandidateSet,
        margin: impl Fn(Candidate, Candidate) -> i64,
    ) -> Result<Self> {
        let mut g = WeightedWeakTournament::on(nodes);
        for a in nodes.iter() {
            for b in nodes.iter() {
                if a != b {
                    let m = margin(a, b);
                    if m != -margin(b, a) {
                        return domain("margins are not antisymmetric");
                    }
                    if m > 0 {
                        g.add_edge(a, b, m as u64)?;
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> TournamentJson {
        TournamentJson::from_digraph(&self.0, true)
    }

    pub fn from_json(j: &TournamentJson) -> Result<Self> {
        if j.edges.iter().any(|e| e.len() != 3) {
            return domain("weighted edges are [u, v, w] triples");
        }
        Ok(WeightedWeakTournament(j.to_digraph()?))
    }
}

/// On-disk graph format. `edges` hold node ids; `ids` lists them when they are not `0..nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TournamentJson {
    pub nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ids: Option<Vec<u8>>,
    pub edges: Vec<Vec<u64>>,
}

impl TournamentJson {
    fn from_digraph(d: &Digraph, weighted: bool) -> Self {
        let contiguous = d.nodes.iter().enumerate().all(|(i, c)| c.index() == i);
        TournamentJson {
            nodes: d.n(),
            ids: (!contiguous).then(|| d.nodes.iter().map(|c| c.0).collect()),
            edges: d
                .edges()
                .map(|(a, b, w)| {
                    let mut e = vec![a.0 as u64, b.0 as u64];
                    if weighted {
                        e.push(w);
                    }
                    e
                })
                .collect(),
        }
    }

    fn to_digraph(&self) -> Result<Digraph> {
        let set: CandidateSet = match &self.ids {
            Some(ids) => {
                if ids.len() != self.nodes
                    || ids.iter().any(|&i| i as usize >= crate::MAX_CANDIDATES)
                {
                    return domain("ids must list one valid id per node");
                }
                ids.iter().map(|&i| Candidate(i)).collect()
            }
            None => {
                if self.nodes > crate::MAX_CANDIDATES {
                    return domain("too many nodes");
                }
                CandidateSet::first(self.nodes)
            }
        };
        if set.len() != self.nodes {
            return domain("duplicate node ids");
        }
        let mut d = Digraph::on(set);
        for e in &self.edges {
            if e[0] > 255 || e[1] > 255 {
                return domain("node id out of range");
            }
            d.add(
                Candidate(e[0] as u8),
                Candidate(e[1] as u8),
                *e.get(2).unwrap_or(&1),
            )?;
        }
        Ok(d)
    }
}
