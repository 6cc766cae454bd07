//! Set-valued voting methods.
//!
//! Majoritarian and pairwise methods are computed from a margin matrix, so the
//! same code serves profiles, bare majority graphs and bare margin graphs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::candidate::{Candidate, CandidateSet};
use crate::error::{domain, Error, Result};
use crate::graph::{Structure, WeakTournament, WeightedWeakTournament};
use crate::profile::{Count, Profile};

/// Anything that maps a profile to a nonempty winner set.
pub trait VotingMethod: Send + Sync {
    fn name(&self) -> String;
    fn winners(&self, p: &Profile) -> Result<CandidateSet>;
    /// Neutral methods commute with candidate relabelings; projections only share
    /// cached results across isomorphic graphs when this holds.
    fn is_neutral(&self) -> bool {
        true
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodId {
    Plurality,
    Borda,
    InstantRunoff,
    Minimax,
    Copeland,
    Banks,
    TopCycle,
    UncoveredSet,
    SplitCycle,
    BeatPath,
    RankedPairs,
    ParetoScoring,
    Majority2,
}

impl MethodId {
    pub const ALL: [MethodId; 13] = [
        MethodId::Plurality,
        MethodId::Borda,
        MethodId::InstantRunoff,
        MethodId::Minimax,
        MethodId::Copeland,
        MethodId::Banks,
        MethodId::TopCycle,
        MethodId::UncoveredSet,
        MethodId::SplitCycle,
        MethodId::BeatPath,
        MethodId::RankedPairs,
        MethodId::ParetoScoring,
        MethodId::Majority2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodId::Plurality => "plurality",
            MethodId::Borda => "borda",
            MethodId::InstantRunoff => "instant_runoff",
            MethodId::Minimax => "minimax",
            MethodId::Copeland => "copeland",
            MethodId::Banks => "banks",
            MethodId::TopCycle => "top_cycle",
            MethodId::UncoveredSet => "uncovered_set",
            MethodId::SplitCycle => "split_cycle",
            MethodId::BeatPath => "beat_path",
            MethodId::RankedPairs => "ranked_pairs",
            MethodId::ParetoScoring => "pareto_scoring",
            MethodId::Majority2 => "majority2",
        }
    }

    /// Depends only on the majority graph.
    pub fn is_majoritarian(self) -> bool {
        matches!(
            self,
            MethodId::Copeland
                | MethodId::Banks
                | MethodId::TopCycle
                | MethodId::UncoveredSet
                | MethodId::Majority2
        )
    }

    /// Depends only on the margin graph.
    pub fn is_pairwise(self) -> bool {
        self.is_majoritarian()
            || matches!(
                self,
                MethodId::Minimax
                    | MethodId::SplitCycle
                    | MethodId::BeatPath
                    | MethodId::RankedPairs
            )
    }

    pub fn is_condorcet_consistent(self) -> bool {
        matches!(
            self,
            MethodId::Minimax
                | MethodId::Copeland
                | MethodId::Banks
                | MethodId::TopCycle
                | MethodId::UncoveredSet
                | MethodId::SplitCycle
                | MethodId::BeatPath
                | MethodId::RankedPairs
        )
    }

    /// Winners on a profile.
    pub fn evaluate(self, p: &Profile) -> Result<CandidateSet> {
        if !p.is_anonymous() {
            return domain("methods need a profile with nonnegative counts and at least one voter");
        }
        match self {
            MethodId::Plurality => Ok(argmax(p, &p.positional_tallies()[0])),
            MethodId::Borda => Ok(argmax(p, &p.borda_scores())),
            MethodId::InstantRunoff => instant_runoff(p),
            MethodId::ParetoScoring => Ok(pareto_scoring(p)),
            MethodId::Majority2 => majority2(p),
            m => m.on_margins(&Margins::of_profile(p)),
        }
    }

    /// Winners on a bare majority graph (majoritarian methods only).
    pub fn evaluate_on_majority_graph(self, g: &WeakTournament) -> Result<CandidateSet> {
        if !self.is_majoritarian() {
            return domain(format!("{} is not majoritarian", self.as_str()));
        }
        self.on_margins(&Margins::of_majority_graph(g))
    }

    /// Winners on a bare margin graph (pairwise methods only).
    pub fn evaluate_on_margin_graph(self, g: &WeightedWeakTournament) -> Result<CandidateSet> {
        if !self.is_pairwise() {
            return domain(format!("{} is not pairwise", self.as_str()));
        }
        self.on_margins(&Margins::of_margin_graph(g))
    }

    fn on_margins(self, m: &Margins) -> Result<CandidateSet> {
        match self {
            MethodId::Minimax => Ok(minimax(m)),
            MethodId::Copeland => Ok(copeland(m)),
            MethodId::Banks => banks(m),
            MethodId::TopCycle => Ok(top_cycle(m)),
            MethodId::UncoveredSet => Ok(uncovered_set(m)),
            MethodId::SplitCycle => Ok(split_cycle(m)),
            MethodId::BeatPath => Ok(beat_path(m)),
            MethodId::RankedPairs => ranked_pairs(m),
            MethodId::Majority2 => {
                if m.n() != 2 {
                    return domain("majority2 needs exactly two candidates");
                }
                Ok(match m.at(0, 1).signum() {
                    1 => CandidateSet::singleton(m.nodes[0]),
                    -1 => CandidateSet::singleton(m.nodes[1]),
                    _ => m.all(),
                })
            }
            other => domain(format!("{} needs a full profile", other.as_str())),
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MethodId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method {s:?}")))
    }
}

impl VotingMethod for MethodId {
    fn name(&self) -> String {
        self.as_str().to_string()
    }
    fn winners(&self, p: &Profile) -> Result<CandidateSet> {
        self.evaluate(p)
    }
}

/// Winner of two-candidate majority voting; both candidates on a zero margin.
pub fn majority2(p: &Profile) -> Result<CandidateSet> {
    if p.candidate_count() != 2 {
        return domain("majority2 needs exactly two candidates");
    }
    MethodId::Majority2.on_margins(&Margins::of_profile(p))
}

/// Resolute but not neutral: with a fixed priority order `L` (lower index ranks
/// higher), elect the highest `x` in `L` such that no candidate below `x` in `L`
/// is majority preferred to `x`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LinearOrderPriority;

impl VotingMethod for LinearOrderPriority {
    fn name(&self) -> String {
        "linear_order_priority".into()
    }
    fn winners(&self, p: &Profile) -> Result<CandidateSet> {
        let m = Margins::of_profile(p);
        for i in 0..m.n() {
            if (i + 1..m.n()).all(|j| m.at(j, i) <= 0) {
                return Ok(CandidateSet::singleton(m.nodes[i]));
            }
        }
        unreachable!("the L-least candidate always qualifies")
    }
    fn is_neutral(&self) -> bool {
        false
    }
}

/// Antisymmetric margin matrix over a sorted node list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Margins {
    nodes: Vec<Candidate>,
    m: Vec<Count>,
}

impl Margins {
    pub fn of_profile(p: &Profile) -> Self {
        let nodes = p.candidates().to_vec();
        let m = p.margin_matrix().into_iter().flatten().collect();
        Margins { nodes, m }
    }

    pub fn of_margin_graph(g: &WeightedWeakTournament) -> Self {
        let nodes = g.nodes().to_vec();
        let m = nodes
            .iter()
            .flat_map(|&a| nodes.iter().map(move |&b| g.margin(a, b)))
            .collect();
        Margins { nodes, m }
    }

    pub fn of_majority_graph(g: &WeakTournament) -> Self {
        let nodes = g.nodes().to_vec();
        let sign = |a, b| {
            if g.has_edge(a, b) {
                1
            } else if g.has_edge(b, a) {
                -1
            } else {
                0
            }
        };
        let m = nodes
            .iter()
            .flat_map(|&a| nodes.iter().map(move |&b| sign(a, b)))
            .collect();
        Margins { nodes, m }
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Count {
        self.m[i * self.nodes.len() + j]
    }

    fn all(&self) -> CandidateSet {
        self.nodes.iter().copied().collect()
    }

    fn pick(&self, keep: impl Fn(usize) -> bool) -> CandidateSet {
        (0..self.n())
            .filter(|&i| keep(i))
            .map(|i| self.nodes[i])
            .collect()
    }

    /// Widest-path strengths over positive-margin edges; 0 when no path exists.
    fn strongest_paths(&self) -> Vec<Vec<Count>> {
        let n = self.n();
        let mut p = vec![vec![0; n]; n];
        for (i, row) in p.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if i != j && self.at(i, j) > 0 {
                    *cell = self.at(i, j);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if i != j && i != k && j != k {
                        let via = p[i][k].min(p[k][j]);
                        if via > p[i][j] {
                            p[i][j] = via;
                        }
                    }
                }
            }
        }
        p
    }
}

fn argmax(p: &Profile, scores: &[Count]) -> CandidateSet {
    let best = *scores.iter().max().expect("profile has candidates");
    let cs = p.candidates().to_vec();
    scores
        .iter()
        .zip(cs)
        .filter(|(s, _)| **s == best)
        .map(|(_, c)| c)
        .collect()
}

fn instant_runoff(p: &Profile) -> Result<CandidateSet> {
    let mut remaining = p.candidates();
    loop {
        if remaining.len() == 1 {
            return Ok(remaining);
        }
        let q = p.restrict(remaining)?;
        let firsts = &q.positional_tallies()[0];
        let low = *firsts.iter().min().unwrap();
        let losers: CandidateSet = remaining
            .iter()
            .zip(firsts)
            .filter(|(_, &t)| t == low)
            .map(|(c, _)| c)
            .collect();
        if losers == remaining {
            return Ok(remaining);
        }
        remaining = remaining.difference(losers);
    }
}

fn pareto_scoring(p: &Profile) -> CandidateSet {
    let cs = p.candidates().to_vec();
    let n = cs.len();
    let dominates = |i: usize, j: usize| {
        p.ballots()
            .filter(|(_, k)| *k > 0)
            .all(|(b, _)| b.prefers(cs[i], cs[j]))
    };
    let mut dom = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            dom[i][j] = i != j && dominates(i, j);
        }
    }
    let undominated: Vec<usize> = (0..n).filter(|&j| (0..n).all(|i| !dom[i][j])).collect();
    let score = |i: usize| dom[i].iter().filter(|&&d| d).count();
    let best = undominated.iter().map(|&i| score(i)).max().unwrap_or(0);
    undominated
        .into_iter()
        .filter(|&i| score(i) == best)
        .map(|i| cs[i])
        .collect()
}

fn minimax(m: &Margins) -> CandidateSet {
    let n = m.n();
    let worst: Vec<Count> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x)
                .map(|y| m.at(y, x))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let best = *worst.iter().min().unwrap();
    m.pick(|i| worst[i] == best)
}

fn copeland(m: &Margins) -> CandidateSet {
    let n = m.n();
    let score: Vec<i64> = (0..n)
        .map(|x| (0..n).map(|y| m.at(x, y).signum()).sum())
        .collect();
    let best = *score.iter().max().unwrap();
    m.pick(|i| score[i] == best)
}

/// Banks brute force is exponential in the node count.
const MAX_BANKS_NODES: usize = 20;

fn banks(m: &Margins) -> Result<CandidateSet> {
    let n = m.n();
    if n > MAX_BANKS_NODES {
        return Err(Error::Capacity(format!(
            "banks supports at most {MAX_BANKS_NODES} candidates"
        )));
    }
    // A chain: every pair joined by an edge and the edges transitive, i.e. the
    // internal out-degrees are exactly 0..k-1. Its maximum has out-degree k-1.
    let top_of_chain = |s: u32| -> Option<usize> {
        let k = s.count_ones() as usize;
        let mut seen = 0u32;
        let mut top = None;
        for i in (0..n).filter(|&i| s & (1 << i) != 0) {
            let mut out = 0;
            for j in (0..n).filter(|&j| j != i && s & (1 << j) != 0) {
                match m.at(i, j).signum() {
                    1 => out += 1,
                    0 => return None,
                    _ => {}
                }
            }
            if seen & (1 << out) != 0 {
                return None;
            }
            seen |= 1 << out;
            if out == k - 1 {
                top = Some(i);
            }
        }
        top
    };
    let mut win = CandidateSet::EMPTY;
    for s in 1u32..(1u32 << n) {
        let Some(top) = top_of_chain(s) else { continue };
        let maximal = (0..n)
            .filter(|&z| s & (1 << z) == 0)
            .all(|z| top_of_chain(s | (1 << z)).is_none());
        if maximal {
            win.insert(m.nodes[top]);
        }
    }
    Ok(win)
}

/// Smith set: the top strongly connected component of the `margin >= 0` relation.
fn top_cycle(m: &Margins) -> CandidateSet {
    let n = m.n();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        for (j, r) in row.iter_mut().enumerate() {
            *r = i == j || m.at(i, j) >= 0;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    m.pick(|x| (0..n).all(|y| reach[x][y]))
}

/// `x` covers `y` when `x → y` and `x` beats everyone `y` beats.
fn uncovered_set(m: &Margins) -> CandidateSet {
    let n = m.n();
    let covers =
        |x: usize, y: usize| m.at(x, y) > 0 && (0..n).all(|z| m.at(y, z) <= 0 || m.at(x, z) > 0);
    m.pick(|y| (0..n).all(|x| x == y || !covers(x, y)))
}

/// `a` defeats `b` when its margin beats the strongest path back from `b` to `a`,
/// i.e. exceeds the splitting number of every simple cycle through `a → b`.
fn split_cycle(m: &Margins) -> CandidateSet {
    let n = m.n();
    let p = m.strongest_paths();
    m.pick(|b| (0..n).all(|a| !(m.at(a, b) > 0 && m.at(a, b) > p[b][a])))
}

fn beat_path(m: &Margins) -> CandidateSet {
    let n = m.n();
    let p = m.strongest_paths();
    m.pick(|x| (0..n).all(|y| p[x][y] >= p[y][x]))
}

fn ranked_pairs(m: &Margins) -> Result<CandidateSet> {
    let n = m.n();
    let mut edges: Vec<(Count, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if m.at(i, j) > 0 {
                edges.push((m.at(i, j), i, j));
            }
        }
    }
    let mut sizes: Vec<Count> = edges.iter().map(|e| e.0).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if edges.len() != n * (n - 1) / 2 || sizes.len() != edges.len() {
        return Err(Error::Precondition(
            "ranked_pairs needs a uniquely weighted margin graph".into(),
        ));
    }
    edges.sort_by_key(|e| std::cmp::Reverse(e.0));
    let mut locked = vec![vec![false; n]; n];
    let reaches = |locked: &Vec<Vec<bool>>, from: usize, to: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            if !seen[u] {
                seen[u] = true;
                stack.extend((0..n).filter(|&v| locked[u][v]));
            }
        }
        false
    };
    for (_, a, b) in edges {
        if !reaches(&locked, b, a) {
            locked[a][b] = true;
        }
    }
    Ok(m.pick(|x| (0..n).all(|y| !locked[y][x])))
}
