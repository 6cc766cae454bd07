//! Profiles realizing a given majority or margin graph.

use crate::candidate::{Candidate, CandidateSet};
use crate::error::{domain, Error, Result};
use crate::graph::{Structure, WeakTournament, WeightedWeakTournament};
use crate::profile::{linear_orders, Ballot, Count, Profile};

/// Bound on the ambient set for the `|Y|!`-ballot constructions.
pub const MAX_AMBIENT: usize = 8;

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `ψ_Y = 2 (|Y|-2)!`: the margin shift produced by flipping one `ba`-block to an `ab`-block.
pub fn psi(ambient_size: usize) -> Result<u64> {
    if ambient_size < 2 {
        return domain("psi needs at least two candidates");
    }
    Ok(2 * factorial(ambient_size - 2))
}

fn check_ambient(y: CandidateSet) -> Result<()> {
    if y.is_empty() {
        return domain("ambient set is empty");
    }
    if y.len() > MAX_AMBIENT {
        return Err(Error::Capacity(format!(
            "ambient set limited to {MAX_AMBIENT} candidates"
        )));
    }
    Ok(())
}

/// One ballot per linear order of `y`.
pub fn all_orders_profile(y: CandidateSet) -> Result<Profile> {
    check_ambient(y)?;
    Profile::from_ballots(y, linear_orders(y).into_iter().map(|b| (b, 1)))
}

/// Leading pair `(a, b)` inside ambient set `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub a: Candidate,
    pub b: Candidate,
    pub ambient: CandidateSet,
}

/// All linear orders of the ambient set that start with `a` then `b`.
pub fn block_profile(spec: BlockSpec) -> Result<Profile> {
    check_ambient(spec.ambient)?;
    let BlockSpec { a, b, ambient } = spec;
    if a == b || !ambient.contains(a) || !ambient.contains(b) {
        return domain("block needs two distinct candidates of the ambient set");
    }
    let rest = ambient.without(a).without(b);
    let ballots = if rest.is_empty() {
        vec![Ballot::new(vec![a, b])?]
    } else {
        linear_orders(rest)
            .into_iter()
            .map(|t| {
                let mut o = vec![a, b];
                o.extend_from_slice(t.order());
                Ballot::new(o)
            })
            .collect::<Result<Vec<_>>>()?
    };
    Profile::from_ballots(ambient, ballots.into_iter().map(|b| (b, 1)))
}

/// `m L_Y + Σ_{a→b} k_{ab} (L_{ab-Y} − L_{ba-Y})` restricted to `nodes`, where
/// `flips(x, y)` is the signed block count between the first two candidates.
fn flipped(
    y: CandidateSet,
    nodes: CandidateSet,
    m: Count,
    flips: impl Fn(Candidate, Candidate) -> Count,
) -> Result<Profile> {
    let mut full = Profile::empty(y)?;
    for b in linear_orders(y) {
        let o = b.order();
        let k = if o.len() >= 2 { flips(o[0], o[1]) } else { 0 };
        full.add_ballot(b, m + k)?;
    }
    full.restrict(nodes)
}

/// `𝔓_Y(T)`: majority graph `T`, every positive margin `ψ_Y`, `|Y|!` voters.
pub fn rep_weak(t: &WeakTournament, y: CandidateSet) -> Result<Profile> {
    check_ambient(y)?;
    if !t.node_set().is_subset(y) {
        return domain("graph nodes must lie in the ambient set");
    }
    flipped(y, t.node_set(), 1, |a, b| {
        if t.has_edge(a, b) {
            1
        } else if t.has_edge(b, a) {
            -1
        } else {
            0
        }
    })
}

/// `𝔓_{Y,m}(𝒯)`: margin graph `𝒯`, `m |Y|!` voters. Every weight must be `k ψ_Y` with `1 <= k <= m`.
pub fn rep_weighted(t: &WeightedWeakTournament, y: CandidateSet, m: u64) -> Result<Profile> {
    check_ambient(y)?;
    if !t.node_set().is_subset(y) {
        return domain("graph nodes must lie in the ambient set");
    }
    if m == 0 {
        return domain("m must be positive");
    }
    if t.edge_count() > 0 {
        let unit = psi(y.len())?;
        for (a, b, w) in t.edges() {
            if w % unit != 0 || w / unit > m {
                return domain(format!(
                    "weight {w} on {a}->{b} is not k*{unit} with 1 <= k <= {m}"
                ));
            }
        }
    }
    let unit = if y.len() >= 2 {
        psi(y.len())? as i64
    } else {
        1
    };
    flipped(y, t.node_set(), m as Count, |a, b| t.margin(a, b) / unit)
}

/// Debord's construction. Even weights: for each edge `a→b` of weight `n`, `n/2`
/// voters `a b x1..xk` and `n/2` voters `xk..x1 a b`, with `x1..xk` the remaining
/// candidates ascending. Odd weights (tournaments only): subtract the single
/// ascending ballot's margin graph, realize the even remainder, add that ballot back.
pub fn debord(t: &WeightedWeakTournament) -> Result<Profile> {
    let nodes = t.node_set();
    let cs = nodes.to_vec();
    let mut parity = None;
    for (i, &a) in cs.iter().enumerate() {
        for &b in &cs[i + 1..] {
            let p = t.margin(a, b).rem_euclid(2);
            if *parity.get_or_insert(p) != p {
                return domain("Debord needs all margins of one parity");
            }
        }
    }
    if parity == Some(1) {
        let star = Ballot::new(cs.clone())?;
        let rest = WeightedWeakTournament::from_margins(nodes, |a, b| {
            t.margin(a, b) - if a < b { 1 } else { -1 }
        })?;
        let mut p = debord_even(&rest)?;
        p.add_ballot(star, 1)?;
        return Ok(p);
    }
    debord_even(t)
}

fn debord_even(t: &WeightedWeakTournament) -> Result<Profile> {
    let nodes = t.node_set();
    let mut p = Profile::empty(nodes)?;
    for (a, b, w) in t.edges() {
        let rest = nodes.without(a).without(b).to_vec();
        let mut fwd = vec![a, b];
        fwd.extend_from_slice(&rest);
        let mut back: Vec<Candidate> = rest.iter().rev().copied().collect();
        back.extend_from_slice(&[a, b]);
        let half = (w / 2) as Count;
        p.add_ballot(Ballot::new(fwd)?, half)?;
        p.add_ballot(Ballot::new(back)?, half)?;
    }
    Ok(p)
}

/// McGarvey's construction: Debord with every weight 2.
pub fn mcgarvey(t: &WeakTournament) -> Result<Profile> {
    debord(&t.with_weight(2)?)
}
