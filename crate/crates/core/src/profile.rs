//! Anonymous profiles: multisets of strict linear orders with integer multiplicities.

use std::collections::BTreeMap;
use std::fmt;

use crate::candidate::{Candidate, CandidateSet, Labels};
use crate::error::{domain, Error, Result};
use crate::graph::{WeakTournament, WeightedWeakTournament};

pub type Count = i64;

/// A strict linear order, most preferred candidate first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ballot(Vec<Candidate>);

impl Ballot {
    pub fn new(order: Vec<Candidate>) -> Result<Self> {
        let set: CandidateSet = order.iter().copied().collect();
        if set.len() != order.len() {
            return domain("ballot repeats a candidate");
        }
        Ok(Ballot(order))
    }

    pub fn from_indices(order: &[u8]) -> Result<Self> {
        Ballot::new(order.iter().map(|&i| Candidate(i)).collect())
    }

    pub fn order(&self) -> &[Candidate] {
        &self.0
    }

    pub fn candidates(&self) -> CandidateSet {
        self.0.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, c: Candidate) -> Option<usize> {
        self.0.iter().position(|&x| x == c)
    }

    /// Whether `a` is ranked above `b`. Both must appear on the ballot.
    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        for &x in &self.0 {
            if x == a {
                return true;
            }
            if x == b {
                return false;
            }
        }
        false
    }

    pub fn restrict(&self, z: CandidateSet) -> Ballot {
        Ballot(self.0.iter().copied().filter(|&c| z.contains(c)).collect())
    }

    pub fn transpose(&self, a: Candidate, b: Candidate) -> Ballot {
        Ballot(
            self.0
                .iter()
                .map(|&c| {
                    if c == a {
                        b
                    } else if c == b {
                        a
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    pub fn reversed(&self) -> Ballot {
        Ballot(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Debug for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|c| c.0.to_string()).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

/// All strict linear orders of `set`, in lexicographic order of candidate indices.
pub fn linear_orders(set: CandidateSet) -> Vec<Ballot> {
    let items = set.to_vec();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(items.len());
    let mut used = vec![false; items.len()];
    fn rec(
        items: &[Candidate],
        used: &mut [bool],
        cur: &mut Vec<Candidate>,
        out: &mut Vec<Ballot>,
    ) {
        if cur.len() == items.len() {
            out.push(Ballot(cur.clone()));
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i]);
                rec(items, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(&items, &mut used, &mut cur, &mut out);
    out
}

/// A generalized anonymous profile: ballots over a fixed candidate set mapped to
/// integer counts. Absent ballots have count zero; zero entries are never stored,
/// so equality of profiles is structural equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Profile {
    candidates: CandidateSet,
    counts: BTreeMap<Ballot, Count>,
}

impl Profile {
    /// The empty profile (every count zero) over `candidates`.
    pub fn empty(candidates: CandidateSet) -> Result<Self> {
        if candidates.is_empty() {
            return domain("profile needs at least one candidate");
        }
        Ok(Profile {
            candidates,
            counts: BTreeMap::new(),
        })
    }

    /// Build from `(ballot, count)` pairs; repeated ballots accumulate.
    pub fn from_ballots(
        candidates: CandidateSet,
        ballots: impl IntoIterator<Item = (Ballot, Count)>,
    ) -> Result<Self> {
        let mut p = Profile::empty(candidates)?;
        for (b, n) in ballots {
            p.add_ballot(b, n)?;
        }
        Ok(p)
    }

    /// Build from index orders, e.g. `&[(&[0, 2, 1], 3)]`. The candidate set is read off the first ballot.
    pub fn from_orders(ballots: &[(&[u8], Count)]) -> Result<Self> {
        let Some((first, _)) = ballots.first() else {
            return domain("no ballots given");
        };
        let set = Ballot::from_indices(first)?.candidates();
        let mut p = Profile::empty(set)?;
        for (o, n) in ballots {
            p.add_ballot(Ballot::from_indices(o)?, *n)?;
        }
        Ok(p)
    }

    /// Build from label strings such as `"bac"` (one character per candidate).
    pub fn from_strings(labels: &Labels, ballots: &[(&str, Count)]) -> Result<Self> {
        let parse = |s: &str| -> Result<Ballot> {
            let order = s
                .chars()
                .map(|ch| labels.id(&ch.to_string()))
                .collect::<Result<Vec<_>>>()?;
            Ballot::new(order)
        };
        let Some((first, _)) = ballots.first() else {
            return domain("no ballots given");
        };
        let mut p = Profile::empty(parse(first)?.candidates())?;
        for (s, n) in ballots {
            p.add_ballot(parse(s)?, *n)?;
        }
        Ok(p)
    }

    pub fn add_ballot(&mut self, ballot: Ballot, count: Count) -> Result<()> {
        if ballot.candidates() != self.candidates || ballot.len() != self.candidates.len() {
            return domain(format!(
                "ballot {ballot:?} is not a linear order of the profile's candidates"
            ));
        }
        if count == 0 {
            return Ok(());
        }
        let e = self.counts.entry(ballot.clone()).or_insert(0);
        *e += count;
        if *e == 0 {
            self.counts.remove(&ballot);
        }
        Ok(())
    }

    pub fn candidates(&self) -> CandidateSet {
        self.candidates
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn count(&self, ballot: &Ballot) -> Count {
        self.counts.get(ballot).copied().unwrap_or(0)
    }

    /// Nonzero entries in ballot order.
    pub fn ballots(&self) -> impl Iterator<Item = (&Ballot, Count)> {
        self.counts.iter().map(|(b, &n)| (b, n))
    }

    pub fn distinct_ballots(&self) -> usize {
        self.counts.len()
    }

    pub fn voter_count(&self) -> Count {
        self.counts.values().sum()
    }

    /// True when every count is nonnegative and at least one voter is present.
    pub fn is_anonymous(&self) -> bool {
        self.counts.values().all(|&n| n >= 0) && self.voter_count() >= 1
    }

    pub fn has_negative_counts(&self) -> bool {
        self.counts.values().any(|&n| n < 0)
    }

    fn check_candidate(&self, c: Candidate) -> Result<()> {
        if self.candidates.contains(c) {
            Ok(())
        } else {
            domain(format!("candidate {c} not in profile"))
        }
    }

    /// Voters ranking `a` above `b` minus voters ranking `b` above `a`.
    pub fn margin(&self, a: Candidate, b: Candidate) -> Result<Count> {
        self.check_candidate(a)?;
        self.check_candidate(b)?;
        if a == b {
            return domain("margin needs two distinct candidates");
        }
        Ok(self.margin_unchecked(a, b))
    }

    pub(crate) fn margin_unchecked(&self, a: Candidate, b: Candidate) -> Count {
        self.counts
            .iter()
            .map(|(bal, &n)| if bal.prefers(a, b) { n } else { -n })
            .sum()
    }

    /// Antisymmetric margin matrix indexed by position in `candidates().to_vec()`.
    pub fn margin_matrix(&self) -> Vec<Vec<Count>> {
        let cs = self.candidates.to_vec();
        let k = cs.len();
        let mut m = vec![vec![0; k]; k];
        for (bal, &n) in &self.counts {
            let pos: Vec<usize> = bal
                .order()
                .iter()
                .map(|c| cs.binary_search(c).unwrap())
                .collect();
            for i in 0..k {
                for j in i + 1..k {
                    m[pos[i]][pos[j]] += n;
                    m[pos[j]][pos[i]] -= n;
                }
            }
        }
        m
    }

    pub fn majority_graph(&self) -> WeakTournament {
        let cs = self.candidates.to_vec();
        let m = self.margin_matrix();
        let mut g = WeakTournament::on(self.candidates);
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                if m[i][j] > 0 {
                    g.add_edge(cs[i], cs[j]).expect("margins are antisymmetric");
                }
            }
        }
        g
    }

    pub fn margin_graph(&self) -> WeightedWeakTournament {
        let cs = self.candidates.to_vec();
        let m = self.margin_matrix();
        let mut g = WeightedWeakTournament::on(self.candidates);
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                if m[i][j] > 0 {
                    g.add_edge(cs[i], cs[j], m[i][j] as u64)
                        .expect("margins are antisymmetric");
                }
            }
        }
        g
    }

    /// `P|_Z`: each ballot projected to `z`, coinciding projections summed.
    pub fn restrict(&self, z: CandidateSet) -> Result<Profile> {
        if z.is_empty() {
            return domain("cannot restrict to the empty set");
        }
        if !z.is_subset(self.candidates) {
            return domain(format!(
                "restriction set {z:?} is not a subset of {:?}",
                self.candidates
            ));
        }
        let mut out = Profile::empty(z)?;
        for (b, &n) in &self.counts {
            *out.counts.entry(b.restrict(z)).or_insert(0) += n;
        }
        out.counts.retain(|_, v| *v != 0);
        Ok(out)
    }

    /// `P_{-y}`.
    pub fn remove(&self, y: Candidate) -> Result<Profile> {
        self.check_candidate(y)?;
        self.restrict(self.candidates.without(y))
    }

    /// `P_{a⇄b}(L) = P(L_{a⇄b})`. Either candidate may lie outside the profile.
    pub fn transpose(&self, a: Candidate, b: Candidate) -> Result<Profile> {
        if a == b {
            return domain("transposition needs two distinct candidates");
        }
        let candidates = self.candidates.transpose(a, b);
        let counts = self
            .counts
            .iter()
            .map(|(bal, &n)| (bal.transpose(a, b), n))
            .collect();
        Ok(Profile { candidates, counts })
    }

    /// Apply an arbitrary injective relabeling of candidates.
    pub fn relabel(&self, map: impl Fn(Candidate) -> Candidate) -> Result<Profile> {
        let candidates: CandidateSet = self.candidates.iter().map(&map).collect();
        if candidates.len() != self.candidates.len() {
            return domain("relabeling is not injective");
        }
        let counts = self
            .counts
            .iter()
            .map(|(b, &n)| (Ballot(b.0.iter().map(|&c| map(c)).collect()), n))
            .collect();
        Ok(Profile { candidates, counts })
    }

    fn same_candidates(&self, other: &Profile) -> Result<()> {
        if self.candidates != other.candidates {
            return domain("profiles have different candidate sets");
        }
        Ok(())
    }

    pub fn add(&self, other: &Profile) -> Result<Profile> {
        self.same_candidates(other)?;
        let mut out = self.clone();
        for (b, &n) in &other.counts {
            *out.counts.entry(b.clone()).or_insert(0) += n;
        }
        out.counts.retain(|_, v| *v != 0);
        Ok(out)
    }

    pub fn subtract(&self, other: &Profile) -> Result<Profile> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: Count) -> Profile {
        let counts = if k == 0 {
            BTreeMap::new()
        } else {
            self.counts
                .iter()
                .map(|(b, &n)| (b.clone(), n * k))
                .collect()
        };
        Profile {
            candidates: self.candidates,
            counts,
        }
    }

    /// Delete one copy of each linear order of the candidates.
    pub fn cancel_one_of_each(&self) -> Result<Profile> {
        let orders = linear_orders(self.candidates);
        if let Some(b) = orders.iter().find(|b| self.count(b) < 1) {
            return Err(Error::Precondition(format!(
                "ballot {b:?} has count below 1"
            )));
        }
        let mut out = self.clone();
        for b in orders {
            *out.counts.get_mut(&b).unwrap() -= 1;
        }
        out.counts.retain(|_, v| *v != 0);
        Ok(out)
    }

    /// All margins over unordered pairs are nonzero and pairwise distinct in absolute value.
    pub fn is_uniquely_weighted(&self) -> bool {
        let m = self.margin_matrix();
        let k = m.len();
        let mut seen = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let a = m[i][j].abs();
                if a == 0 || seen.contains(&a) {
                    return false;
                }
                seen.push(a);
            }
        }
        true
    }

    /// `tallies[r][i]`: voters placing candidate `candidates()[i]` in position `r`.
    pub fn positional_tallies(&self) -> Vec<Vec<Count>> {
        let cs = self.candidates.to_vec();
        let k = cs.len();
        let mut t = vec![vec![0; k]; k];
        for (b, &n) in &self.counts {
            for (r, c) in b.order().iter().enumerate() {
                t[r][cs.binary_search(c).unwrap()] += n;
            }
        }
        t
    }

    /// Borda score of each candidate, in candidate order: the number of candidates
    /// ranked below it, summed over voters.
    pub fn borda_scores(&self) -> Vec<Count> {
        let k = self.candidates.len();
        let t = self.positional_tallies();
        (0..k)
            .map(|i| (0..k).map(|r| t[r][i] * (k - 1 - r) as Count).sum())
            .collect()
    }

    /// For every `Y ⊆ X` with `|Y| ≥ 2`, positional tallies at each rank and Borda
    /// scores in `P|_Y` are pairwise distinct.
    pub fn is_uniquely_ranked(&self) -> bool {
        for y in self.candidates.nonempty_subsets() {
            if y.len() < 2 {
                continue;
            }
            let q = self.restrict(y).expect("subset of candidates");
            for row in q.positional_tallies() {
                if !all_distinct(&row) {
                    return false;
                }
            }
            if !all_distinct(&q.borda_scores()) {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self, labels: &Labels) -> ProfileJson {
        ProfileJson {
            candidates: self.candidates.iter().map(|c| labels.label(c)).collect(),
            ballots: self
                .counts
                .iter()
                .map(|(b, &n)| BallotJson {
                    order: b.order().iter().map(|&c| labels.label(c)).collect(),
                    count: n,
                })
                .collect(),
            generalized: self.has_negative_counts().then_some(true),
        }
    }

    /// Read a profile whose labels are resolved through `labels`.
    pub fn from_json(json: &ProfileJson, labels: &Labels) -> Result<Profile> {
        if json.ballots.iter().any(|b| b.count < 0) && json.generalized != Some(true) {
            return domain("negative counts require \"generalized\": true");
        }
        let candidates = json
            .candidates
            .iter()
            .map(|l| labels.id(l))
            .collect::<Result<CandidateSet>>()?;
        if candidates.len() != json.candidates.len() {
            return domain("duplicate candidate in profile");
        }
        let mut p = Profile::empty(candidates)?;
        for b in &json.ballots {
            let order = b
                .order
                .iter()
                .map(|l| labels.id(l))
                .collect::<Result<Vec<_>>>()?;
            p.add_ballot(Ballot::new(order)?, b.count)?;
        }
        Ok(p)
    }

    /// Read a self-contained profile file: its `candidates` list is the labeling table.
    pub fn from_json_str(s: &str) -> Result<(Profile, Labels)> {
        let json: ProfileJson = serde_json::from_str(s)?;
        let labels = Labels::new(json.candidates.iter().cloned())?;
        Ok((Profile::from_json(&json, &labels)?, labels))
    }
}

fn all_distinct(v: &[Count]) -> bool {
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]))
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile{:?}", self.candidates)?;
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BallotJson {
    pub order: Vec<String>,
    pub count: Count,
}

/// On-disk profile format.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ProfileJson {
    pub candidates: Vec<String>,
    pub ballots: Vec<BallotJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generalized: Option<bool>,
}
