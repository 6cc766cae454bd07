use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest number of distinct candidate ids a [`CandidateSet`] can hold.
pub const MAX_CANDIDATES: usize = 32;

/// A candidate, identified by a small index. Display labels live in a [`Labels`] table.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Candidate(pub u8);

impl Candidate {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of candidates stored as a bitmask. Iteration is in ascending index order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CandidateSet(u32);

impl CandidateSet {
    pub const EMPTY: CandidateSet = CandidateSet(0);

    pub fn from_bits(bits: u32) -> Self {
        CandidateSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn first(n: usize) -> Self {
        assert!(n <= MAX_CANDIDATES);
        if n == MAX_CANDIDATES {
            CandidateSet(u32::MAX)
        } else {
            CandidateSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(c: Candidate) -> Self {
        CandidateSet(1 << c.0)
    }

    pub fn pair(a: Candidate, b: Candidate) -> Self {
        CandidateSet::singleton(a).with(b)
    }

    pub fn contains(self, c: Candidate) -> bool {
        (c.index() < MAX_CANDIDATES) && self.0 & (1 << c.0) != 0
    }

    pub fn with(self, c: Candidate) -> Self {
        CandidateSet(self.0 | (1 << c.0))
    }

    pub fn without(self, c: Candidate) -> Self {
        CandidateSet(self.0 & !(1 << c.0))
    }

    pub fn insert(&mut self, c: Candidate) {
        *self = self.with(c);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        CandidateSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        CandidateSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        CandidateSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Candidate> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Candidate(i as u8))
        })
    }

    pub fn to_vec(self) -> Vec<Candidate> {
        self.iter().collect()
    }

    /// Swap the membership of `a` and `b`.
    pub fn transpose(self, a: Candidate, b: Candidate) -> Self {
        let (ha, hb) = (self.contains(a), self.contains(b));
        let mut s = self.without(a).without(b);
        if ha {
            s.insert(b);
        }
        if hb {
            s.insert(a);
        }
        s
    }

    /// All nonempty subsets, in ascending bitmask order.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = CandidateSet> {
        let full = self.0;
        let mut sub: u32 = 0;
        let mut done = full == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            sub = sub.wrapping_sub(full) & full;
            if sub == 0 {
                done = true;
                return None;
            }
            Some(CandidateSet(sub))
        })
    }
}

impl FromIterator<Candidate> for CandidateSet {
    fn from_iter<I: IntoIterator<Item = Candidate>>(iter: I) -> Self {
        let mut s = CandidateSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

impl Serialize for CandidateSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for CandidateSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u8>::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&c| c as usize >= MAX_CANDIDATES) {
            return Err(serde::de::Error::custom(format!(
                "candidate {bad} out of range"
            )));
        }
        Ok(v.into_iter().map(Candidate).collect())
    }
}

/// Maps candidate ids to display labels and back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
}

impl Labels {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_CANDIDATES {
            return domain(format!("at most {MAX_CANDIDATES} candidates are supported"));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return domain(format!("duplicate candidate label {n:?}"));
            }
        }
        Ok(Labels { names })
    }

    /// Labels `0, 1, .., n-1`.
    pub fn numeric(n: usize) -> Self {
        Labels {
            names: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    /// Single-letter labels `a, b, c, ..`.
    pub fn alphabetic(n: usize) -> Self {
        assert!(n <= 26);
        Labels {
            names: (0..n)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, label: &str) -> Result<Candidate> {
        match self.names.iter().position(|n| n == label) {
            Some(i) => Ok(Candidate(i as u8)),
            None => domain(format!("unknown candidate label {label:?}")),
        }
    }

    pub fn set(&self, labels: &[&str]) -> Result<CandidateSet> {
        labels.iter().map(|l| self.id(l)).collect()
    }

    pub fn label(&self, c: Candidate) -> String {
        self.names
            .get(c.index())
            .cloned()
            .unwrap_or_else(|| c.0.to_string())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn all(&self) -> CandidateSet {
        CandidateSet::first(self.names.len())
    }

    pub fn format_set(&self, s: CandidateSet) -> String {
        let parts: Vec<String> = s.iter().map(|c| self.label(c)).collect();
        format!("{{{}}}", parts.join(","))
    }
}
