//! Majoritarian and pairwise projections of an arbitrary method.
//!
//! `F_maj,Y(P) = F(𝔓_Y(M(P)))` and `F_pair,Y,m(P) = F(𝔓_{Y,m}(ψ_Y ℳ(P)))`.

use std::sync::Arc;

use dashmap::DashMap;

use crate::candidate::{CandidateSet, Labels};
use crate::canonical::{canonicalize, CanonicalKey};
use crate::error::{domain, Error, Result};
use crate::graph::Structure;
use crate::methods::{MethodId, VotingMethod};
use crate::profile::Profile;
use crate::representation::{psi, rep_weak, rep_weighted};

/// Largest ambient set accepted by a majoritarian projection.
pub const MAX_MAJORITARIAN_AMBIENT: usize = 6;
/// Largest ambient set accepted by a pairwise projection.
pub const MAX_PAIRWISE_AMBIENT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum CacheKey {
    Canonical(CanonicalKey),
    Labeled(Vec<u64>),
}

/// Cache of base-method results by input graph. For a neutral base isomorphic
/// graphs share one entry, stored in canonical labels.
struct Memo {
    map: DashMap<CacheKey, CandidateSet>,
}

impl Memo {
    fn new() -> Self {
        Memo {
            map: DashMap::new(),
        }
    }

    fn get_or<G: Structure>(
        &self,
        neutral: bool,
        g: &G,
        compute: impl FnOnce(&G) -> Result<CandidateSet>,
    ) -> Result<CandidateSet> {
        if neutral {
            let c = canonicalize(g)?;
            let key = CacheKey::Canonical(c.key());
            if let Some(w) = self.map.get(&key) {
                return Ok(c.to_original(*w));
            }
            let w = compute(g)?;
            self.map.insert(key, c.to_canonical(w));
            Ok(w)
        } else {
            let d = g.digraph();
            let mut k: Vec<u64> = d.nodes().iter().map(|c| c.0 as u64).collect();
            k.extend_from_slice(d.cells());
            let key = CacheKey::Labeled(k);
            if let Some(w) = self.map.get(&key) {
                return Ok(*w);
            }
            let w = compute(g)?;
            self.map.insert(key, w);
            Ok(w)
        }
    }

    fn len(&self) -> usize {
        self.map.len()
    }
}

fn check_inside(p: &Profile, y: CandidateSet) -> Result<()> {
    if !p.candidates().is_subset(y) {
        return domain(format!(
            "profile candidates {:?} are not inside the ambient set {y:?}",
            p.candidates()
        ));
    }
    if p.candidates().is_empty() {
        return domain("profile has no candidates");
    }
    Ok(())
}

pub struct MajoritarianProjection {
    base: Arc<dyn VotingMethod>,
    ambient: CandidateSet,
    memo: Memo,
}

impl MajoritarianProjection {
    pub fn new(base: Arc<dyn VotingMethod>, ambient: CandidateSet) -> Result<Self> {
        if ambient.is_empty() {
            return domain("ambient set is empty");
        }
        if ambient.len() > MAX_MAJORITARIAN_AMBIENT {
            return Err(Error::Capacity(format!(
                "majoritarian projection limited to {MAX_MAJORITARIAN_AMBIENT} candidates"
            )));
        }
        Ok(MajoritarianProjection {
            base,
            ambient,
            memo: Memo::new(),
        })
    }

    pub fn ambient(&self) -> CandidateSet {
        self.ambient
    }

    /// Number of distinct cached graphs.
    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }
}

impl VotingMethod for MajoritarianProjection {
    fn name(&self) -> String {
        format!("maj:{}@{}", self.base.name(), self.ambient.len())
    }

    fn winners(&self, p: &Profile) -> Result<CandidateSet> {
        check_inside(p, self.ambient)?;
        let t = p.majority_graph();
        self.memo.get_or(self.base.is_neutral(), &t, |t| {
            self.base.winners(&rep_weak(t, self.ambient)?)
        })
    }

    fn is_neutral(&self) -> bool {
        self.base.is_neutral()
    }
}

pub struct PairwiseProjection {
    base: Arc<dyn VotingMethod>,
    ambient: CandidateSet,
    m: u64,
    memo: Memo,
}

impl PairwiseProjection {
    pub fn new(base: Arc<dyn VotingMethod>, ambient: CandidateSet, m: u64) -> Result<Self> {
        if ambient.len() < 2 {
            return domain("pairwise projection needs at least two ambient candidates");
        }
        if ambient.len() > MAX_PAIRWISE_AMBIENT {
            return Err(Error::Capacity(format!(
                "pairwise projection limited to {MAX_PAIRWISE_AMBIENT} candidates"
            )));
        }
        if m == 0 {
            return domain("margin bound m must be positive");
        }
        Ok(PairwiseProjection {
            base,
            ambient,
            m,
            memo: Memo::new(),
        })
    }

    pub fn ambient(&self) -> CandidateSet {
        self.ambient
    }

    pub fn bound(&self) -> u64 {
        self.m
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }
}

impl VotingMethod for PairwiseProjection {
    fn name(&self) -> String {
        format!(
            "pair:{}@{},{}",
            self.base.name(),
            self.ambient.len(),
            self.m
        )
    }

    fn winners(&self, p: &Profile) -> Result<CandidateSet> {
        check_inside(p, self.ambient)?;
        let g = p.margin_graph();
        if let Some((a, b, w)) = g.edges().find(|e| e.2 > self.m) {
            return domain(format!(
                "margin {w} of {a} over {b} exceeds the bound {}",
                self.m
            ));
        }
        let scaled = g.scale(psi(self.ambient.len())?)?;
        self.memo.get_or(self.base.is_neutral(), &scaled, |t| {
            self.base.winners(&rep_weighted(t, self.ambient, self.m)?)
        })
    }

    fn is_neutral(&self) -> bool {
        self.base.is_neutral()
    }
}

fn parse_ambient(s: &str, labels: &Labels) -> Result<CandidateSet> {
    if let Ok(k) = s.parse::<usize>() {
        if k > labels.len() {
            return domain(format!(
                "ambient size {k} exceeds the {} labelled candidates",
                labels.len()
            ));
        }
        return Ok(CandidateSet::first(k));
    }
    let mut y = CandidateSet::EMPTY;
    for l in s.split(',') {
        y.insert(labels.id(l.trim())?);
    }
    Ok(y)
}

/// Parse a method id: a plain [`MethodId`], `maj:<id>@<Y>`, or `pair:<id>@<Y>,<m>`,
/// where `<Y>` is a size `k` (the first `k` candidates) or a `+`-separated label list.
pub fn parse_method(spec: &str, labels: &Labels) -> Result<Arc<dyn VotingMethod>> {
    let (mode, rest) = match spec.split_once(':') {
        None => return Ok(Arc::new(spec.parse::<MethodId>()?)),
        Some(x) => x,
    };
    let (base, args) = rest
        .split_once('@')
        .ok_or_else(|| Error::Domain(format!("projected method {spec:?} lacks '@'")))?;
    let base: Arc<dyn VotingMethod> = parse_method(base, labels)?;
    match mode {
        "maj" => {
            let y = parse_ambient(&args.replace('+', ","), labels)?;
            Ok(Arc::new(MajoritarianProjection::new(base, y)?))
        }
        "pair" => {
            let (y, m) = args
                .rsplit_once(',')
                .ok_or_else(|| Error::Domain(format!("pairwise method {spec:?} needs '@Y,m'")))?;
            let m: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad margin bound in {spec:?}")))?;
            let y = parse_ambient(&y.replace('+', ","), labels)?;
            Ok(Arc::new(PairwiseProjection::new(base, y, m)?))
        }
        other => domain(format!("unknown projection mode {other:?}")),
    }
}
