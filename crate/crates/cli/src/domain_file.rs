//! On-disk canonical domains.

use serde::{Deserialize, Serialize};

use expansat::domain::CanonicalDomain;
use expansat::{Error, Result, TournamentJson, WeakTournament, WeightedWeakTournament};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Tournament,
    Weak,
    Weighted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainFile {
    pub kind: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
    pub members: Vec<TournamentJson>,
}

/// A loaded domain of either graph kind.
pub enum AnyDomain {
    Majoritarian(DomainKind, CanonicalDomain<WeakTournament>),
    Weighted(Option<Vec<u64>>, CanonicalDomain<WeightedWeakTournament>),
}

impl AnyDomain {
    pub fn len(&self) -> usize {
        match self {
            AnyDomain::Majoritarian(_, d) => d.len(),
            AnyDomain::Weighted(_, d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_file(&self) -> DomainFile {
        match self {
            AnyDomain::Majoritarian(kind, d) => DomainFile {
                kind: *kind,
                weights: None,
                members: d.to_json(),
            },
            AnyDomain::Weighted(w, d) => DomainFile {
                kind: DomainKind::Weighted,
                weights: w.clone(),
                members: d.to_json(),
            },
        }
    }

    pub fn from_file(f: &DomainFile) -> Result<AnyDomain> {
        match f.kind {
            DomainKind::Weighted => Ok(AnyDomain::Weighted(
                f.weights.clone(),
                CanonicalDomain::<WeightedWeakTournament>::from_json(&f.members)?,
            )),
            kind => {
                let d = CanonicalDomain::<WeakTournament>::from_json(&f.members)?;
                if kind == DomainKind::Tournament {
                    if let Some(i) = d.graphs().position(|g| !g.is_tournament()) {
                        return Err(Error::Domain(format!(
                            "member {i} of a tournament domain is not a tournament"
                        )));
                    }
                }
                Ok(AnyDomain::Majoritarian(kind, d))
            }
        }
    }

    pub fn read(path: &std::path::Path) -> Result<AnyDomain> {
        let f: DomainFile = serde_json::from_slice(&std::fs::read(path)?)?;
        AnyDomain::from_file(&f)
    }

    /// Member counts keyed by node count.
    pub fn size_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        use expansat::Structure;
        let mut h = std::collections::BTreeMap::new();
        let sizes: Vec<usize> = match self {
            AnyDomain::Majoritarian(_, d) => d.graphs().map(|g| g.node_count()).collect(),
            AnyDomain::Weighted(_, d) => d.graphs().map(|g| g.node_count()).collect(),
        };
        for s in sizes {
            *h.entry(s).or_insert(0) += 1;
        }
        h
    }
}
