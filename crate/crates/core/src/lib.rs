//! Voting-theory workbench for expansion-consistency axioms.
//!
//! Profiles and their margin graphs, canonical (weighted) tournaments, the
//! block-flip profile representations, set-valued voting methods, axiom
//! checkers, majoritarian/pairwise projections, and a CNF pipeline that encodes
//! canonical tournament solutions for an external SAT solver.

pub mod axioms;
pub mod candidate;
pub mod canonical;
pub mod domain;
pub mod error;
pub mod graph;
pub mod methods;
pub mod profile;
pub mod projections;
pub mod representation;
pub mod sat;

pub use candidate::{Candidate, CandidateSet, Labels, MAX_CANDIDATES};
pub use canonical::{
    automorphisms, canonical_key, canonicalize, enumerate_canonical,
    enumerate_canonical_uniquely_weighted, enumerate_embeddings, orbit_admissible_sets, orbits,
    Canonical, CanonicalKey, Embedding, GraphKind,
};
pub use error::{Error, Result};
pub use graph::{Structure, TournamentJson, WeakTournament, WeightedWeakTournament};
pub use profile::{Ballot, Count, Profile, ProfileJson};
