use super::{run_solver, CnfDocument, SatBackend, SolveOutcome};
use crate::domain::CanonicalDomain;
use crate::error::{Error, Result};
use crate::graph::Structure;

#[derive(Clone, Debug)]
pub struct MinimizeReport<G> {
    pub domain: CanonicalDomain<G>,
    /// Indices into the input domain of the retained members.
    pub kept: Vec<usize>,
    pub solver_calls: usize,
}

/// Greedy deletion: visit members by descending node count, then domain
/// order; drop a member whenever the formula stays unsatisfiable without it.
/// `rebuild` receives the keep mask over the input domain.
pub fn minimize_domain<G: Structure>(
    dom: &CanonicalDomain<G>,
    rebuild: &(dyn Fn(&[bool]) -> Result<CnfDocument> + Sync),
    solver: &dyn SatBackend,
) -> Result<MinimizeReport<G>> {
    let n = dom.len();
    let mut keep = vec![true; n];
    let mut calls = 1;
    if run_solver(&rebuild(&keep)?, solver)?.outcome.is_sat() {
        return Err(Error::Precondition(
            "the initial formula is satisfiable".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(dom.entry(i).graph.node_count()));
    for i in order {
        keep[i] = false;
        calls += 1;
        if let SolveOutcome::Sat(_) = run_solver(&rebuild(&keep)?, solver)?.outcome {
            keep[i] = true;
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    Ok(MinimizeReport {
        domain: dom.filter(|i, _| keep[i]),
        kept,
        solver_calls: calls,
    })
}
