//! In-process SAT backends used by the solver shim and the minimizer.

use expansat::sat::{CnfDocument, Lit, Model, SatBackend, SolveOutcome};
use expansat::{Error, Result};
use varisat::ExtendFormula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Cadical,
    Varisat,
}

impl Backend {
    pub fn parse(s: &str) -> Option<Backend> {
        match s {
            "cadical" => Some(Backend::Cadical),
            "varisat" => Some(Backend::Varisat),
            _ => None,
        }
    }

    pub fn solve_clauses(self, num_vars: usize, clauses: &[Vec<Lit>]) -> Result<SolveOutcome> {
        match self {
            Backend::Cadical => {
                let mut s: cadical::Solver = cadical::Solver::new();
                for c in clauses {
                    s.add_clause(c.iter().copied());
                }
                match s.solve() {
                    Some(true) => {
                        let lits: Vec<Lit> = (1..=num_vars as Lit)
                            .map(|v| if s.value(v) == Some(true) { v } else { -v })
                            .collect();
                        Ok(SolveOutcome::Sat(Model::from_literals(num_vars, &lits)?))
                    }
                    Some(false) => Ok(SolveOutcome::Unsat),
                    None => Err(Error::Solver("cadical gave no answer".into())),
                }
            }
            Backend::Varisat => {
                let mut s = varisat::Solver::new();
                for c in clauses {
                    let lits: Vec<varisat::Lit> = c
                        .iter()
                        .map(|&l| varisat::Lit::from_dimacs(l as isize))
                        .collect();
                    s.add_clause(&lits);
                }
                match s.solve() {
                    Ok(true) => {
                        let lits: Vec<Lit> = s
                            .model()
                            .unwrap_or_default()
                            .into_iter()
                            .map(|l| l.to_dimacs() as Lit)
                            .filter(|l| l.unsigned_abs() as usize <= num_vars)
                            .collect();
                        Ok(SolveOutcome::Sat(Model::from_literals(num_vars, &lits)?))
                    }
                    Ok(false) => Ok(SolveOutcome::Unsat),
                    Err(e) => Err(Error::Solver(format!("varisat: {e}"))),
                }
            }
        }
    }
}

impl SatBackend for Backend {
    fn name(&self) -> String {
        match self {
            Backend::Cadical => "cadical (in-process)".into(),
            Backend::Varisat => "varisat (in-process)".into(),
        }
    }

    fn solve(&self, doc: &CnfDocument) -> Result<SolveOutcome> {
        self.solve_clauses(doc.num_vars(), &doc.clauses)
    }
}
