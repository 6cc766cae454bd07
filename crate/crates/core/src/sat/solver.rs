use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::{read_solver_output, write_dimacs, CnfDocument, SolveOutcome};
use crate::error::{Error, Result};

/// Anything that decides a [`CnfDocument`].
pub trait SatBackend: Sync {
    fn name(&self) -> String;
    fn solve(&self, doc: &CnfDocument) -> Result<SolveOutcome>;
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub wall_time: Duration,
}

/// An executable taking a DIMACS path and printing SAT-competition output.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub path: PathBuf,
    pub args: Vec<String>,
    pub timeout: Option<Duration>,
}

impl ExternalSolver {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ExternalSolver {
            path: path.into(),
            args: Vec::new(),
            timeout: None,
        }
    }

    pub fn with_timeout(mut self, t: Duration) -> Self {
        self.timeout = Some(t);
        self
    }

    pub fn run_file(&self, cnf: &Path, num_vars: usize) -> Result<SolveOutcome> {
        let mut child = Command::new(&self.path)
            .args(&self.args)
            .arg(cnf)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| Error::Solver(format!("cannot start {}: {e}", self.path.display())))?;
        let mut stdout = child.stdout.take().expect("piped");
        let reader = std::thread::spawn(move || {
            let mut s = Vec::new();
            stdout.read_to_end(&mut s).map(|_| s)
        });
        let start = Instant::now();
        let status = loop {
            if let Some(st) = child.try_wait()? {
                break st;
            }
            if self.timeout.is_some_and(|t| start.elapsed() > t) {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::Solver(format!(
                    "{} timed out after {:?}",
                    self.path.display(),
                    self.timeout.unwrap()
                )));
            }
            std::thread::sleep(Duration::from_millis(2));
        };
        let out = reader
            .join()
            .map_err(|_| Error::Solver("output reader panicked".into()))??;
        match status.code() {
            Some(0 | 10 | 20) => {}
            code => {
                let mut err = String::new();
                if let Some(mut e) = child.stderr.take() {
                    let _ = e.read_to_string(&mut err);
                }
                return Err(Error::Solver(format!(
                    "{} exited with {code:?}: {}",
                    self.path.display(),
                    err.lines().next().unwrap_or("")
                )));
            }
        }
        let outcome = read_solver_output(out.as_slice(), num_vars)?;
        let expected = if outcome.is_sat() { 10 } else { 20 };
        if status.code() != Some(0) && status.code() != Some(expected) {
            return Err(Error::Solver(format!(
                "exit code {:?} contradicts the reported status",
                status.code()
            )));
        }
        Ok(outcome)
    }
}

impl SatBackend for ExternalSolver {
    fn name(&self) -> String {
        self.path.display().to_string()
    }

    fn solve(&self, doc: &CnfDocument) -> Result<SolveOutcome> {
        let dir = tempfile::tempdir()?;
        let path = dir.path().join("formula.cnf");
        write_dimacs(doc, &path)?;
        self.run_file(&path, doc.num_vars())
    }
}

/// Solve with any backend, timing the call and checking a returned model.
pub fn run_solver(doc: &CnfDocument, solver: &dyn SatBackend) -> Result<SolveReport> {
    let start = Instant::now();
    let outcome = solver.solve(doc)?;
    let wall_time = start.elapsed();
    if let SolveOutcome::Sat(m) = &outcome {
        if let Some(i) = doc.satisfied_by(&m.values) {
            return Err(Error::Integrity(format!(
                "{} returned a model falsifying clause {i}",
                solver.name()
            )));
        }
    }
    Ok(SolveReport { outcome, wall_time })
}
