//! Minimal SAT-competition-style front end: `dimacs-solve [--backend cadical|varisat] FILE`.
//! Prints `s SATISFIABLE` with `v` lines (exit 10) or `s UNSATISFIABLE` (exit 20).

use std::io::{BufReader, Write};
use std::process::ExitCode;

use expansat::sat::{read_dimacs, SolveOutcome};
use expansat_cli::backend::Backend;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut backend = Backend::Cadical;
    let mut file = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--backend" {
            match it.next().and_then(|b| Backend::parse(b)) {
                Some(b) => backend = b,
                None => return usage(),
            }
        } else if file.is_none() {
            file = Some(a.clone());
        } else {
            return usage();
        }
    }
    let Some(file) = file else { return usage() };
    let cnf = match std::fs::File::open(&file)
        .map_err(expansat::Error::from)
        .and_then(|f| read_dimacs(BufReader::new(f)))
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("c error: {e}");
            return ExitCode::from(1);
        }
    };
    let out = std::io::stdout();
    let mut out = out.lock();
    match backend.solve_clauses(cnf.num_vars, &cnf.clauses) {
        Ok(SolveOutcome::Unsat) => {
            let _ = writeln!(out, "s UNSATISFIABLE");
            ExitCode::from(20)
        }
        Ok(SolveOutcome::Sat(m)) => {
            let _ = writeln!(out, "s SATISFIABLE");
            for chunk in m.literals().chunks(16) {
                let line: Vec<String> = chunk.iter().map(|l| l.to_string()).collect();
                let _ = writeln!(out, "v {}", line.join(" "));
            }
            let _ = writeln!(out, "v 0");
            ExitCode::from(10)
        }
        Err(e) => {
            eprintln!("c error: {e}");
            ExitCode::from(1)
        }
    }
}

fn usage() -> ExitCode {
    eprintln!("usage: dimacs-solve [--backend cadical|varisat] FILE");
    ExitCode::from(2)
}
