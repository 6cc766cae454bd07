use std::io::{BufRead, Write};
use std::path::Path;

use super::{CnfDocument, Lit, Model, SolveOutcome};
use crate::error::{Error, Result};

/// Header `p cnf V C`, then one 0-terminated clause per line.
pub fn write_dimacs_to(doc: &CnfDocument, w: &mut impl Write) -> Result<()> {
    let mut out = String::with_capacity(doc.clauses.len() * 16);
    out.push_str(&format!("p cnf {} {}\n", doc.num_vars(), doc.clauses.len()));
    for c in &doc.clauses {
        for l in c {
            out.push_str(&l.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

pub fn write_dimacs(doc: &CnfDocument, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_dimacs_to(doc, &mut f)?;
    f.flush()?;
    Ok(())
}

/// A bare DIMACS formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsCnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_dimacs(r: impl BufRead) -> Result<DimacsCnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let f: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                return Err(parse_err(n, "bad problem line"));
            }
            let v = f[2]
                .parse()
                .map_err(|_| parse_err(n, "bad variable count"))?;
            let c = f[3].parse().map_err(|_| parse_err(n, "bad clause count"))?;
            header = Some((v, c));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| parse_err(n, "clause before problem line"))?;
        for tok in t.split_whitespace() {
            let l: Lit = tok
                .parse()
                .map_err(|_| parse_err(n, format!("bad literal {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else if l.unsigned_abs() as usize > nv {
                return Err(parse_err(n, format!("literal {l} exceeds {nv} variables")));
            } else {
                cur.push(l);
            }
        }
    }
    let (num_vars, nc) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if !cur.is_empty() {
        return Err(parse_err(0, "last clause is not 0-terminated"));
    }
    if clauses.len() != nc {
        return Err(parse_err(
            0,
            format!("header announces {nc} clauses, found {}", clauses.len()),
        ));
    }
    Ok(DimacsCnf { num_vars, clauses })
}

/// Parse SAT-competition output: `s` status line, `v` value lines, `c` comments.
pub fn read_solver_output(r: impl BufRead, num_vars: usize) -> Result<SolveOutcome> {
    let mut status: Option<bool> = None;
    let mut lits = Vec::new();
    let mut terminated = false;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        let t = line.trim();
        if t.is_empty() || t == "c" || t.starts_with("c ") {
            continue;
        }
        if let Some(s) = t.strip_prefix("s ") {
            if status.is_some() {
                return Err(parse_err(n, "second status line"));
            }
            status = Some(match s.trim() {
                "SATISFIABLE" => true,
                "UNSATISFIABLE" => false,
                other => return Err(parse_err(n, format!("unsupported status {other:?}"))),
            });
        } else if let Some(v) = t
            .strip_prefix("v ")
            .or(if t == "v" { Some("") } else { None })
        {
            if status != Some(true) {
                return Err(parse_err(n, "value line without a SATISFIABLE status"));
            }
            for tok in v.split_whitespace() {
                let l: Lit = tok
                    .parse()
                    .map_err(|_| parse_err(n, format!("bad literal {tok:?}")))?;
                if terminated {
                    return Err(parse_err(n, "literal after terminating 0"));
                }
                if l == 0 {
                    terminated = true;
                } else if l.unsigned_abs() as usize > num_vars {
                    return Err(parse_err(
                        n,
                        format!("literal {l} exceeds {num_vars} variables"),
                    ));
                } else {
                    lits.push(l);
                }
            }
        } else {
            return Err(parse_err(n, format!("unrecognized line {t:?}")));
        }
    }
    match status {
        None => Err(parse_err(0, "no status line")),
        Some(false) => Ok(SolveOutcome::Unsat),
        Some(true) => Ok(SolveOutcome::Sat(Model::from_literals(num_vars, &lits)?)),
    }
}
