//! Subcommands. Each returns a [`RunManifest`] whose `result` is the
//! machine-readable summary, plus a human-readable rendering for `--pretty`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use expansat::axioms::{
    build_closed_domain, check, check_canonical_solution, AxiomId, Closure, ProfileDomain,
    SolutionAssignment,
};
use expansat::domain::{majoritarian_domain, pairwise_domain, CanonicalDomain};
use expansat::projections::parse_method;
use expansat::representation::{debord, mcgarvey, rep_weak, rep_weighted};
use expansat::sat::{
    build_majoritarian_cnf, build_pairwise_cnf, decode_model, minimize_domain, read_dimacs,
    read_solver_output, run_solver, write_dimacs, ClauseRecord, CnfDocument, EmbeddingRestriction,
    ExternalSolver, MajoritarianOptions, SatBackend, SolveOutcome, VariableRegistry,
};
use expansat::{
    Candidate, CandidateSet, Error, GraphKind, Labels, Profile, ProfileJson, Structure,
    TournamentJson, WeakTournament, WeightedWeakTournament,
};

use crate::backend::Backend;
use crate::domain_file::{AnyDomain, DomainKind};
use crate::manifest::RunManifest;
use crate::reproduce::{self, Claim};

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            kind: "usage",
            message: msg.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "code": self.code, "message": self.message } })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Solver(_) => (EXIT_SOLVER, "solver"),
            Error::Integrity(_) => (EXIT_MISMATCH, "integrity"),
            Error::Domain(_) => (EXIT_USAGE, "domain"),
            Error::Precondition(_) => (EXIT_USAGE, "precondition"),
            Error::Capacity(_) => (EXIT_USAGE, "capacity"),
            Error::Parse { .. } => (EXIT_USAGE, "parse"),
            Error::Io(_) => (EXIT_USAGE, "io"),
            Error::Json(_) => (EXIT_USAGE, "json"),
        };
        CliError {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "expansat",
    version,
    about = "Expansion-consistency axioms: enumeration, checking and SAT encodings"
)]
pub struct Cli {
    /// Human-readable output instead of one JSON line.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads for clause generation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also write the run manifest to this file.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Majoritarian,
    Pairwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Block,
    Mcgarvey,
    Debord,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Write a domain of canonical graphs.
    Enumerate {
        #[arg(long, value_enum)]
        kind: DomainKind,
        /// Largest node count.
        #[arg(long)]
        n: usize,
        /// Smallest node count (defaults to `n`).
        #[arg(long)]
        from: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12")]
        weights: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode a domain as DIMACS plus a clause metadata sidecar.
    Encode {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        fix_two_candidate: bool,
        /// Majoritarian axiom schemas to emit besides func.
        #[arg(long, value_delimiter = ',', default_value = "bqr,bg,ar")]
        axioms: Vec<String>,
        /// Pairwise only: JSON list of allowed embeddings.
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        meta: PathBuf,
    },
    /// Run a SAT solver on a DIMACS file.
    Solve {
        #[arg(long)]
        cnf: PathBuf,
        /// Executable path, or `builtin:cadical` / `builtin:varisat`.
        #[arg(long, default_value = "builtin:cadical")]
        solver: String,
        /// Where to write the solver output (SAT-competition format).
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        timeout_secs: Option<u64>,
    },
    /// Turn a model into winner sets.
    Decode {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Re-check the decoded solution against the axioms; needs `--domain`.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedily drop domain members while the encoding stays unsatisfiable.
    Minimize {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, value_enum, default_value = "pairwise")]
        mode: Mode,
        #[arg(long, default_value = "builtin:cadical")]
        solver: String,
        #[arg(long)]
        fix_two_candidate: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check an axiom for a voting method on a profile domain.
    Check {
        #[arg(long)]
        axiom: String,
        /// A method id, `maj:<id>@<Y>` or `pair:<id>@<Y>,<m>`.
        #[arg(long)]
        method: String,
        #[arg(long)]
        profiles: PathBuf,
        /// Closure constructions: `restrictions`, `scaling:<k>`, `cancellation`.
        #[arg(long, value_delimiter = ',')]
        closure: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Build a profile whose majority or margin graph is the given graph.
    Represent {
        #[arg(long)]
        graph: PathBuf,
        /// Ambient node ids.
        #[arg(long, value_delimiter = ',')]
        ambient: Vec<u8>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, value_enum, default_value = "block")]
        construction: Construction,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive a worked example or table; exits 1 on any mismatch.
    Reproduce {
        /// Claims to check; all when omitted.
        #[arg(value_enum)]
        claims: Vec<Claim>,
    },
}

/// Outcome of a command: its manifest, a text rendering and an exit code.
pub struct Outcome {
    pub manifest: RunManifest,
    pub text: String,
    pub code: u8,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure {n} threads: {e}")))?;
    }
    let start = Instant::now();
    let mut out = match &cli.cmd {
        Cmd::Enumerate {
            kind,
            n,
            from,
            weights,
            out,
        } => enumerate(*kind, *n, from.unwrap_or(*n), weights, out),
        Cmd::Encode {
            mode,
            domain,
            fix_two_candidate,
            axioms,
            embeddings,
            out,
            meta,
        } => encode(
            *mode,
            domain,
            *fix_two_candidate,
            axioms,
            embeddings.as_deref(),
            out,
            meta,
        ),
        Cmd::Solve {
            cnf,
            solver,
            model,
            timeout_secs,
        } => solve(cnf, solver, model.as_deref(), *timeout_secs),
        Cmd::Decode {
            cnf,
            meta,
            model,
            verify,
            domain,
            out,
        } => decode(cnf, meta, model, *verify, domain.as_deref(), out.as_deref()),
        Cmd::Minimize {
            domain,
            mode,
            solver,
            fix_two_candidate,
            out,
        } => minimize(domain, *mode, solver, *fix_two_candidate, out),
        Cmd::Check {
            axiom,
            method,
            profiles,
            closure,
            cap,
        } => check_cmd(axiom, method, profiles, closure, *cap),
        Cmd::Represent {
            graph,
            ambient,
            m,
            construction,
            out,
        } => represent(graph, ambient, *m, *construction, out.as_deref()),
        Cmd::Reproduce { claims } => reproduce_cmd(claims),
    }?;
    out.manifest.wall_time_ms = start.elapsed().as_millis();
    Ok(out)
}

fn done(
    mut manifest: RunManifest,
    start: Instant,
    result: Value,
    text: String,
    code: u8,
) -> CliResult<Outcome> {
    manifest.finish(start.elapsed(), result);
    Ok(Outcome {
        manifest,
        text,
        code,
    })
}

fn histogram_text(h: &BTreeMap<usize, usize>) -> String {
    h.iter()
        .map(|(n, k)| format!("{n} nodes: {k}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn enumerate(
    kind: DomainKind,
    n: usize,
    from: usize,
    weights: &[u64],
    out: &Path,
) -> CliResult<Outcome> {
    let start = Instant::now();
    if from > n || from == 0 {
        return Err(CliError::usage(format!("node range {from}..={n} is empty")));
    }
    let mut m = RunManifest::new(
        "enumerate",
        json!({ "kind": kind, "from": from, "n": n, "weights": weights }),
    );
    let dom = match kind {
        DomainKind::Tournament => {
            AnyDomain::Majoritarian(kind, majoritarian_domain(GraphKind::Tournament, from, n)?)
        }
        DomainKind::Weak => {
            AnyDomain::Majoritarian(kind, majoritarian_domain(GraphKind::Weak, from, n)?)
        }
        DomainKind::Weighted => {
            AnyDomain::Weighted(Some(weights.to_vec()), pairwise_domain(from, n, weights)?)
        }
    };
    std::fs::write(out, serde_json::to_vec(&dom.to_file())?)?;
    m.output(out)?;
    let h = dom.size_histogram();
    let mut result = json!({ "total": dom.len(), "by_size": h });
    if let AnyDomain::Weighted(_, d) = &dom {
        result["node_total"] = json!(d.total_nodes());
    }
    let text = format!("{}\ntotal: {}", histogram_text(&h), dom.len());
    done(m, start, result, text, EXIT_OK)
}

fn schema_options(fix: bool, axioms: &[String]) -> CliResult<MajoritarianOptions> {
    let mut o = MajoritarianOptions {
        fix_two_candidate_case: fix,
        bqr: false,
        bg: false,
        ar: false,
    };
    for a in axioms {
        match a.as_str() {
            "bqr" => o.bqr = true,
            "bg" => o.bg = true,
            "ar" => o.ar = true,
            "" | "none" => {}
            other => return Err(CliError::usage(format!("unknown axiom schema {other:?}"))),
        }
    }
    Ok(o)
}

fn encode_domain(
    dom: &AnyDomain,
    mode: Mode,
    opts: MajoritarianOptions,
    emb: Option<&EmbeddingRestriction>,
) -> CliResult<CnfDocument> {
    match (mode, dom) {
        (Mode::Majoritarian, AnyDomain::Majoritarian(_, d)) => {
            if emb.is_some() {
                return Err(CliError::usage(
                    "--embeddings applies to the pairwise mode only",
                ));
            }
            Ok(build_majoritarian_cnf(d, opts)?)
        }
        (Mode::Pairwise, AnyDomain::Weighted(_, d)) => Ok(build_pairwise_cnf(d, emb)?),
        (Mode::Majoritarian, _) => Err(CliError::usage(
            "majoritarian mode needs a tournament or weak domain",
        )),
        (Mode::Pairwise, _) => Err(CliError::usage("pairwise mode needs a weighted domain")),
    }
}

fn doc_summary(doc: &CnfDocument) -> Value {
    let by: BTreeMap<&str, usize> = doc
        .counts_by_origin()
        .into_iter()
        .map(|(o, n)| (o.as_str(), n))
        .collect();
    json!({
        "variables": doc.num_vars(),
        "clauses": doc.num_clauses(),
        "raw_clauses": doc.raw_clause_count,
        "by_origin": by,
    })
}

fn encode(
    mode: Mode,
    domain: &Path,
    fix: bool,
    axioms: &[String],
    embeddings: Option<&Path>,
    out: &Path,
    meta: &Path,
) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut m = RunManifest::new(
        "encode",
        json!({ "mode": format!("{mode:?}").to_lowercase(), "fix_two_candidate": fix, "axioms": axioms }),
    );
    m.input(domain)?;
    let dom = AnyDomain::read(domain)?;
    let emb: Option<EmbeddingRestriction> = match embeddings {
        Some(p) => {
            m.input(p)?;
            Some(serde_json::from_slice(&std::fs::read(p)?)?)
        }
        None => None,
    };
    let doc = encode_domain(&dom, mode, schema_options(fix, axioms)?, emb.as_ref())?;
    write_dimacs(&doc, out)?;
    std::fs::write(meta, serde_json::to_vec(&doc.meta)?)?;
    m.output(out)?;
    m.output(meta)?;
    let result = doc_summary(&doc);
    let text = format!(
        "variables: {}\nclauses: {} ({} before deduplication)\n{}",
        doc.num_vars(),
        doc.num_clauses(),
        doc.raw_clause_count,
        doc.counts_by_origin()
            .iter()
            .map(|(o, n)| format!("  {}: {n}", o.as_str()))
            .collect::<Vec<_>>()
            .join("\n")
    );
    done(m, start, result, text, EXIT_OK)
}

/// `builtin:<name>` selects an in-process backend, anything else is an executable.
pub fn solver_from(spec: &str, timeout: Option<Duration>) -> CliResult<Box<dyn SatBackend>> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Backend::parse(name)
            .map(|b| Box::new(b) as Box<dyn SatBackend>)
            .ok_or_else(|| CliError::usage(format!("unknown builtin solver {name:?}")));
    }
    let mut s = ExternalSolver::new(spec);
    if let Some(t) = timeout {
        s = s.with_timeout(t);
    }
    Ok(Box::new(s))
}

fn solver_output(outcome: &SolveOutcome) -> String {
    match outcome {
        SolveOutcome::Unsat => "s UNSATISFIABLE\n".into(),
        SolveOutcome::Sat(model) => {
            let mut s = String::from("s SATISFIABLE\n");
            for chunk in model.literals().chunks(20) {
                let _ = writeln!(
                    s,
                    "v {}",
                    chunk
                        .iter()
                        .map(|l| l.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            s.push_str("v 0\n");
            s
        }
    }
}

fn solve(
    cnf: &Path,
    solver: &str,
    model: Option<&Path>,
    timeout: Option<u64>,
) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut m = RunManifest::new(
        "solve",
        json!({ "solver": solver, "timeout_secs": timeout }),
    );
    m.input(cnf)?;
    let f = read_dimacs(BufReader::new(std::fs::File::open(cnf)?))?;
    let t0 = Instant::now();
    let outcome = match solver.strip_prefix("builtin:") {
        Some(name) => {
            let b = Backend::parse(name)
                .ok_or_else(|| CliError::usage(format!("unknown builtin solver {name:?}")))?;
            m.solver = Some(b.name());
            b.solve_clauses(f.num_vars, &f.clauses)?
        }
        None => {
            let mut s = ExternalSolver::new(solver);
            if let Some(t) = timeout {
                s = s.with_timeout(Duration::from_secs(t));
            }
            m.solver = Some(s.name());
            s.run_file(cnf, f.num_vars)?
        }
    };
    let solve_time = t0.elapsed();
    if let SolveOutcome::Sat(model) = &outcome {
        let bad = f.clauses.iter().position(|c| {
            !c.iter()
                .any(|&l| model.values[l.unsigned_abs() as usize] == (l > 0))
        });
        if let Some(i) = bad {
            return Err(Error::Integrity(format!("solver model falsifies clause {i}")).into());
        }
    }
    if let Some(p) = model {
        std::fs::write(p, solver_output(&outcome))?;
        m.output(p)?;
    }
    let verdict = if outcome.is_sat() { "sat" } else { "unsat" };
    let result = json!({
        "verdict": verdict,
        "variables": f.num_vars,
        "clauses": f.clauses.len(),
        "solve_ms": solve_time.as_millis(),
    });
    done(
        m,
        start,
        result,
        format!("{verdict} ({} ms)", solve_time.as_millis()),
        EXIT_OK,
    )
}

/// Rebuild a document from a DIMACS file and its metadata sidecar.
pub fn load_document(cnf: &Path, meta: &Path) -> CliResult<CnfDocument> {
    let f = read_dimacs(BufReader::new(std::fs::File::open(cnf)?))?;
    let meta: Vec<ClauseRecord> = serde_json::from_slice(&std::fs::read(meta)?)?;
    if meta.len() != f.clauses.len() {
        return Err(CliError::usage(format!(
            "{} metadata records for {} clauses",
            meta.len(),
            f.clauses.len()
        )));
    }
    let members = meta
        .iter()
        .flat_map(|r| r.tournaments.iter().copied())
        .max()
        .map_or(0, |t| t + 1);
    let registry = VariableRegistry::from_records(&f.clauses, &meta, members)?;
    if registry.num_vars() != f.num_vars {
        return Err(Error::Integrity(format!(
            "metadata registers {} variables, header says {}",
            registry.num_vars(),
            f.num_vars
        ))
        .into());
    }
    let raw = f.clauses.len();
    Ok(CnfDocument {
        registry,
        clauses: f.clauses,
        meta,
        raw_clause_count: raw,
    })
}

fn set_ids(s: CandidateSet) -> Vec<u8> {
    s.iter().map(|c| c.0).collect()
}

fn verify_against<G: expansat::axioms::CanonicalGraph>(
    a: &SolutionAssignment,
    doc: &CnfDocument,
    dom: &CanonicalDomain<G>,
    axioms: &[AxiomId],
    singletons: bool,
) -> CliResult<Option<Value>> {
    if dom.len() != doc.registry.member_count() {
        return Err(CliError::usage(format!(
            "domain has {} members, the encoding {}",
            dom.len(),
            doc.registry.member_count()
        )));
    }
    for i in 0..dom.len() {
        let want: Vec<CandidateSet> = if singletons {
            dom.entry(i)
                .graph
                .node_set()
                .iter()
                .map(CandidateSet::singleton)
                .collect()
        } else {
            dom.admissible(i)
        };
        let mut got = doc.registry.sets(i).to_vec();
        let mut want = want;
        got.sort();
        want.sort();
        if got != want {
            return Err(CliError::usage(format!(
                "member {i} of the domain does not match the encoding"
            )));
        }
    }
    Ok(check_canonical_solution(a, dom, axioms)?
        .map(|w| serde_json::to_value(w).expect("witness serializes")))
}

fn decode(
    cnf: &Path,
    meta: &Path,
    model: &Path,
    verify: bool,
    domain: Option<&Path>,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut m = RunManifest::new("decode", json!({ "verify": verify }));
    for p in [cnf, meta, model] {
        m.input(p)?;
    }
    let doc = load_document(cnf, meta)?;
    let model =
        match read_solver_output(BufReader::new(std::fs::File::open(model)?), doc.num_vars())? {
            SolveOutcome::Sat(x) => x,
            SolveOutcome::Unsat => {
                return Err(
                    Error::Precondition("the model file reports UNSATISFIABLE".into()).into(),
                )
            }
        };
    if let Some(i) = doc.satisfied_by(&model.values) {
        return Err(Error::Integrity(format!("model falsifies clause {i}")).into());
    }
    let a = decode_model(&doc, &model)?;
    let winners: Vec<Vec<u8>> = a.winners.iter().map(|&s| set_ids(s)).collect();
    if let Some(p) = out {
        std::fs::write(p, serde_json::to_vec(&json!({ "winners": winners }))?)?;
        m.output(p)?;
    }
    let mut result = json!({ "members": a.winners.len() });
    if out.is_none() {
        result["winners"] = json!(winners);
    }
    let mut code = EXIT_OK;
    let mut text = format!("decoded {} winner sets", a.winners.len());
    if verify {
        let dpath = domain.ok_or_else(|| CliError::usage("--verify needs --domain"))?;
        m.input(dpath)?;
        let witness = match AnyDomain::read(dpath)? {
            AnyDomain::Majoritarian(_, d) => verify_against(
                &a,
                &doc,
                &d,
                &[
                    AxiomId::OrbitCondition,
                    AxiomId::BinaryQuasiResoluteness,
                    AxiomId::CanonicalBinaryGamma,
                    AxiomId::CanonicalAlphaResoluteness,
                ],
                false,
            )?,
            AnyDomain::Weighted(_, d) => verify_against(
                &a,
                &doc,
                &d,
                &[AxiomId::QuasiResoluteness, AxiomId::CanonicalBinaryGamma],
                true,
            )?,
        };
        result["verified"] = json!(witness.is_none());
        if let Some(w) = witness {
            let _ = write!(text, "\nverification FAILED: {w}");
            result["witness"] = w;
            code = EXIT_MISMATCH;
        } else {
            text.push_str("\nverification passed");
        }
    }
    done(m, start, result, text, code)
}

fn minimize(domain: &Path, mode: Mode, solver: &str, fix: bool, out: &Path) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut m = RunManifest::new(
        "minimize",
        json!({ "mode": format!("{mode:?}").to_lowercase(), "solver": solver, "fix_two_candidate": fix }),
    );
    m.input(domain)?;
    let dom = AnyDomain::read(domain)?;
    let backend = solver_from(solver, None)?;
    m.solver = Some(backend.name());
    let opts = MajoritarianOptions {
        fix_two_candidate_case: fix,
        ..MajoritarianOptions::default()
    };
    let full = encode_domain(&dom, mode, opts, None)?;
    let rebuild = |keep: &[bool]| full.restrict_to_members(keep);
    let (reduced, kept, calls) = match &dom {
        AnyDomain::Majoritarian(k, d) => {
            let r = minimize_domain(d, &rebuild, backend.as_ref())?;
            (
                AnyDomain::Majoritarian(*k, r.domain),
                r.kept,
                r.solver_calls,
            )
        }
        AnyDomain::Weighted(w, d) => {
            let r = minimize_domain(d, &rebuild, backend.as_ref())?;
            (
                AnyDomain::Weighted(w.clone(), r.domain),
                r.kept,
                r.solver_calls,
            )
        }
    };
    // Second route: encode the reduced domain from scratch.
    let fresh = encode_domain(&reduced, mode, opts, None)?;
    let still_unsat = !run_solver(&fresh, backend.as_ref())?.outcome.is_sat();
    std::fs::write(out, serde_json::to_vec(&reduced.to_file())?)?;
    m.output(out)?;
    let h = reduced.size_histogram();
    let result = json!({
        "input_size": dom.len(),
        "kept": kept.len(),
        "kept_indices": kept,
        "by_size": h,
        "solver_calls": calls,
        "reencoded_unsat": still_unsat,
    });
    let text = format!(
        "kept {} of {} members after {calls} solver calls\n{}\nre-encoded reduced domain unsat: {still_unsat}",
        kept.len(),
        dom.len(),
        histogram_text(&h)
    );
    let code = if still_unsat { EXIT_OK } else { EXIT_MISMATCH };
    done(m, start, result, text, code)
}

/// Accepts a single profile, or `{ "labels": [...], "profiles": {name: profile} | [profile] }`.
pub fn load_profiles(v: &Value) -> CliResult<(Labels, Vec<Profile>)> {
    if let Some(ls) = v.get("labels") {
        let labels = Labels::new(serde_json::from_value::<Vec<String>>(ls.clone())?)?;
        let list: Vec<ProfileJson> = match v.get("profiles") {
            Some(Value::Object(map)) => map
                .values()
                .map(|p| serde_json::from_value(p.clone()))
                .collect::<Result<_, _>>()?,
            Some(Value::Array(a)) => a
                .iter()
                .map(|p| serde_json::from_value(p.clone()))
                .collect::<Result<_, _>>()?,
            _ => {
                return Err(CliError::usage(
                    "\"profiles\" must be an object or an array",
                ))
            }
        };
        let ps = list
            .iter()
            .map(|j| Profile::from_json(j, &labels))
            .collect::<expansat::Result<Vec<_>>>()?;
        return Ok((labels, ps));
    }
    let j: ProfileJson = serde_json::from_value(v.clone())?;
    let labels = Labels::new(j.candidates.iter().cloned())?;
    let p = Profile::from_json(&j, &labels)?;
    Ok((labels, vec![p]))
}

fn parse_closure(items: &[String]) -> CliResult<Closure> {
    let mut c = Closure::default();
    for it in items {
        match it.split_once(':') {
            None if it == "restrictions" => c.restrictions = true,
            None if it == "cancellation" => c.cancellation = true,
            None if it == "none" || it.is_empty() => {}
            Some(("scaling", k)) => {
                c.scaling = Some(
                    k.parse()
                        .map_err(|_| CliError::usage(format!("bad scaling bound {k:?}")))?,
                )
            }
            _ => return Err(CliError::usage(format!("unknown closure {it:?}"))),
        }
    }
    Ok(c)
}

fn check_cmd(
    axiom: &str,
    method: &str,
    profiles: &Path,
    closure: &[String],
    cap: usize,
) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut m = RunManifest::new(
        "check",
        json!({ "axiom": axiom, "method": method, "closure": closure, "cap": cap }),
    );
    m.input(profiles)?;
    let ax: AxiomId = axiom.parse()?;
    let v: Value = serde_json::from_slice(&std::fs::read(profiles)?)?;
    let (labels, seeds) = load_profiles(&v)?;
    let f: Arc<dyn expansat::methods::VotingMethod> = parse_method(method, &labels)?;
    let c = parse_closure(closure)?;
    let dom = if c == Closure::default() {
        ProfileDomain::new(seeds)
    } else {
        build_closed_domain(&seeds, c, cap)?
    };
    let w = check(ax, f.as_ref(), &dom)?;
    let result = json!({
        "axiom": ax.as_str(),
        "method": f.name(),
        "domain_size": dom.len(),
        "satisfied": w.is_none(),
        "witness": w.as_ref().map(|w| w.to_json(&labels)),
    });
    let text = match &w {
        None => format!("{} satisfies {} on {} profiles", f.name(), ax, dom.len()),
        Some(w) => format!(
            "{} violates {}:\n{}",
            f.name(),
            ax,
            serde_json::to_string_pretty(&w.to_json(&labels))?
        ),
    };
    done(m, start, result, text, EXIT_OK)
}

fn represent(
    graph: &Path,
    ambient: &[u8],
    mm: Option<u64>,
    construction: Construction,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut m = RunManifest::new(
        "represent",
        json!({ "ambient": ambient, "m": mm, "construction": format!("{construction:?}").to_lowercase() }),
    );
    m.input(graph)?;
    let j: TournamentJson = serde_json::from_slice(&std::fs::read(graph)?)?;
    let is_weighted = j.edges.iter().any(|e| e.len() == 3);
    let y: CandidateSet = ambient.iter().map(|&i| Candidate(i)).collect();
    let p = match (construction, is_weighted) {
        (Construction::Block, false) => {
            let t = WeakTournament::from_json(&j)?;
            let y = if ambient.is_empty() { t.node_set() } else { y };
            match mm {
                None => rep_weak(&t, y)?,
                Some(k) => rep_weighted(
                    &t.with_weight(expansat::representation::psi(y.len())?)?,
                    y,
                    k,
                )?,
            }
        }
        (Construction::Block, true) => {
            let t = WeightedWeakTournament::from_json(&j)?;
            let y = if ambient.is_empty() { t.node_set() } else { y };
            rep_weighted(
                &t,
                y,
                mm.ok_or_else(|| CliError::usage("weighted graphs need --m"))?,
            )?
        }
        (Construction::Mcgarvey, false) => mcgarvey(&WeakTournament::from_json(&j)?)?,
        (Construction::Mcgarvey, true) => {
            mcgarvey(&WeightedWeakTournament::from_json(&j)?.support())?
        }
        (Construction::Debord, false) => debord(&WeakTournament::from_json(&j)?.with_weight(2)?)?,
        (Construction::Debord, true) => debord(&WeightedWeakTournament::from_json(&j)?)?,
    };
    let max = p.candidates().iter().map(|c| c.index()).max().unwrap_or(0);
    let labels = Labels::numeric(max + 1);
    let pj = p.to_json(&labels);
    // The construction has to reproduce its input.
    let realized = if is_weighted && construction != Construction::Mcgarvey {
        p.margin_graph() == WeightedWeakTournament::from_json(&j)?
    } else {
        p.majority_graph() == WeakTournament::from_json(&j)?
    };
    if let Some(o) = out {
        std::fs::write(o, serde_json::to_vec(&pj)?)?;
        m.output(o)?;
    }
    let result = json!({
        "voters": p.voter_count(),
        "distinct_ballots": p.distinct_ballots(),
        "realizes_graph": realized,
        "profile": if out.is_none() { serde_json::to_value(&pj)? } else { Value::Null },
    });
    let mut text = format!(
        "{} voters, {} distinct ballots\n",
        p.voter_count(),
        p.distinct_ballots()
    );
    for b in &pj.ballots {
        let _ = writeln!(text, "{:>6}  {}", b.count, b.order.join(" "));
    }
    let code = if realized { EXIT_OK } else { EXIT_MISMATCH };
    done(m, start, result, text, code)
}

fn reproduce_cmd(claims: &[Claim]) -> CliResult<Outcome> {
    let start = Instant::now();
    let claims: Vec<Claim> = if claims.is_empty() {
        Claim::ALL.to_vec()
    } else {
        claims.to_vec()
    };
    let m = RunManifest::new(
        "reproduce",
        json!({ "claims": claims.iter().map(|c| c.name()).collect::<Vec<_>>() }),
    );
    let mut reports = Vec::new();
    let mut text = String::new();
    for c in claims {
        let r = reproduce::run(c)?;
        for chk in &r.checks {
            let tag = if chk.ok { "PASS" } else { "FAIL" };
            let _ = write!(text, "{tag} {} :: {}", r.claim, chk.name);
            if !chk.ok {
                let _ = write!(text, " (expected {}, got {})", chk.expected, chk.actual);
            }
            text.push('\n');
        }
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.ok());
    let result = json!({
        "verified": ok,
        "claims": reports.iter().map(|r| json!({
            "claim": r.claim,
            "verified": r.ok(),
            "checks": r.checks.len(),
            "failures": r.failures().collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    done(
        m,
        start,
        result,
        text.trim_end().to_string(),
        if ok { EXIT_OK } else { EXIT_MISMATCH },
    )
}
