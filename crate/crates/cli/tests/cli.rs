//! End-to-end runs of the `expansat` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expansat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(out: &Output) -> Value {
    let line = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(line.trim())
        .unwrap_or_else(|e| panic!("stdout is not one JSON manifest ({e}): {line}"))
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    manifest(&out)
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn stderr_error(out: &Output) -> Value {
    let e: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON error");
    e["error"].clone()
}

#[test]
fn enumerate_encode_solve_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (kind, from, n, members) in [("weak", "1", "3", 10), ("tournament", "2", "4", 7)] {
        let dom = p(d, &format!("{kind}.json"));
        let m = ok(&[
            "enumerate",
            "--kind",
            kind,
            "--from",
            from,
            "--n",
            n,
            "--out",
            &dom,
        ]);
        assert_eq!(m["result"]["total"], members);
        let (cnf, meta, model, win) = (
            p(d, "f.cnf"),
            p(d, "f.meta.json"),
            p(d, "f.model"),
            p(d, "w.json"),
        );
        let m = ok(&[
            "encode",
            "--mode",
            "majoritarian",
            "--domain",
            &dom,
            "--out",
            &cnf,
            "--meta",
            &meta,
        ]);
        assert!(m["outputs"].as_object().unwrap().contains_key(&cnf));
        for solver in [
            "builtin:cadical",
            "builtin:varisat",
            env!("CARGO_BIN_EXE_dimacs-solve"),
        ] {
            let m = ok(&[
                "solve", "--cnf", &cnf, "--solver", solver, "--model", &model,
            ]);
            assert_eq!(m["result"]["verdict"], "sat", "{solver}");
            let m = ok(&[
                "decode", "--cnf", &cnf, "--meta", &meta, "--model", &model, "--verify",
                "--domain", &dom, "--out", &win,
            ]);
            assert_eq!(m["result"]["verified"], true);
            let w: Value = serde_json::from_str(&std::fs::read_to_string(&win).unwrap()).unwrap();
            assert_eq!(w["winners"].as_array().unwrap().len(), members);
        }
    }
}

#[test]
fn tournament_domain_is_unsat_and_minimizes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let dom = p(d, "t.json");
    ok(&[
        "enumerate",
        "--kind",
        "tournament",
        "--from",
        "2",
        "--n",
        "6",
        "--out",
        &dom,
    ]);
    let (cnf, meta) = (p(d, "t.cnf"), p(d, "t.meta.json"));
    let m = ok(&[
        "encode",
        "--mode",
        "majoritarian",
        "--domain",
        &dom,
        "--out",
        &cnf,
        "--meta",
        &meta,
    ]);
    assert_eq!(m["result"]["variables"], 3041);
    let m = ok(&["solve", "--cnf", &cnf]);
    assert_eq!(m["result"]["verdict"], "unsat");
    let min = p(d, "min.json");
    let m = ok(&[
        "minimize",
        "--mode",
        "majoritarian",
        "--domain",
        &dom,
        "--out",
        &min,
    ]);
    assert_eq!(m["result"]["reencoded_unsat"], true);
    let kept = m["result"]["kept"].as_u64().unwrap();
    assert!(kept < 75);
    // The minimized domain is itself a valid domain file whose encoding stays unsat.
    ok(&[
        "encode",
        "--mode",
        "majoritarian",
        "--domain",
        &min,
        "--out",
        &cnf,
        "--meta",
        &meta,
    ]);
    assert_eq!(ok(&["solve", "--cnf", &cnf])["result"]["verdict"], "unsat");
}

#[test]
fn satisfiable_minimize_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let dom = p(dir.path(), "w.json");
    ok(&[
        "enumerate",
        "--kind",
        "weighted",
        "--from",
        "2",
        "--n",
        "3",
        "--out",
        &dom,
    ]);
    let out = run(&[
        "minimize",
        "--domain",
        &dom,
        "--out",
        &p(dir.path(), "m.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["kind"], "precondition");
}

#[test]
fn exit_codes_and_error_json() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["kind"], "usage");
    assert!(out.stdout.is_empty());

    let out = run(&[
        "enumerate",
        "--kind",
        "tournament",
        "--n",
        "9",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["code"], 2);

    let dir = tempfile::tempdir().unwrap();
    let dom = p(dir.path(), "t.json");
    ok(&[
        "enumerate",
        "--kind",
        "tournament",
        "--from",
        "2",
        "--n",
        "3",
        "--out",
        &dom,
    ]);
    let (cnf, meta) = (p(dir.path(), "t.cnf"), p(dir.path(), "t.meta.json"));
    ok(&[
        "encode",
        "--mode",
        "majoritarian",
        "--domain",
        &dom,
        "--out",
        &cnf,
        "--meta",
        &meta,
    ]);
    let out = run(&["solve", "--cnf", &cnf, "--solver", "/nonexistent/solver"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_error(&out)["kind"], "solver");

    // The four-node Banks check is a documented mismatch.
    let out = run(&["reproduce", "banks-example"]);
    assert_eq!(out.status.code(), Some(1));
    for claim in [
        "prop-2-8",
        "prop-2-12",
        "pareto-example",
        "figure-6-7",
        "table-tournament-counts",
    ] {
        assert_eq!(run(&["reproduce", claim]).status.code(), Some(0), "{claim}");
    }
}

#[test]
fn tampered_model_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let dom = p(d, "w.json");
    ok(&[
        "enumerate",
        "--kind",
        "weak",
        "--from",
        "1",
        "--n",
        "3",
        "--out",
        &dom,
    ]);
    let (cnf, meta, model) = (p(d, "f.cnf"), p(d, "f.meta.json"), p(d, "f.model"));
    ok(&[
        "encode",
        "--mode",
        "majoritarian",
        "--domain",
        &dom,
        "--out",
        &cnf,
        "--meta",
        &meta,
    ]);
    ok(&["solve", "--cnf", &cnf, "--model", &model]);
    // Flip every literal: the model now falsifies the at-least-one clauses.
    let text = std::fs::read_to_string(&model).unwrap();
    let flipped: String = text
        .lines()
        .map(|l| match l.strip_prefix("v ") {
            Some(v) => {
                let lits: Vec<String> = v
                    .split_whitespace()
                    .map(|t| t.parse::<i64>().unwrap())
                    .map(|l| (-l).to_string())
                    .collect();
                format!("v {}\n", lits.join(" "))
            }
            None => format!("{l}\n"),
        })
        .collect();
    std::fs::write(&model, flipped).unwrap();
    let out = run(&[
        "decode", "--cnf", &cnf, "--meta", &meta, "--model", &model, "--verify", "--domain", &dom,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_error(&out)["kind"], "integrity");
}

#[test]
fn manifests_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(dir.path(), "a.json"), p(dir.path(), "b.json"));
    let mf = p(dir.path(), "manifest.json");
    let ma = ok(&[
        "enumerate",
        "--kind",
        "weighted",
        "--from",
        "2",
        "--n",
        "3",
        "--out",
        &a,
        "--manifest",
        &mf,
    ]);
    let mb = ok(&[
        "enumerate",
        "--kind",
        "weighted",
        "--from",
        "2",
        "--n",
        "3",
        "--out",
        &b,
    ]);
    assert_eq!(ma["outputs"][&a], mb["outputs"][&b]);
    assert_eq!(ma["result"]["total"], 166);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&mf).unwrap()).unwrap();
    assert_eq!(written["command"], "enumerate");
    assert_eq!(written["outputs"], ma["outputs"]);
}

#[test]
fn represent_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = p(d, "g.json");
    std::fs::write(&g, r#"{"nodes":3,"edges":[[0,1,2],[1,2,4],[2,0,6]]}"#).unwrap();
    let prof = p(d, "p.json");
    let m = ok(&[
        "represent",
        "--graph",
        &g,
        "--ambient",
        "0,1,2",
        "--m",
        "3",
        "--out",
        &prof,
    ]);
    assert_eq!(m["result"]["realizes_graph"], true);
    assert_eq!(m["result"]["voters"], 18);
    let m = ok(&["represent", "--graph", &g, "--construction", "debord"]);
    assert_eq!(m["result"]["realizes_graph"], true);
    let bad = run(&["represent", "--graph", &g, "--ambient", "0,1,2", "--m", "2"]);
    assert_eq!(bad.status.code(), Some(2));

    let m = ok(&[
        "check",
        "--axiom",
        "binary_gamma",
        "--method",
        "split_cycle",
        "--profiles",
        &prof,
        "--closure",
        "restrictions",
    ]);
    assert_eq!(m["result"]["satisfied"], true);
    assert_eq!(m["result"]["domain_size"], 7);

    let pareto = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/pareto_profile.json");
    let m = ok(&[
        "check",
        "--axiom",
        "gamma",
        "--method",
        "pareto_scoring",
        "--profiles",
        pareto,
        "--closure",
        "restrictions",
    ]);
    assert_eq!(m["result"]["satisfied"], false);
    assert_eq!(m["result"]["witness"]["axiom"], "gamma");
    let m = ok(&[
        "check",
        "--axiom",
        "binary_gamma",
        "--method",
        "pareto_scoring",
        "--profiles",
        pareto,
        "--closure",
        "restrictions",
    ]);
    assert_eq!(m["result"]["satisfied"], true);

    let unclosed = run(&[
        "check",
        "--axiom",
        "binary_gamma",
        "--method",
        "banks",
        "--profiles",
        pareto,
    ]);
    assert_eq!(unclosed.status.code(), Some(2));
    assert_eq!(stderr_error(&unclosed)["kind"], "precondition");
}
