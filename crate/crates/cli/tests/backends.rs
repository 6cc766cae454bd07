//! The two in-process backends and the shim agree, and decoded solutions
//! survive being pinned with unit clauses.

use expansat::axioms::{check_canonical_solution, AxiomId};
use expansat::domain::majoritarian_domain;
use expansat::sat::{
    build_majoritarian_cnf, decode_model, run_solver, ExternalSolver, MajoritarianOptions,
    SolveOutcome,
};
use expansat::GraphKind;
use expansat_cli::backend::Backend;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_sat(num_vars: usize, clauses: &[Vec<i32>]) -> bool {
    (0u32..(1 << num_vars)).any(|bits| {
        clauses.iter().all(|c| {
            c.iter()
                .any(|&l| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
        })
    })
}

#[test]
fn backends_agree_with_brute_force_on_random_3cnf() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut seen = [0, 0];
    for _ in 0..300 {
        let n = rng.gen_range(3..=10);
        let m = rng.gen_range(1..=5 * n);
        let clauses: Vec<Vec<i32>> = (0..m)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let v = rng.gen_range(1..=n as i32);
                        if rng.gen() {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let expect = brute_sat(n, &clauses);
        seen[expect as usize] += 1;
        for b in [Backend::Cadical, Backend::Varisat] {
            let got = b.solve_clauses(n, &clauses).unwrap();
            assert_eq!(got.is_sat(), expect, "{b:?} on {clauses:?}");
            if let SolveOutcome::Sat(model) = got {
                assert!(clauses.iter().all(|c| c
                    .iter()
                    .any(|&l| model.values[l.unsigned_abs() as usize] == (l > 0))));
            }
        }
    }
    assert!(seen[0] > 20 && seen[1] > 20, "{seen:?}");
}

#[test]
fn shim_and_in_process_verdicts_match() {
    let mut shim = ExternalSolver::new(env!("CARGO_BIN_EXE_dimacs-solve"));
    for (kind, lo, hi) in [
        (GraphKind::Tournament, 2, 5),
        (GraphKind::Tournament, 2, 6),
        (GraphKind::Weak, 1, 4),
    ] {
        let dom = majoritarian_domain(kind, lo, hi).unwrap();
        let doc = build_majoritarian_cnf(&dom, MajoritarianOptions::default()).unwrap();
        let expect = run_solver(&doc, &Backend::Cadical)
            .unwrap()
            .outcome
            .is_sat();
        assert_eq!(
            run_solver(&doc, &Backend::Varisat)
                .unwrap()
                .outcome
                .is_sat(),
            expect
        );
        for backend in ["cadical", "varisat"] {
            shim.args = vec!["--backend".into(), backend.into()];
            assert_eq!(
                run_solver(&doc, &shim).unwrap().outcome.is_sat(),
                expect,
                "{kind:?} {lo}..{hi} via {backend}"
            );
        }
    }
}

#[test]
fn pinned_solutions_stay_consistent() {
    let dom = majoritarian_domain(GraphKind::Weak, 1, 4).unwrap();
    let doc = build_majoritarian_cnf(&dom, MajoritarianOptions::default()).unwrap();
    let SolveOutcome::Sat(model) = run_solver(&doc, &Backend::Cadical).unwrap().outcome else {
        panic!("weak <= 4 is sat")
    };
    let sol = decode_model(&doc, &model).unwrap();
    let axioms = [
        AxiomId::OrbitCondition,
        AxiomId::BinaryQuasiResoluteness,
        AxiomId::CanonicalBinaryGamma,
        AxiomId::CanonicalAlphaResoluteness,
    ];
    assert_eq!(check_canonical_solution(&sol, &dom, &axioms).unwrap(), None);

    // Pinning the whole decoded solution keeps the formula satisfiable.
    let units: Vec<i32> = (0..dom.len())
        .map(|i| doc.registry.var(i, sol.winners[i]).unwrap())
        .collect();
    assert!(run_solver(&doc.with_units(&units), &Backend::Varisat)
        .unwrap()
        .outcome
        .is_sat());

    // Forbidding a member's chosen set either yields a different valid solution or is unsat.
    for i in (0..dom.len()).filter(|&i| doc.registry.sets(i).len() > 1) {
        let pinned = doc.with_units(&[-units[i]]);
        if let SolveOutcome::Sat(m) = run_solver(&pinned, &Backend::Cadical).unwrap().outcome {
            let other = decode_model(&doc, &m).unwrap();
            assert_ne!(other.winners[i], sol.winners[i]);
            assert_eq!(
                check_canonical_solution(&other, &dom, &axioms).unwrap(),
                None
            );
        }
    }
}

#[test]
fn soundness_needs_every_schema() {
    // Dropping any one of bqr/bg/ar from the tournament formula makes it satisfiable.
    let dom = majoritarian_domain(GraphKind::Tournament, 2, 6).unwrap();
    let full = MajoritarianOptions::default();
    for opts in [
        MajoritarianOptions { bqr: false, ..full },
        MajoritarianOptions { bg: false, ..full },
        MajoritarianOptions { ar: false, ..full },
    ] {
        let doc = build_majoritarian_cnf(&dom, opts).unwrap();
        let out = run_solver(&doc, &Backend::Cadical).unwrap().outcome;
        if let SolveOutcome::Sat(m) = &out {
            decode_model(&doc, m).unwrap();
        }
        assert!(out.is_sat(), "{opts:?}");
    }
}
