//! Self-checking reproductions of the worked examples and tables.
//!
//! Every claim compares computed values with constants transcribed from the
//! worked examples; the profile fixtures themselves are validated, not trusted.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use expansat::axioms::{build_closed_domain, check, AxiomId, Closure};
use expansat::domain::pairwise_domain;
use expansat::methods::{MethodId, VotingMethod};
use expansat::representation::{debord, rep_weighted};
use expansat::sat::build_pairwise_cnf;
use expansat::{
    enumerate_canonical, enumerate_canonical_uniquely_weighted, Ballot, CandidateSet, GraphKind,
    Labels, Profile, ProfileJson, Result, WeakTournament, WeightedWeakTournament,
};

pub const EIGHTEEN_VOTER_PROFILE: &str = include_str!("../fixtures/eighteen_voter_profile.json");
pub const QUASI_RESOLUTE_PROFILES: &str = include_str!("../fixtures/quasi_resolute_profiles.json");
pub const NINE_VOTER_PROFILE: &str = include_str!("../fixtures/nine_voter_profile.json");
pub const PARETO_PROFILE: &str = include_str!("../fixtures/pareto_profile.json");

/// Weights of the uniquely weighted pairwise domain.
pub const PAIRWISE_WEIGHTS: [u64; 6] = [2, 4, 6, 8, 10, 12];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Claim {
    #[value(name = "table-tournament-counts")]
    TableTournamentCounts,
    #[value(name = "table-weighted-counts")]
    TableWeightedCounts,
    #[value(name = "prop-2-8")]
    EighteenVoterProfile,
    #[value(name = "prop-2-12")]
    QuasiResoluteProfiles,
    #[value(name = "banks-example")]
    BanksExample,
    #[value(name = "pareto-example")]
    ParetoExample,
    #[value(name = "figure-6-7")]
    RepresentationTables,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::TableTournamentCounts,
        Claim::TableWeightedCounts,
        Claim::EighteenVoterProfile,
        Claim::QuasiResoluteProfiles,
        Claim::BanksExample,
        Claim::ParetoExample,
        Claim::RepresentationTables,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::TableTournamentCounts => "table-tournament-counts",
            Claim::TableWeightedCounts => "table-weighted-counts",
            Claim::EighteenVoterProfile => "prop-2-8",
            Claim::QuasiResoluteProfiles => "prop-2-12",
            Claim::BanksExample => "banks-example",
            Claim::ParetoExample => "pareto-example",
            Claim::RepresentationTables => "figure-6-7",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim: &'static str,
    pub checks: Vec<Check>,
}

impl ClaimReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn eq<T: Debug + PartialEq>(&mut self, name: impl Into<String>, expected: T, actual: T) {
        self.0.push(Check {
            name: name.into(),
            ok: expected == actual,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        });
    }

    fn truth(&mut self, name: impl Into<String>, actual: bool) {
        self.eq(name, true, actual);
    }
}

pub fn run(claim: Claim) -> Result<ClaimReport> {
    let mut c = Checks::default();
    match claim {
        Claim::TableTournamentCounts => tournament_counts(&mut c)?,
        Claim::TableWeightedCounts => weighted_counts(&mut c)?,
        Claim::EighteenVoterProfile => eighteen_voter_profile(&mut c)?,
        Claim::QuasiResoluteProfiles => quasi_resolute_profiles(&mut c)?,
        Claim::BanksExample => banks_example(&mut c)?,
        Claim::ParetoExample => pareto_example(&mut c)?,
        Claim::RepresentationTables => representation_tables(&mut c)?,
    }
    Ok(ClaimReport {
        claim: claim.name(),
        checks: c.0,
    })
}

fn tournament_counts(c: &mut Checks) -> Result<()> {
    let expected = [(2, 1), (3, 2), (4, 4), (5, 12), (6, 56)];
    for (n, want) in expected {
        c.eq(
            format!("canonical tournaments on {n} nodes"),
            want,
            enumerate_canonical(GraphKind::Tournament, n)?.len(),
        );
    }
    for (n, want) in [(3, 7), (4, 42), (5, 582)] {
        c.eq(
            format!("canonical weak tournaments on {n} nodes"),
            want,
            enumerate_canonical(GraphKind::Weak, n)?.len(),
        );
    }
    Ok(())
}

fn weighted_counts(c: &mut Checks) -> Result<()> {
    let mut total = 0;
    for (n, want) in [(2, 6), (3, 160), (4, 1920)] {
        let got = enumerate_canonical_uniquely_weighted(n, &PAIRWISE_WEIGHTS)?.len();
        total += got;
        c.eq(
            format!("uniquely weighted tournaments on {n} nodes"),
            want,
            got,
        );
    }
    c.eq("total", 2086, total);
    let dom = pairwise_domain(2, 4, &PAIRWISE_WEIGHTS)?;
    c.eq("node total", 8172, dom.total_nodes());
    c.eq(
        "pairwise encoding variables",
        8172,
        build_pairwise_cnf(&dom, None)?.num_vars(),
    );
    Ok(())
}

/// Graph on the labelled `nodes` with the given weighted edges.
fn weighted(
    labels: &Labels,
    nodes: &[&str],
    edges: &[(&str, &str, u64)],
) -> Result<WeightedWeakTournament> {
    let mut g = WeightedWeakTournament::on(labels.set(nodes)?);
    for &(a, b, w) in edges {
        g.add_edge(labels.id(a)?, labels.id(b)?, w)?;
    }
    Ok(g)
}

fn describe(g: &WeightedWeakTournament, labels: &Labels) -> String {
    let e: Vec<String> = g
        .edges()
        .map(|(a, b, w)| format!("{}>{} {w}", labels.label(a), labels.label(b)))
        .collect();
    e.join(", ")
}

fn eighteen_voter_profile(c: &mut Checks) -> Result<()> {
    let (p, l) = Profile::from_json_str(EIGHTEEN_VOTER_PROFILE)?;
    c.eq("voters", 18, p.voter_count());
    c.truth(
        "every ballot has one voter",
        p.ballots().all(|(_, n)| n == 1),
    );
    let aa = ["a", "a'", "a''"];
    let cc = ["c", "c'"];
    let mut edges = vec![
        ("a", "a'", 6),
        ("a'", "a''", 6),
        ("a''", "a", 6),
        ("d", "b", 6),
        ("b", "e", 6),
        ("d", "e", 6),
    ];
    for a in aa {
        edges.extend([(a, "b", 6), ("d", a, 6), ("e", a, 6)]);
        for x in cc {
            edges.push((x, a, 6));
        }
    }
    for x in cc {
        edges.extend([("b", x, 6), (x, "d", 6), ("e", x, 6)]);
    }
    let nodes: Vec<&str> = l.names().iter().map(String::as_str).collect();
    let want = weighted(&l, &nodes, &edges)?;
    let got = p.margin_graph();
    c.eq("margin graph", describe(&want, &l), describe(&got, &l));
    c.eq("margin c vs c'", 0, p.margin(l.id("c")?, l.id("c'")?)?);
    Ok(())
}

#[derive(Deserialize)]
struct ProfileBook {
    labels: Vec<String>,
    profiles: BTreeMap<String, ProfileJson>,
}

fn load_book(s: &str) -> Result<(Labels, BTreeMap<String, Profile>)> {
    let book: ProfileBook = serde_json::from_str(s)?;
    let labels = Labels::new(book.labels)?;
    let mut out = BTreeMap::new();
    for (k, j) in &book.profiles {
        out.insert(k.clone(), Profile::from_json(j, &labels)?);
    }
    Ok((labels, out))
}

fn quasi_resolute_profiles(c: &mut Checks) -> Result<()> {
    let (l, ps) = load_book(QUASI_RESOLUTE_PROFILES)?;
    let get = |k: &str| {
        ps.get(k)
            .cloned()
            .ok_or_else(|| expansat::Error::Domain(format!("fixture lacks {k}")))
    };
    let graphs: [(&str, &[&str], Vec<(&str, &str, u64)>); 7] = [
        (
            "P0",
            &["a", "b", "c"],
            vec![("a", "b", 64), ("b", "c", 16), ("c", "a", 8)],
        ),
        (
            "Q1",
            &["a", "c", "d"],
            vec![("d", "c", 32), ("c", "a", 8), ("a", "d", 4)],
        ),
        (
            "P1",
            &["a", "b", "c", "d"],
            vec![
                ("a", "b", 64),
                ("b", "c", 16),
                ("c", "a", 8),
                ("d", "b", 48),
                ("a", "d", 4),
                ("d", "c", 32),
            ],
        ),
        (
            "Q2",
            &["a", "b", "d"],
            vec![("b", "d", 512), ("d", "a", 128), ("a", "b", 64)],
        ),
        (
            "P2",
            &["a", "b", "c", "d"],
            vec![
                ("b", "c", 16),
                ("c", "a", 8),
                ("a", "b", 64),
                ("b", "d", 512),
                ("d", "a", 128),
                ("d", "c", 272),
            ],
        ),
        (
            "Q3",
            &["b", "c", "d"],
            vec![("b", "c", 16), ("c", "d", 4), ("d", "b", 2)],
        ),
        (
            "P3",
            &["a", "b", "c", "d"],
            vec![
                ("b", "c", 16),
                ("c", "a", 8),
                ("a", "b", 64),
                ("d", "b", 2),
                ("d", "a", 26),
                ("c", "d", 4),
            ],
        ),
    ];
    for (k, nodes, edges) in &graphs {
        let want = weighted(&l, nodes, edges)?;
        c.eq(
            format!("margin graph of {k}"),
            describe(&want, &l),
            describe(&get(k)?.margin_graph(), &l),
        );
    }
    for (k, n) in [
        ("P0", 96),
        ("Q1", 48),
        ("Q1+", 96),
        ("P1", 96),
        ("Q2", 768),
        ("P0+", 768),
        ("P2", 768),
        ("Q3", 24),
        ("Q3+", 96),
        ("P3", 96),
    ] {
        c.eq(format!("voters in {k}"), n, get(k)?.voter_count());
    }
    // Cancellation steps: add k copies of every linear order.
    for (plus, base, k) in [("Q1+", "Q1", 8), ("P0+", "P0", 112), ("Q3+", "Q3", 12)] {
        let b = get(base)?;
        let all = expansat::representation::all_orders_profile(b.candidates())?.scale(k);
        c.truth(
            format!("{plus} = {base} + {k} L"),
            get(plus)? == b.add(&all)?,
        );
    }
    // Neutrality and homogeneity steps: a relabelled P0 is a multiple of Q_i.
    let relabel =
        |m: [(&str, &str); 3]| -> Result<Vec<(expansat::Candidate, expansat::Candidate)>> {
            m.iter().map(|(x, y)| Ok((l.id(x)?, l.id(y)?))).collect()
        };
    for (q, map, k1, k2) in [
        ("Q1", [("a", "d"), ("b", "c"), ("c", "a")], 1, 2),
        ("Q2", [("a", "b"), ("b", "d"), ("c", "a")], 8, 1),
        ("Q3", [("a", "b"), ("b", "c"), ("c", "d")], 1, 4),
    ] {
        let m = relabel(map)?;
        let image = get("P0")?.relabel(|x| m.iter().find(|p| p.0 == x).map_or(x, |p| p.1))?;
        c.truth(
            format!("{k1} relabelled P0 = {k2} {q}"),
            image.scale(k1) == get(q)?.scale(k2),
        );
    }
    for (k, set, sub) in [
        ("P1", ["a", "b", "c"], "P0"),
        ("P1", ["a", "c", "d"], "Q1+"),
        ("P2", ["a", "b", "c"], "P0+"),
        ("P2", ["a", "b", "d"], "Q2"),
        ("P3", ["a", "b", "c"], "P0"),
        ("P3", ["b", "c", "d"], "Q3+"),
    ] {
        let r = get(k)?.restrict(l.set(&set)?)?;
        c.truth(format!("{k}|{} = {sub}", set.concat()), r == get(sub)?);
    }
    for k in ["P1", "P2", "P3"] {
        let p = get(k)?;
        c.truth(format!("{k} uniquely weighted"), p.is_uniquely_weighted());
        c.truth(format!("{k} uniquely ranked"), p.is_uniquely_ranked());
    }
    Ok(())
}

fn tournament(labels: &Labels, edges: &[(&str, &str)]) -> Result<WeakTournament> {
    let mut g = WeakTournament::on(labels.all());
    for &(a, b) in edges {
        g.add_edge(labels.id(a)?, labels.id(b)?)?;
    }
    Ok(g)
}

/// The seven-candidate tournament on which Banks violates γ.
pub fn banks_gamma_tournament() -> Result<(WeakTournament, Labels)> {
    let l = Labels::alphabetic(7);
    let t = tournament(
        &l,
        &[
            ("a", "b"),
            ("c", "a"),
            ("d", "a"),
            ("e", "a"),
            ("a", "f"),
            ("a", "g"),
            ("c", "b"),
            ("d", "b"),
            ("b", "e"),
            ("b", "f"),
            ("g", "b"),
            ("c", "d"),
            ("c", "e"),
            ("f", "c"),
            ("c", "g"),
            ("d", "e"),
            ("d", "f"),
            ("g", "d"),
            ("e", "f"),
            ("e", "g"),
            ("f", "g"),
        ],
    )?;
    Ok((t, l))
}

/// The four-candidate tournament on which Banks violates α-resoluteness.
pub fn banks_alpha_tournament() -> Result<(WeakTournament, Labels)> {
    let l = Labels::new(["x", "y", "z", "w"])?;
    let t = tournament(
        &l,
        &[
            ("y", "z"),
            ("z", "x"),
            ("x", "y"),
            ("w", "y"),
            ("x", "w"),
            ("w", "z"),
        ],
    )?;
    Ok((t, l))
}

fn banks_example(c: &mut Checks) -> Result<()> {
    let banks = MethodId::Banks;
    let (t, l) = banks_gamma_tournament()?;
    c.truth("gamma graph is a tournament", t.is_tournament());
    c.eq(
        "Banks of the 7-node graph",
        l.set(&["c", "d", "e", "f"])?,
        banks.evaluate_on_majority_graph(&t)?,
    );
    let a = l.id("a")?;
    let left = l.set(&["a", "b", "c", "e", "f"])?;
    let right = l.set(&["a", "d", "f", "g"])?;
    let p = expansat::representation::mcgarvey(&t)?;
    c.eq(
        "McGarvey profile realizes the graph",
        t.clone(),
        p.majority_graph(),
    );
    let in_left = banks.winners(&p.restrict(left)?)?.contains(a);
    let in_right = banks.winners(&p.restrict(right)?)?.contains(a);
    c.truth(
        "a wins on {a,b,c,e,f} and on {a,d,f,g}",
        in_left && in_right,
    );
    c.truth("a loses on the union", !banks.winners(&p)?.contains(a));
    let dom = build_closed_domain(&[p], Closure::restrictions(), 1 << 12)?;
    c.eq("closed domain size", 127, dom.len());
    let w = check(AxiomId::Gamma, &banks, &dom)?;
    c.truth(
        "gamma checker finds a re-verifiable witness",
        matches!(&w, Some(w) if w.reverify(&banks)?),
    );
    c.truth(
        "binary gamma holds on the closed domain",
        check(AxiomId::BinaryGamma, &banks, &dom)?.is_none(),
    );

    let (t, l) = banks_alpha_tournament()?;
    let (x, y) = (l.id("x")?, l.id("y")?);
    c.eq(
        "Banks with y",
        l.all(),
        banks.evaluate_on_majority_graph(&t)?,
    );
    c.eq(
        "Banks without y",
        l.set(&["x", "z", "w"])?,
        banks.evaluate_on_majority_graph(&t.remove(y)?)?,
    );
    c.eq(
        "Banks on {x,y}",
        CandidateSet::singleton(x),
        banks.evaluate_on_majority_graph(&t.restrict(CandidateSet::pair(x, y))?)?,
    );
    // No 4-node tournament has four Banks winners, so the violation needs five nodes.
    let four = (0..64u32).all(|bits| {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let edges: Vec<(u8, u8)> = pairs
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| if bits >> k & 1 == 1 { (i, j) } else { (j, i) })
            .collect();
        let t = WeakTournament::from_edges(4, &edges).expect("valid edges");
        banks
            .evaluate_on_majority_graph(&t)
            .map_or(false, |w| w.len() < 4)
    });
    c.truth("no 4-node tournament has four Banks winners", four);
    let t = banks_alpha_tournament_5()?;
    let p = expansat::representation::mcgarvey(&t)?;
    let dom = build_closed_domain(&[p], Closure::restrictions(), 1 << 12)?;
    let w = check(AxiomId::AlphaResoluteness, &banks, &dom)?;
    c.truth(
        "alpha-resoluteness witness on 5 nodes",
        matches!(&w, Some(w) if w.reverify(&banks)?),
    );
    Ok(())
}

/// A five-candidate tournament on which Banks violates α-resoluteness: node 0
/// wins without node 4 and beats it, yet adding 4 enlarges the winners from 3 to 5.
pub fn banks_alpha_tournament_5() -> Result<WeakTournament> {
    WeakTournament::from_edges(
        5,
        &[
            (0, 3),
            (0, 4),
            (1, 0),
            (1, 4),
            (2, 0),
            (2, 1),
            (3, 1),
            (3, 2),
            (4, 2),
            (4, 3),
        ],
    )
}

fn pareto_example(c: &mut Checks) -> Result<()> {
    let (p, l) = Profile::from_json_str(PARETO_PROFILE)?;
    let ps = MethodId::ParetoScoring;
    let (x, y) = (l.id("x")?, l.id("y")?);
    c.eq("PS(P)", CandidateSet::singleton(y), ps.winners(&p)?);
    c.truth("x in PS(P_-y)", ps.winners(&p.remove(y)?)?.contains(x));
    c.truth(
        "x in PS(P|{x,y})",
        ps.winners(&p.restrict(CandidateSet::pair(x, y))?)?
            .contains(x),
    );
    let dom = build_closed_domain(&[p], Closure::restrictions(), 1 << 10)?;
    c.truth(
        "binary gamma holds",
        check(AxiomId::BinaryGamma, &ps, &dom)?.is_none(),
    );
    c.truth(
        "binary alpha holds",
        check(AxiomId::BinaryAlpha, &ps, &dom)?.is_none(),
    );
    c.truth("gamma fails", check(AxiomId::Gamma, &ps, &dom)?.is_some());
    Ok(())
}

/// Profile given as `count:order` columns over single-letter labels; repeated orders add up.
fn columns(labels: &Labels, y: CandidateSet, cols: &str) -> Result<Profile> {
    let mut p = Profile::empty(y)?;
    for col in cols.split_whitespace() {
        let (n, order) = col.split_once(':').expect("count:order");
        let order = order
            .chars()
            .map(|ch| labels.id(&ch.to_string()))
            .collect::<Result<Vec<_>>>()?;
        p.add_ballot(Ballot::new(order)?, n.parse().expect("count"))?;
    }
    Ok(p)
}

const THREE_NODE_LIFTED: &str = "6:abcd 6:abdc 3:cabd 3:cadb 3:acbd 3:acdb 6:adbc 6:adcb 1:abcd 1:abdc 5:bacd 5:badc \
    6:bcad 6:bcda 6:bdac 6:bdca 6:cabd 6:cadb 2:bcad 2:bcda 4:cbad 4:cbda 6:cdab 6:cdba 6:dabc 6:dacb 6:dbac \
    6:dbca 6:dcab 6:dcba";
const THREE_NODE_RESTRICTED: &str = "6:abc 6:abc 3:cab 3:cab 3:acb 3:acb 6:abc 6:acb 1:abc 1:abc 5:bac 5:bac 6:bca 6:bca \
    6:bac 6:bca 6:cab 6:cab 2:bca 2:bca 4:cba 4:cba 6:cab 6:cba 6:abc 6:acb 6:bac 6:bca 6:cab 6:cba";
const THREE_NODE_DEBORD: &str = "2:abc 2:cab 4:bca 4:abc 6:cab 6:bca";
const FOUR_NODE_LIFTED: &str = "6:abcd 6:abdc 3:cabd 3:cadb 3:acbd 3:acdb 4:dabc 4:dacb 2:adbc 2:adcb 1:abcd 1:abdc \
    5:bacd 5:badc 6:bcad 6:bcda 6:bdac 6:bdca 6:cabd 6:cadb 2:bcad 2:bcda 4:cbad 4:cbda 5:dcab 5:dcba 1:cdab 1:cdba \
    6:dabc 6:dacb 6:bdac 6:bdca 0:dbac 0:dbca 6:dcab 6:dcba";
const FOUR_NODE_DEBORD: &str =
    "2:abcd 2:dcab 4:bcad 4:dabc 6:cabd 6:dbca 8:dabc 8:cbda 10:dcab 10:badc 12:bdac 12:cabd";

fn representation_tables(c: &mut Checks) -> Result<()> {
    let l = Labels::alphabetic(4);
    let y = l.all();
    let abc = l.set(&["a", "b", "c"])?;
    let cycle = [("a", "b", 4), ("b", "c", 8), ("c", "a", 12)];
    let t6 = weighted(&l, &["a", "b", "c"], &cycle)?;
    let mut lifted = WeightedWeakTournament::on(y);
    for (a, b, w) in t6.edges() {
        lifted.add_edge(a, b, w)?;
    }
    c.eq("psi for |Y| = 4", 4, expansat::representation::psi(4)?);
    c.truth(
        "three-node lifted profile",
        rep_weighted(&lifted, y, 6)? == columns(&l, y, THREE_NODE_LIFTED)?,
    );
    let p6 = rep_weighted(&t6, y, 6)?;
    c.truth(
        "three-node representation",
        p6 == columns(&l, abc, THREE_NODE_RESTRICTED)?,
    );
    c.eq("three-node voters", 6 * 24, p6.voter_count());
    c.eq("three-node margin graph", t6.clone(), p6.margin_graph());
    let d6 = debord(&t6)?;
    c.truth(
        "three-node Debord profile",
        d6 == columns(&l, abc, THREE_NODE_DEBORD)?,
    );
    c.eq("three-node Debord margin graph", t6, d6.margin_graph());

    let mut edges = cycle.to_vec();
    edges.extend([("b", "d", 24), ("d", "a", 16), ("d", "c", 20)]);
    let t7 = weighted(&l, &["a", "b", "c", "d"], &edges)?;
    let p7 = rep_weighted(&t7, y, 6)?;
    c.truth(
        "four-node representation",
        p7 == columns(&l, y, FOUR_NODE_LIFTED)?,
    );
    c.eq("four-node voters", 6 * 24, p7.voter_count());
    c.eq("four-node margin graph", t7.clone(), p7.margin_graph());
    let d7 = debord(&t7)?;
    c.truth(
        "four-node Debord profile",
        d7 == columns(&l, y, FOUR_NODE_DEBORD)?,
    );
    c.eq("four-node Debord margin graph", t7, d7.margin_graph());
    Ok(())
}
