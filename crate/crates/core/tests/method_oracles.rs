//! Margin-based methods against definitions evaluated by exhaustive search.

use expansat::methods::MethodId;
use expansat::{Candidate, CandidateSet, Profile, WeakTournament, WeightedWeakTournament};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Matrix = Vec<Vec<i64>>;

fn margins(p: &Profile) -> Matrix {
    let n = p.candidate_count();
    let c = |i: usize| Candidate(i as u8);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0
                    } else {
                        p.margin(c(i), c(j)).unwrap()
                    }
                })
                .collect()
        })
        .collect()
}

fn set(xs: impl IntoIterator<Item = usize>) -> CandidateSet {
    xs.into_iter().map(|i| Candidate(i as u8)).collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Tops of the orderings of `s` in which every earlier candidate strictly beats every later one.
fn chain_tops(m: &Matrix, s: &[usize]) -> Vec<usize> {
    permutations(s)
        .into_iter()
        .filter(|p| (0..p.len()).all(|i| (i + 1..p.len()).all(|j| m[p[i]][p[j]] > 0)))
        .map(|p| p[0])
        .collect()
}

fn banks(m: &Matrix) -> CandidateSet {
    let n = m.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let s = members(mask, n);
        let tops = chain_tops(m, &s);
        if tops.is_empty() {
            continue;
        }
        let extendable = (0..n).filter(|z| !s.contains(z)).any(|z| {
            let mut t = s.clone();
            t.push(z);
            !chain_tops(m, &t).is_empty()
        });
        if !extendable {
            out.extend(tops);
        }
    }
    set(out)
}

fn copeland(m: &Matrix) -> CandidateSet {
    let score: Vec<i64> = m
        .iter()
        .map(|row| row.iter().map(|x| x.signum()).sum())
        .collect();
    let best = *score.iter().max().unwrap();
    set((0..m.len()).filter(|&i| score[i] == best))
}

fn minimax(m: &Matrix) -> CandidateSet {
    let n = m.len();
    let worst: Vec<i64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x)
                .map(|y| m[y][x])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let best = *worst.iter().min().unwrap();
    set((0..n).filter(|&i| worst[i] == best))
}

/// Smallest nonempty set whose members all strictly beat every outsider.
fn smith(m: &Matrix) -> CandidateSet {
    let n = m.len();
    (1u32..(1 << n))
        .map(|mask| members(mask, n))
        .filter(|s| {
            s.iter()
                .all(|&x| (0..n).filter(|y| !s.contains(y)).all(|y| m[x][y] > 0))
        })
        .min_by_key(|s| s.len())
        .map(set)
        .unwrap()
}

/// Every simple path `from -> ... -> to` along positive margins, as node lists.
fn simple_paths(m: &Matrix, from: usize, to: usize) -> Vec<Vec<usize>> {
    fn go(m: &Matrix, path: &mut Vec<usize>, to: usize, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == to && path.len() > 1 {
            out.push(path.clone());
            return;
        }
        for v in 0..m.len() {
            if m[u][v] > 0 && !path[1..].contains(&v) && (v != path[0] || v == to) {
                path.push(v);
                go(m, path, to, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, &mut vec![from], to, &mut out);
    out
}

fn strength(m: &Matrix, path: &[usize]) -> i64 {
    path.windows(2).map(|w| m[w[0]][w[1]]).min().unwrap()
}

/// `a` defeats `b` iff `a -> b` is not the weakest link of any simple cycle through it.
fn split_cycle(m: &Matrix) -> CandidateSet {
    let n = m.len();
    let defeats = |a: usize, b: usize| {
        m[a][b] > 0
            && simple_paths(m, b, a).iter().all(|back| {
                let mut cycle = vec![a];
                cycle.extend(back);
                strength(m, &cycle) < m[a][b]
            })
    };
    set((0..n).filter(|&b| (0..n).all(|a| !defeats(a, b))))
}

fn beat_path(m: &Matrix) -> CandidateSet {
    let n = m.len();
    let best = |x: usize, y: usize| {
        simple_paths(m, x, y)
            .iter()
            .map(|p| strength(m, p))
            .max()
            .unwrap_or(0)
    };
    set((0..n).filter(|&x| (0..n).all(|y| x == y || best(x, y) >= best(y, x))))
}

/// Top of the unique stack: a linear order where each `a` placed above `b` reaches
/// `b` by a downward path whose links are all at least `margin(b, a)`.
fn ranked_pairs(m: &Matrix) -> CandidateSet {
    let n = m.len();
    let all: Vec<usize> = (0..n).collect();
    let stacks: Vec<Vec<usize>> = permutations(&all)
        .into_iter()
        .filter(|l| {
            (0..n).all(|i| {
                (i + 1..n).all(|j| {
                    let bound = m[l[j]][l[i]];
                    // Reachability from position i to position j over downward links >= bound.
                    let mut reach = vec![false; n];
                    reach[i] = true;
                    for k in i + 1..=j {
                        reach[k] =
                            (i..k).any(|h| reach[h] && m[l[h]][l[k]] >= bound && m[l[h]][l[k]] > 0);
                    }
                    reach[j]
                })
            })
        })
        .collect();
    assert_eq!(stacks.len(), 1, "uniquely weighted graphs have one stack");
    set([stacks[0][0]])
}

/// Kings: reach everyone in at most two steps. On tournaments these are the uncovered candidates.
fn kings(m: &Matrix) -> CandidateSet {
    let n = m.len();
    set((0..n).filter(|&x| {
        (0..n).all(|y| y == x || m[x][y] > 0 || (0..n).any(|z| m[x][z] > 0 && m[z][y] > 0))
    }))
}

fn random_profile(rng: &mut ChaCha8Rng, n: usize) -> Profile {
    let mut order: Vec<u8> = (0..n as u8).collect();
    let ballots: Vec<(Vec<u8>, i64)> = (0..rng.gen_range(1..=6))
        .map(|_| {
            order.shuffle(rng);
            (order.clone(), rng.gen_range(1..=4))
        })
        .collect();
    let refs: Vec<(&[u8], i64)> = ballots.iter().map(|(o, k)| (o.as_slice(), *k)).collect();
    Profile::from_orders(&refs).unwrap()
}

#[test]
fn profile_methods_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..400 {
        let n = 1 + round % 5;
        let p = random_profile(&mut rng, n);
        let m = margins(&p);
        assert_eq!(
            MethodId::Copeland.evaluate(&p).unwrap(),
            copeland(&m),
            "{p:?}"
        );
        assert_eq!(
            MethodId::Minimax.evaluate(&p).unwrap(),
            minimax(&m),
            "{p:?}"
        );
        assert_eq!(MethodId::TopCycle.evaluate(&p).unwrap(), smith(&m), "{p:?}");
        assert_eq!(
            MethodId::SplitCycle.evaluate(&p).unwrap(),
            split_cycle(&m),
            "{p:?}"
        );
        assert_eq!(
            MethodId::BeatPath.evaluate(&p).unwrap(),
            beat_path(&m),
            "{p:?}"
        );
        assert_eq!(MethodId::Banks.evaluate(&p).unwrap(), banks(&m), "{p:?}");
    }
}

fn tournament_matrix(n: usize, code: u32) -> (WeakTournament, Matrix) {
    let mut edges = Vec::new();
    let mut m = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = if code & (1 << k) != 0 { (i, j) } else { (j, i) };
            edges.push((a as u8, b as u8));
            m[a][b] = 1;
            m[b][a] = -1;
            k += 1;
        }
    }
    (WeakTournament::from_edges(n, &edges).unwrap(), m)
}

#[test]
fn majoritarian_methods_on_every_labelled_tournament() {
    for n in 1..=5 {
        for code in 0u32..(1 << (n * (n - 1) / 2)) {
            let (t, m) = tournament_matrix(n, code);
            let ev = |f: MethodId| f.evaluate_on_majority_graph(&t).unwrap();
            assert_eq!(ev(MethodId::Banks), banks(&m), "{t:?}");
            assert_eq!(ev(MethodId::UncoveredSet), kings(&m), "{t:?}");
            assert_eq!(ev(MethodId::TopCycle), smith(&m), "{t:?}");
            assert_eq!(ev(MethodId::Copeland), copeland(&m), "{t:?}");
            assert!(ev(MethodId::Banks).is_subset(ev(MethodId::UncoveredSet)));
            assert!(ev(MethodId::UncoveredSet).is_subset(ev(MethodId::TopCycle)));
        }
    }
}

#[test]
fn ranked_pairs_matches_stack_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for round in 0..300 {
        let n = 2 + round % 4;
        let pairs = n * (n - 1) / 2;
        let mut ws: Vec<u64> = (1..=12).map(|w| 2 * w).collect();
        ws.shuffle(&mut rng);
        let mut edges = Vec::new();
        let mut m = vec![vec![0i64; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = if rng.gen() { (i, j) } else { (j, i) };
                edges.push((a as u8, b as u8, ws[k]));
                m[a][b] = ws[k] as i64;
                m[b][a] = -(ws[k] as i64);
                k += 1;
            }
        }
        assert_eq!(k, pairs);
        let g = WeightedWeakTournament::from_edges(n, &edges).unwrap();
        assert_eq!(
            MethodId::RankedPairs.evaluate_on_margin_graph(&g).unwrap(),
            ranked_pairs(&m),
            "{g:?}"
        );
        assert_eq!(
            MethodId::SplitCycle.evaluate_on_margin_graph(&g).unwrap(),
            split_cycle(&m),
            "{g:?}"
        );
        assert_eq!(
            MethodId::BeatPath.evaluate_on_margin_graph(&g).unwrap(),
            beat_path(&m),
            "{g:?}"
        );
        assert_eq!(
            MethodId::Minimax.evaluate_on_margin_graph(&g).unwrap(),
            minimax(&m),
            "{g:?}"
        );
    }
}

#[test]
fn condorcet_winner_is_the_unique_winner() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let consistent: Vec<MethodId> = MethodId::ALL
        .into_iter()
        .filter(|f| f.is_condorcet_consistent())
        .collect();
    let mut seen = 0;
    for round in 0..600 {
        let p = random_profile(&mut rng, 2 + round % 4);
        let m = margins(&p);
        let n = m.len();
        let Some(w) = (0..n).find(|&x| (0..n).all(|y| y == x || m[x][y] > 0)) else {
            continue;
        };
        seen += 1;
        for f in &consistent {
            if *f == MethodId::RankedPairs && !p.is_uniquely_weighted() {
                continue;
            }
            assert_eq!(f.evaluate(&p).unwrap(), set([w]), "{f} on {p:?}");
        }
    }
    assert!(seen > 100);
}
