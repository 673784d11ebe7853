//! Acceptance criteria for the digraph Shapley engines.
//!
//! Runs every criterion, prints one PASS/FAIL line each, and exits non-zero
//! if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use digraph_shapley::{
    count_consistent, enumerate_consistent, is_consistent, marginal_vector, shapley_closed_form,
    shapley_enumeration, shapley_oracle, shapley_subset_dp, CharacteristicFunction, Coalition,
    Digraph, Guard, ShapleyOutcome,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_TOLERANCE: f64 = 1e-12;
const AGREEMENT_TOLERANCE: f64 = 1e-9;
const TELESCOPING_TOLERANCE: f64 = 1e-12;
const CORPUS_SIZE: usize = 200;
const CORPUS_SEED: u64 = 0x5eed_0006;
const CYCLE_SEED: u64 = 0x5eed_0005;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let corpus = Corpus::generate(CORPUS_SIZE, CORPUS_SEED);
    let criteria: Vec<Criterion> = vec![
        (
            "1 golden values, 3-cycle",
            Box::new(|| {
                golden(
                    3,
                    [1.0 / 3.0, 1.0, 3.0, 9.0, 27.0],
                    Some(Duration::from_secs(1)),
                )
            }),
        ),
        (
            "2 golden values, 4-cycle",
            Box::new(|| golden(4, [0.25, 1.0, 4.0, 16.0, 64.0], None)),
        ),
        (
            "3 golden values, 5-cycle",
            Box::new(|| golden(5, [0.2, 1.0, 5.0, 25.0, 125.0], None)),
        ),
        (
            "4 consistent sets on 3-, 4-, 5-cycles",
            Box::new(cycle_sets),
        ),
        (
            "5 closed form on n-cycles, n = 2..10",
            Box::new(closed_form_property),
        ),
        (
            "6 engine equivalence on random digraphs",
            Box::new(|| engine_equivalence(&corpus)),
        ),
        (
            "7 invariants on the random corpus",
            Box::new(|| invariants(&corpus)),
        ),
        ("8 subset DP on the 16-cycle", Box::new(sixteen_cycle)),
    ];

    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// `v_k(S) = |S|^k` on the n-cycle for k = 0..=4, through every engine.
fn golden(n: usize, expected: [f64; 5], budget: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let g = Digraph::cycle(n).unwrap();
    let mut runs = 0;
    for (k, &want) in expected.iter().enumerate() {
        let v = CharacteristicFunction::power(n, k as u32).unwrap();
        let outcomes: Vec<ShapleyOutcome> = vec![
            shapley_enumeration(&v, &g, Guard::Enforce).map_err(|e| e.to_string())?,
            shapley_subset_dp(&v, &g).map_err(|e| e.to_string())?,
            shapley_closed_form(&v, &g).map_err(|e| e.to_string())?,
            shapley_oracle(&v, &g, Guard::Enforce).map_err(|e| e.to_string())?,
        ];
        for out in outcomes {
            ensure(out.permutation_count == n as u64, || {
                format!("k = {k}, {}: count {}", out.engine, out.permutation_count)
            })?;
            ensure(out.allocation.len() == n, || {
                format!("k = {k}: wrong length")
            })?;
            for (p, &x) in out.allocation.iter().enumerate() {
                ensure(close(x, want, GOLDEN_TOLERANCE), || {
                    format!(
                        "k = {k}, {}: player {} got {x}, want {want}",
                        out.engine,
                        p + 1
                    )
                })?;
            }
            runs += 1;
        }
    }
    let elapsed = start.elapsed();
    if let Some(limit) = budget {
        ensure(elapsed < limit, || {
            format!("took {elapsed:?}, limit {limit:?}")
        })?;
    }
    Ok(format!(
        "{runs} engine runs within {GOLDEN_TOLERANCE:e}, count {n}, {elapsed:.2?}"
    ))
}

fn cycle_sets() -> Outcome {
    let listed: [&[&[usize]]; 3] = [
        &[&[1, 3, 2], &[2, 1, 3], &[3, 2, 1]],
        &[&[1, 4, 3, 2], &[2, 1, 4, 3], &[3, 2, 1, 4], &[4, 3, 2, 1]],
        &[
            &[1, 5, 4, 3, 2],
            &[2, 1, 5, 4, 3],
            &[3, 2, 1, 5, 4],
            &[4, 3, 2, 1, 5],
            &[5, 4, 3, 2, 1],
        ],
    ];
    for (n, orders) in (3..=5).zip(listed) {
        let g = Digraph::cycle(n).unwrap();
        let got: BTreeSet<Vec<usize>> = enumerate_consistent(&g).map(|o| o.indices()).collect();
        let want: BTreeSet<Vec<usize>> = orders.iter().map(|o| o.to_vec()).collect();
        ensure(got == want, || format!("n = {n}: got {got:?}"))?;
        // Rotations (k-1, k-2, ..., k+1, k) taken mod n.
        let rotations: BTreeSet<Vec<usize>> = (1..=n)
            .map(|k| (1..=n).map(|t| (k + n - 1 - t % n) % n + 1).collect())
            .collect();
        ensure(got == rotations, || {
            format!("n = {n}: not the rotations {rotations:?}")
        })?;
    }
    Ok("enumeration matches the listed sets and the rotation form".into())
}

fn closed_form_property() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(CYCLE_SEED);
    let mut cases = 0;
    for n in 2..=10 {
        let g = Digraph::cycle(n).unwrap();
        for _ in 0..50 {
            let mut f: Vec<f64> = (0..=n).map(|_| rng.gen_range(-10.0..=10.0)).collect();
            f[0] = 0.0;
            let want = f[n] / n as f64;
            let v = CharacteristicFunction::symmetric(n, f).unwrap();
            let out = shapley_subset_dp(&v, &g).map_err(|e| e.to_string())?;
            for &x in &out.allocation {
                ensure(close(x, want, AGREEMENT_TOLERANCE), || {
                    format!("n = {n}: got {x}, want {want}")
                })?;
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{cases} games within {AGREEMENT_TOLERANCE:e}, {elapsed:.2?}"
    ))
}

struct Case {
    graph: Digraph,
    game: CharacteristicFunction,
    other: CharacteristicFunction,
    scalars: (f64, f64),
}

struct Corpus(Vec<Case>);

impl Corpus {
    /// Random digraphs with n <= 7, each ordered pair an edge with
    /// probability 1/2, and two random explicit games per digraph.
    fn generate(size: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_game = |rng: &mut ChaCha8Rng, n: usize| {
            let mut table: Vec<f64> = (0..1 << n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            table[0] = 0.0;
            CharacteristicFunction::explicit(n, table).unwrap()
        };
        let cases = (0..size)
            .map(|_| {
                let n = rng.gen_range(1..=7);
                let mut edges = Vec::new();
                for a in 1..=n {
                    for b in 1..=n {
                        if a != b && rng.gen_bool(0.5) {
                            edges.push((a, b));
                        }
                    }
                }
                Case {
                    graph: Digraph::new(n, edges).unwrap(),
                    game: random_game(&mut rng, n),
                    other: random_game(&mut rng, n),
                    scalars: (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                }
            })
            .collect();
        Self(cases)
    }
}

fn engine_equivalence(corpus: &Corpus) -> Outcome {
    let start = Instant::now();
    for (idx, case) in corpus.0.iter().enumerate() {
        let (g, v) = (&case.graph, &case.game);
        let e = shapley_enumeration(v, g, Guard::Enforce).map_err(|e| e.to_string())?;
        let d = shapley_subset_dp(v, g).map_err(|e| e.to_string())?;
        let o = shapley_oracle(v, g, Guard::Enforce).map_err(|e| e.to_string())?;
        let c = count_consistent(g);
        ensure(
            e.permutation_count == o.permutation_count
                && d.permutation_count == o.permutation_count
                && c == o.permutation_count,
            || {
                format!(
                    "case {idx}: counts {} {} {} {c}",
                    e.permutation_count, d.permutation_count, o.permutation_count
                )
            },
        )?;
        for p in 0..g.n() {
            let (a, b, r) = (e.allocation[p], d.allocation[p], o.allocation[p]);
            ensure(
                close(a, r, AGREEMENT_TOLERANCE) && close(b, r, AGREEMENT_TOLERANCE),
                || format!("case {idx}, player {}: enum {a}, dp {b}, oracle {r}", p + 1),
            )?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} digraphs, three engines within {AGREEMENT_TOLERANCE:e}, counts exact, {elapsed:.2?}",
        corpus.0.len()
    ))
}

fn invariants(corpus: &Corpus) -> Outcome {
    let mut orders_checked = 0usize;
    for (idx, case) in corpus.0.iter().enumerate() {
        let (g, v, w) = (&case.graph, &case.game, &case.other);
        let n = g.n();
        let grand = v.value(Coalition::full(n));

        ensure(count_consistent(g) >= 1, || {
            format!("case {idx}: empty consistent set")
        })?;

        let outcomes = [
            shapley_enumeration(v, g, Guard::Enforce).map_err(|e| e.to_string())?,
            shapley_subset_dp(v, g).map_err(|e| e.to_string())?,
            shapley_oracle(v, g, Guard::Enforce).map_err(|e| e.to_string())?,
        ];
        for out in &outcomes {
            let total: f64 = out.allocation.iter().sum();
            ensure(close_rel(total, grand, AGREEMENT_TOLERANCE), || {
                format!("case {idx}, {}: efficiency {total} vs {grand}", out.engine)
            })?;
        }

        // Linearity: Sh(a v + b w) = a Sh(v) + b Sh(w).
        let (a, b) = case.scalars;
        let mixed: Vec<f64> = v
            .table()
            .iter()
            .zip(w.table())
            .map(|(x, y)| a * x + b * y)
            .collect();
        let mixed = CharacteristicFunction::explicit(n, mixed).unwrap();
        let sh_v = &outcomes[1].allocation;
        let sh_w = shapley_subset_dp(w, g)
            .map_err(|e| e.to_string())?
            .allocation;
        for sh_mixed in [
            shapley_subset_dp(&mixed, g)
                .map_err(|e| e.to_string())?
                .allocation,
            shapley_enumeration(&mixed, g, Guard::Enforce)
                .map_err(|e| e.to_string())?
                .allocation,
        ] {
            for p in 0..n {
                let want = a * sh_v[p] + b * sh_w[p];
                ensure(close_rel(sh_mixed[p], want, AGREEMENT_TOLERANCE), || {
                    format!(
                        "case {idx}, player {}: linearity {} vs {want}",
                        p + 1,
                        sh_mixed[p]
                    )
                })?;
            }
        }

        // Telescoping over every consistent order.
        for order in enumerate_consistent(g) {
            ensure(is_consistent(g, &order).unwrap(), || {
                format!("case {idx}: enumerated {order} is inconsistent")
            })?;
            let total: f64 = marginal_vector(v, &order).unwrap().iter().sum();
            ensure(close_rel(total, grand, TELESCOPING_TOLERANCE), || {
                format!("case {idx}, {order}: marginals sum to {total}, v(N) = {grand}")
            })?;
            orders_checked += 1;
        }

        // Dominance antisymmetry on every coalition.
        for mask in 1..1u32 << n {
            let s = Coalition::from_mask(mask);
            for i in s {
                for j in s.iter().filter(|&j| j > i) {
                    let ij = g.dominates(s, i, j).unwrap();
                    let ji = g.dominates(s, j, i).unwrap();
                    ensure(!(ij && ji), || {
                        format!("case {idx}: {i} and {j} dominate each other in {s}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "efficiency, nonemptiness, linearity, telescoping ({orders_checked} orders), antisymmetry"
    ))
}

fn sixteen_cycle() -> Outcome {
    let n = 16;
    let f: Vec<f64> = (0..=n)
        .map(|s| (s as f64).powf(1.5) - 2.0 * s as f64)
        .collect();
    let want = f[n] / n as f64;
    let g = Digraph::cycle(n).unwrap();
    let v = CharacteristicFunction::symmetric(n, f).unwrap();
    let start = Instant::now();
    let out = shapley_subset_dp(&v, &g).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.permutation_count == n as u64, || {
        format!("count {}", out.permutation_count)
    })?;
    for &x in &out.allocation {
        ensure(close(x, want, AGREEMENT_TOLERANCE), || {
            format!("got {x}, want {want}")
        })?;
    }
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{want} per player within {AGREEMENT_TOLERANCE:e}, {elapsed:.2?}"
    ))
}
