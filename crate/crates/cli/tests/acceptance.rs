//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p subsample-cli --test acceptance`. Pass criterion
//! numbers as arguments to run a subset, e.g. `-- 3 5`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use subsample_core::bench::{self, median, ExperimentSpec, Protocol};
use subsample_core::estimate::{PairTests, TestConfig};
use subsample_core::graph::example_system_graph;
use subsample_core::{
    optimize, solve, undersample, EstimatedStructure, SearchOptions, Statement, TimeSeries, USpec,
    WeightedMeasurement,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_undersampling_oracle() -> Outcome {
    let mut mismatches = 0;
    let mut cases = 0;
    for code in 0..512 {
        let g = graph_from_bits(3, code);
        for u in [2, 3] {
            cases += 1;
            if measurement_dense(&undersample(&g, u)) != unrolled_marginal(&dense(&g), u) {
                mismatches += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..500 {
        let g = graph_from_bits(4, rng.random_range(0..1 << 16));
        for u in [2, 3] {
            cases += 1;
            if measurement_dense(&undersample(&g, u)) != unrolled_marginal(&dense(&g), u) {
                mismatches += 1;
            }
        }
    }
    check(
        mismatches == 0,
        format!("{mismatches} mismatches in {cases} cases"),
    )
}

fn c2_figure_regression() -> Outcome {
    let m = undersample(&example_system_graph(), 2);
    let directed: Vec<_> = m.directed_edges().map(|(i, j)| (i + 1, j + 1)).collect();
    let bidirected: Vec<_> = m.bidirected_edges().map(|(i, j)| (i + 1, j + 1)).collect();
    let ok = directed == [(1, 1), (1, 2), (1, 3), (2, 1), (3, 1), (3, 2)] && bidirected == [(1, 2)];
    check(
        ok,
        format!("directed {directed:?}, bidirected {bidirected:?}"),
    )
}

type Classes = HashMap<(Dense, Dense), Vec<u64>>;

/// Every graph's oracle measurement structure, grouped.
fn classes(n: usize, u: usize) -> Classes {
    let mut map: Classes = HashMap::new();
    for code in 0..1u64 << (n * n) {
        let g = graph_from_bits(n, code);
        map.entry(unrolled_marginal(&dense(&g), u))
            .or_default()
            .push(code);
    }
    map
}

fn structure_key(h: &EstimatedStructure) -> (Dense, Dense) {
    let n = h.n();
    let present = |s| s == subsample_core::Status::Present;
    let d = (0..n)
        .map(|i| (0..n).map(|j| present(h.directed_status(i, j))).collect())
        .collect();
    let b = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && present(h.bidirected_status(i, j)))
                .collect()
        })
        .collect();
    (d, b)
}

fn c3_task1_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let (mut instances, mut satisfiable, mut members) = (0, 0, 0);
    for n in 1..=4 {
        for u in 1..=3 {
            let table = classes(n, u);
            for k in 0..50 {
                let h = match k % 3 {
                    0 => random_structure(&mut rng, n),
                    r => perturbed_structure(&mut rng, n, u, r - 1),
                };
                let mut expected: Vec<String> = table
                    .get(&structure_key(&h))
                    .map(|codes| {
                        codes
                            .iter()
                            .map(|&c| bit_string(&graph_from_bits(n, c)))
                            .collect()
                    })
                    .unwrap_or_default();
                expected.sort();
                let set = solve(&h, USpec::Fixed(u), &SearchOptions::unlimited());
                let got: Vec<String> = set.graphs().map(bit_string).collect();
                if !set.complete || got != expected {
                    return Err(format!(
                        "n={n} u={u} instance {k}: {} vs {} graphs",
                        got.len(),
                        expected.len()
                    ));
                }
                instances += 1;
                satisfiable += (!got.is_empty()) as usize;
                members += got.len();
            }
        }
    }
    Ok(format!(
        "{instances} structures equal brute force ({satisfiable} satisfiable, {members} graphs)"
    ))
}

fn c4_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut largest = 0;
    for k in 0..200 {
        let n = rng.random_range(2..=6);
        let u = rng.random_range(2..=3);
        let p = rng.random_range(0.05..0.25);
        let g = random_graph(&mut rng, n, p);
        let m = undersample(&g, u);
        let set = solve(
            &EstimatedStructure::from_measurement(&m),
            USpec::Fixed(u),
            &SearchOptions::unlimited(),
        );
        if !set.complete || !set.contains(&g, u) {
            return Err(format!(
                "instance {k}: truth missing from {} solutions",
                set.len()
            ));
        }
        if let Some(bad) = set
            .solutions
            .iter()
            .find(|s| undersample(&s.graph, s.u) != m)
        {
            return Err(format!(
                "instance {k}: solution {} undersamples elsewhere",
                bit_string(&bad.graph)
            ));
        }
        largest = largest.max(set.len());
    }
    Ok(format!("200 instances, largest class {largest}"))
}

fn random_weighted(rng: &mut impl Rng, n: usize) -> WeightedMeasurement {
    let mut w = WeightedMeasurement::new(n).unwrap();
    for i in 0..n {
        for j in 0..n {
            let s = Statement {
                present: rng.random_bool(0.5),
                weight: rng.random_range(0.0..=3.0),
            };
            w.set_directed(i, j, s).unwrap();
            if i < j {
                let s = Statement {
                    present: rng.random_bool(0.5),
                    weight: rng.random_range(0.0..=3.0),
                };
                w.set_bidirected(i, j, s).unwrap();
            }
        }
    }
    w
}

fn c5_task2_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for k in 0..50 {
        let n = 2 + k % 3;
        let w = random_weighted(&mut rng, n);
        let (best, _) = brute_force_optimum(&w, 2);
        let r = optimize(&w, USpec::Fixed(2), &SearchOptions::unlimited());
        if r.min_cost_milli != best {
            return Err(format!(
                "instance {k} (n={n}): {} vs brute force {best}",
                r.min_cost_milli
            ));
        }
    }
    Ok("50 instances match the exhaustive minimum".into())
}

fn c6_zero_conflict() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for k in 0..50 {
        let n = rng.random_range(2..=5);
        let u = rng.random_range(2..=3);
        let p = rng.random_range(0.05..0.3);
        let g = random_graph(&mut rng, n, p);
        let m = undersample(&g, u);
        let mut w = WeightedMeasurement::from_graph(&m, 1.0).unwrap();
        for (i, j, s) in w.clone().directed_statements() {
            w.set_directed(
                i,
                j,
                Statement {
                    weight: rng.random_range(0.1..=3.0),
                    ..s
                },
            )
            .unwrap();
        }
        for (i, j, s) in w.clone().bidirected_statements() {
            w.set_bidirected(
                i,
                j,
                Statement {
                    weight: rng.random_range(0.1..=3.0),
                    ..s
                },
            )
            .unwrap();
        }
        let r = optimize(&w, USpec::Fixed(u), &SearchOptions::unlimited());
        let set = solve(
            &EstimatedStructure::from_measurement(&m),
            USpec::Fixed(u),
            &SearchOptions::unlimited(),
        );
        let ours: Vec<_> = r
            .solutions
            .iter()
            .map(|s| (s.u, bit_string(&s.graph)))
            .collect();
        let theirs: Vec<_> = set
            .solutions
            .iter()
            .map(|s| (s.u, bit_string(&s.graph)))
            .collect();
        if r.min_cost_milli != 0 || ours != theirs {
            return Err(format!(
                "instance {k}: cost {} with {} vs {} solutions",
                r.min_cost,
                ours.len(),
                theirs.len()
            ));
        }
    }
    Ok("50 instances reach cost 0 with the consistent set".into())
}

fn c7_scalability() -> Outcome {
    let spec = ExperimentSpec {
        instances: 20,
        nodes: vec![10],
        search: USpec::Fixed(2),
        max_solutions: Some(1000),
        timeout: Some(Duration::from_secs(60)),
        ..ExperimentSpec::canned(Protocol::Fig2Density, 107)
    };
    let records = bench::run_experiment(&spec).map_err(|e| e.to_string())?;
    let mut secs: Vec<f64> = records.iter().map(|r| r.seconds).collect();
    let max = secs.iter().copied().fold(0.0, f64::max);
    let med = median(&mut secs).unwrap_or(f64::NAN);
    let timed_out = records
        .iter()
        .filter(|r| r.timed_out || r.error.is_some())
        .count();
    let capped = records.iter().filter(|r| !r.complete).count();
    check(
        records.len() == 100 && timed_out == 0 && med < 1.0 && max < 60.0,
        format!(
            "{} instances, median {med:.4}s, max {max:.3}s, {timed_out} unfinished, {capped} hit the cap",
            records.len()
        ),
    )
}

fn c8_statistical_pipeline() -> Outcome {
    let spec = ExperimentSpec {
        instances: 100,
        schemes: vec![TestConfig::pseudo_boolean(0.4).unwrap()],
        timeout: None,
        ..ExperimentSpec::canned(Protocol::Fig4Accuracy, 108)
    };
    let records = bench::run_experiment(&spec).map_err(|e| e.to_string())?;
    let summary = bench::summarize(&records);
    let s = &summary[0];
    let a = &s.accuracy;
    let get = |v: Option<f64>| v.unwrap_or(f64::NAN);
    let (htpr, hfpr) = (get(a.h_directed.tpr), get(a.h_directed.fpr));
    let (gtpr, gfpr) = (get(a.g1.tpr), get(a.g1.fpr));
    let btpr = get(a.h_bidirected.tpr);
    check(
        s.completed == 100 && htpr > hfpr && gtpr > gfpr && htpr >= btpr,
        format!(
            "{}/100 complete; H directed TPR {htpr:.3} > FPR {hfpr:.3}; G1 TPR {gtpr:.3} > FPR {gfpr:.3}; \
             directed TPR {htpr:.3} >= bidirected TPR {btpr:.3}",
            s.completed
        ),
    )
}

fn c9_sample_size_runtime() -> Outcome {
    let spec = ExperimentSpec {
        instances: 20,
        nodes: vec![7],
        samples: vec![200, 1000],
        schemes: vec![TestConfig::pseudo_boolean(0.4).unwrap()],
        timeout: Some(Duration::from_secs(300)),
        ..ExperimentSpec::canned(Protocol::Fig5Runtime, 109)
    };
    let records = bench::run_experiment(&spec).map_err(|e| e.to_string())?;
    let at = |n: usize| {
        let mut secs: Vec<f64> = records
            .iter()
            .filter(|r| r.samples == Some(n))
            .map(|r| r.seconds)
            .collect();
        median(&mut secs).unwrap_or(f64::NAN)
    };
    let (small, large) = (at(200), at(1000));
    let unfinished = records.iter().filter(|r| !r.complete).count();
    check(
        large <= small,
        format!("median {large:.3}s at N=1000 vs {small:.3}s at N=200 ({unfinished} unfinished)"),
    )
}

fn c10_calibration() -> Outcome {
    let cfg = TestConfig::uniform(0.05).unwrap();
    let (mut single, mut pooled, mut tests) = (0usize, 0usize, 0usize);
    let replicates = 500;
    for r in 0..replicates {
        let mut rng = ChaCha8Rng::seed_from_u64(110_000 + r);
        let data = (0..3 * 10_000)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        let ts = TimeSeries::from_rows(3, data).unwrap();
        let w = PairTests::run(&ts)
            .and_then(|t| t.weigh(&cfg))
            .map_err(|e| e.to_string())?;
        single += w.directed(0, 1).present as usize;
        for (_, _, s) in w.directed_statements().chain(w.bidirected_statements()) {
            pooled += s.present as usize;
            tests += 1;
        }
    }
    let one = single as f64 / replicates as f64;
    let all = pooled as f64 / tests as f64;
    let inside = |v: f64| (0.03..=0.07).contains(&v);
    check(
        inside(one) && inside(all),
        format!("rejection rate {one:.3} for one edge, {all:.4} pooled over {tests} tests"),
    )
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |protocol: &str, extra: &[&str], out: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_subsample"))
            .args(["bench", protocol, "--seed", "11", "--out"])
            .arg(&path)
            .args(extra)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("bench {protocol} exited with {status}"));
        }
        std::fs::read(path.join("records.csv")).map_err(|e| e.to_string())
    };
    let exact = ["--instances", "5", "--nodes", "6", "--density", "0.2,0.3"];
    let data = [
        "--instances",
        "4",
        "--nodes",
        "5",
        "--scheme",
        "pb",
        "--param",
        "0.2,0.4",
    ];
    let a = run("fig2-density", &exact, "exact-a")?;
    let b = run("fig2-density", &exact, "exact-b")?;
    let c = run("fig4-accuracy", &data, "data-a")?;
    let d = run("fig4-accuracy", &data, "data-b")?;
    check(
        a == b && c == d,
        format!(
            "exact records {} bytes, data records {} bytes",
            a.len(),
            c.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    (
        "undersampling equals unrolled-graph marginalization",
        c1_undersampling_oracle,
    ),
    ("figure example regression", c2_figure_regression),
    (
        "consistency search equals brute force",
        c3_task1_completeness,
    ),
    ("round trip through undersampling", c4_round_trip),
    (
        "optimization equals brute-force minimum",
        c5_task2_optimality,
    ),
    (
        "conflict-free input reduces to enumeration",
        c6_zero_conflict,
    ),
    ("10-node scalability", c7_scalability),
    (
        "statistical pipeline accuracy ordering",
        c8_statistical_pipeline,
    ),
    ("larger samples solve no slower", c9_sample_size_runtime),
    ("null calibration of the uniform test", c10_calibration),
    ("bench determinism", c11_determinism),
];

fn main() {
    let wanted: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (k, (name, f)) in CRITERIA.iter().enumerate() {
        let id = k + 1;
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
