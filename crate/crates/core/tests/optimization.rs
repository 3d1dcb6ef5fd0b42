mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subsample_core::graph::example_system_graph;
use subsample_core::optimal::cost_milli;
use subsample_core::{
    cost, optimize, solve, undersample, EstimatedStructure, SearchOptions, Statement, Status,
    SystemGraph, USpec, WeightedMeasurement,
};

/// Minimum cost of the fork structure with unit weights, from the
/// 512-graph sweep.
const FORK_MIN_COST_MILLI: i64 = 1000;

fn unit_weighted(h: &EstimatedStructure) -> WeightedMeasurement {
    let n = h.n();
    let mut w = WeightedMeasurement::new(n).unwrap();
    let st = |s: Status| Statement {
        present: s == Status::Present,
        weight: 1.0,
    };
    for i in 0..n {
        for j in 0..n {
            w.set_directed(i, j, st(h.directed_status(i, j))).unwrap();
            if i < j {
                w.set_bidirected(i, j, st(h.bidirected_status(i, j)))
                    .unwrap();
            }
        }
    }
    w
}

pub fn random_weighted(rng: &mut impl Rng, n: usize) -> WeightedMeasurement {
    let mut w = WeightedMeasurement::new(n).unwrap();
    for i in 0..n {
        for j in 0..n {
            let s = Statement {
                present: rng.random_bool(0.5),
                weight: rng.random_range(0.0..3.0),
            };
            w.set_directed(i, j, s).unwrap();
            if i < j {
                let s = Statement {
                    present: rng.random_bool(0.5),
                    weight: rng.random_range(0.0..3.0),
                };
                w.set_bidirected(i, j, s).unwrap();
            }
        }
    }
    w
}

#[test]
fn fork_minimum_is_frozen() {
    let w = unit_weighted(&fork_structure());
    let (best, argmin) = brute_force_optimum(&w, 2);
    assert_eq!(best, FORK_MIN_COST_MILLI);
    let r = optimize(&w, USpec::Fixed(2), &SearchOptions::unlimited());
    assert_eq!(r.min_cost_milli, FORK_MIN_COST_MILLI);
    assert_eq!(r.min_cost, 1.0);
    assert!(r.complete);
    assert_eq!(r.graphs().cloned().collect::<Vec<_>>(), argmin);
}

#[test]
fn single_flip_costs_one() {
    let mut w = unit_weighted(&EstimatedStructure::from_measurement(&undersample(
        &example_system_graph(),
        2,
    )));
    w.set_directed(1, 0, Statement::absent(1.0)).unwrap();
    assert_eq!(cost(&example_system_graph(), 2, &w).unwrap(), 1.0);
    assert_eq!(oracle_cost_milli(&example_system_graph(), 2, &w), 1000);
}

#[test]
fn minimizers_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..40 {
        let n = 1 + trial % 3;
        let u = 1 + trial % 3;
        let w = random_weighted(&mut rng, n);
        let (best, argmin) = brute_force_optimum(&w, u);
        let r = optimize(&w, USpec::Fixed(u), &SearchOptions::unlimited());
        assert_eq!(r.min_cost_milli, best, "trial {trial}");
        assert!(r.complete);
        assert_eq!(
            r.graphs().cloned().collect::<Vec<_>>(),
            argmin,
            "trial {trial}"
        );
    }
}

#[test]
fn range_minimum_is_minimum_over_rates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..15 {
        let w = random_weighted(&mut rng, 3);
        let expected = (1..=3).map(|u| brute_force_optimum(&w, u).0).min().unwrap();
        let r = optimize(&w, USpec::Range(1, 3), &SearchOptions::unlimited());
        assert_eq!(r.min_cost_milli, expected);
        for s in &r.solutions {
            assert_eq!(cost_milli(&s.graph, s.u, &w).unwrap(), expected);
        }
    }
}

#[test]
fn conflict_free_input_reduces_to_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..20 {
        let n = 2 + trial % 3;
        let u = 2 + trial % 2;
        let g = random_graph(&mut rng, n, 0.3);
        let m = undersample(&g, u);
        let h = EstimatedStructure::from_measurement(&m);
        let mut w = unit_weighted(&h);
        for (i, j, mut s) in w.clone().directed_statements() {
            s.weight = rng.random_range(0.5..3.0);
            w.set_directed(i, j, s).unwrap();
        }
        let r = optimize(&w, USpec::Fixed(u), &SearchOptions::unlimited());
        let set = solve(&h, USpec::Fixed(u), &SearchOptions::unlimited());
        assert_eq!(r.min_cost_milli, 0);
        let ours: Vec<_> = r.solutions.iter().map(|s| (s.graph.clone(), s.u)).collect();
        let theirs: Vec<_> = set
            .solutions
            .iter()
            .map(|s| (s.graph.clone(), s.u))
            .collect();
        assert_eq!(ours, theirs);
    }
}

#[test]
fn cap_keeps_cost_optimal() {
    // All-zero weights make every graph optimal.
    let w = WeightedMeasurement::new(2).unwrap();
    let r = optimize(
        &w,
        USpec::Fixed(1),
        &SearchOptions::default().max_solutions(3),
    );
    assert_eq!(r.min_cost_milli, 0);
    assert_eq!(r.solutions.len(), 3);
    assert!(!r.complete);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn never_worse_than_any_graph(seed in any::<u64>(), code in 0u64..512, u in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_weighted(&mut rng, 3);
        let r = optimize(&w, USpec::Fixed(u), &SearchOptions::default());
        let g = graph_from_bits(3, code);
        prop_assert!(r.min_cost_milli <= cost_milli(&g, u, &w).unwrap());
        prop_assert!(r.min_cost_milli >= 0);
    }

    #[test]
    fn cost_matches_oracle(seed in any::<u64>(), code in 0u64..65536, u in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_weighted(&mut rng, 4);
        let g = graph_from_bits(4, code);
        prop_assert_eq!(cost_milli(&g, u, &w).unwrap(), oracle_cost_milli(&g, u, &w));
    }

    #[test]
    fn zero_cost_iff_consistent(seed in any::<u64>(), code in 0u64..512) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth = random_graph(&mut rng, 3, 0.4);
        let h = EstimatedStructure::from_measurement(&undersample(&truth, 2));
        let w = unit_weighted(&h);
        let g: SystemGraph = graph_from_bits(3, code);
        prop_assert_eq!(cost_milli(&g, 2, &w).unwrap() == 0, oracle_consistent(&g, 2, &h));
    }
}
