//! Brute-force reference implementations, deliberately independent of the
//! library's bit-matrix code.

#![allow(dead_code)]

use rand::Rng;
use subsample_core::{
    EstimatedStructure, MeasurementGraph, Status, SystemGraph, WeightedMeasurement,
};

pub type Dense = Vec<Vec<bool>>;

pub fn dense(g: &SystemGraph) -> Dense {
    let n = g.n();
    (0..n)
        .map(|i| (0..n).map(|j| g.has_edge(i, j)).collect())
        .collect()
}

/// Graph whose edge `(i, j)` is bit `i * n + j` of `code`.
pub fn graph_from_bits(n: usize, code: u64) -> SystemGraph {
    let edges = (0..n * n)
        .filter(|k| code >> k & 1 == 1)
        .map(|k| (k / n, k % n));
    SystemGraph::from_edges(n, edges).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> SystemGraph {
    let edges: Vec<_> = (0..n * n)
        .filter(|_| rng.random_bool(p))
        .map(|k| (k / n, k % n))
        .collect();
    SystemGraph::from_edges(n, edges).unwrap()
}

/// Measurement structure by marginalizing the time-unrolled graph.
///
/// Nodes are `(v, t)` for slices `t = 0..=u`, with `(i, t-1) -> (j, t)` for
/// every edge of `g`. Slices `0` and `u` are observed and `1..u` latent. A
/// directed edge needs a path from slice 0 to slice `u` through latent
/// nodes only; a bidirected edge needs a latent node with latent-only paths
/// into both endpoints at slice `u`.
pub fn unrolled_marginal(g: &Dense, u: usize) -> (Dense, Dense) {
    let n = g.len();
    // reach[t][v] = slice-u endpoints reachable from (v, t) via latent nodes.
    let mut reach = vec![vec![vec![false; n]; n]; u + 1];
    for v in 0..n {
        reach[u][v][v] = true;
    }
    for t in (0..u).rev() {
        for v in 0..n {
            for w in 0..n {
                if g[v][w] {
                    // (w, t+1) is either latent or the slice-u endpoint itself.
                    for x in 0..n {
                        if reach[t + 1][w][x] {
                            reach[t][v][x] = true;
                        }
                    }
                }
            }
        }
    }
    let directed = reach[0].clone();
    let mut bidirected = vec![vec![false; n]; n];
    for slice in reach.iter().take(u).skip(1) {
        for hits in slice {
            for i in 0..n {
                for j in 0..n {
                    if i != j && hits[i] && hits[j] {
                        bidirected[i][j] = true;
                    }
                }
            }
        }
    }
    (directed, bidirected)
}

pub fn measurement_dense(m: &MeasurementGraph) -> (Dense, Dense) {
    let n = m.n();
    let d = (0..n)
        .map(|i| (0..n).map(|j| m.has_directed(i, j)).collect())
        .collect();
    let b = (0..n)
        .map(|i| (0..n).map(|j| i != j && m.has_bidirected(i, j)).collect())
        .collect();
    (d, b)
}

pub fn status_agrees(s: Status, value: bool) -> bool {
    match s {
        Status::Present => value,
        Status::Absent => !value,
        Status::Unknown => true,
    }
}

pub fn oracle_consistent(g: &SystemGraph, u: usize, h: &EstimatedStructure) -> bool {
    let n = g.n();
    let (d, b) = unrolled_marginal(&dense(g), u);
    (0..n).all(|i| {
        (0..n).all(|j| {
            status_agrees(h.directed_status(i, j), d[i][j])
                && (i >= j || status_agrees(h.bidirected_status(i, j), b[i][j]))
        })
    })
}

/// Every `(graph, u)` over all `2^(n*n)` graphs consistent with `h`, sorted
/// by `u` then by the row-major bit vector.
pub fn brute_force_class(h: &EstimatedStructure, rates: &[usize]) -> Vec<(SystemGraph, usize)> {
    let n = h.n();
    let mut out = Vec::new();
    for &u in rates {
        let mut graphs: Vec<SystemGraph> = (0..1u64 << (n * n))
            .map(|c| graph_from_bits(n, c))
            .filter(|g| oracle_consistent(g, u, h))
            .collect();
        graphs.sort_by_key(bit_string);
        out.extend(graphs.into_iter().map(|g| (g, u)));
    }
    out
}

/// Row-major `0`/`1` string; lexicographic order is the canonical order.
pub fn bit_string(g: &SystemGraph) -> String {
    let n = g.n();
    (0..n * n)
        .map(|k| if g.has_edge(k / n, k % n) { '1' } else { '0' })
        .collect()
}

pub fn milli(w: f64) -> i64 {
    (w * 1000.0).round() as i64
}

pub fn oracle_cost_milli(g: &SystemGraph, u: usize, w: &WeightedMeasurement) -> i64 {
    let n = g.n();
    let (d, b) = unrolled_marginal(&dense(g), u);
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            let s = w.directed(i, j);
            if s.present != d[i][j] {
                total += milli(s.weight);
            }
            if i < j {
                let s = w.bidirected(i, j);
                if s.present != b[i][j] {
                    total += milli(s.weight);
                }
            }
        }
    }
    total
}

/// Minimum cost and its minimizers over all graphs at rate `u`.
pub fn brute_force_optimum(w: &WeightedMeasurement, u: usize) -> (i64, Vec<SystemGraph>) {
    let n = w.n();
    let mut best = i64::MAX;
    let mut argmin = Vec::new();
    for c in 0..1u64 << (n * n) {
        let g = graph_from_bits(n, c);
        let cost = oracle_cost_milli(&g, u, w);
        if cost < best {
            best = cost;
            argmin.clear();
        }
        if cost == best {
            argmin.push(g);
        }
    }
    argmin.sort_by_key(bit_string);
    (best, argmin)
}

/// Fully specified structure with every status drawn uniformly.
pub fn random_structure(rng: &mut impl Rng, n: usize) -> EstimatedStructure {
    let mut h = EstimatedStructure::unknown(n).unwrap();
    let pick = |rng: &mut dyn rand::RngCore| {
        if rng.random_bool(0.5) {
            Status::Present
        } else {
            Status::Absent
        }
    };
    for i in 0..n {
        for j in 0..n {
            h.set_directed(i, j, pick(rng)).unwrap();
            if i < j {
                h.set_bidirected(i, j, pick(rng)).unwrap();
            }
        }
    }
    h
}

/// The exact structure of a random graph with a few statuses flipped.
pub fn perturbed_structure(
    rng: &mut impl Rng,
    n: usize,
    u: usize,
    flips: usize,
) -> EstimatedStructure {
    let p = rng.random_range(0.1..0.6);
    let g = random_graph(rng, n, p);
    let mut h = EstimatedStructure::from_measurement(&subsample_core::undersample(&g, u));
    let flip = |s: Status| {
        if s == Status::Present {
            Status::Absent
        } else {
            Status::Present
        }
    };
    for _ in 0..flips {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i != j && rng.random_bool(0.3) {
            let s = h.bidirected_status(i, j);
            h.set_bidirected(i, j, flip(s)).unwrap();
        } else {
            let s = h.directed_status(i, j);
            h.set_directed(i, j, flip(s)).unwrap();
        }
    }
    h
}

/// Three-node structure with directed `1 -> 2`, `1 -> 3` present and every
/// other status absent.
pub fn fork_structure() -> EstimatedStructure {
    let mut h = EstimatedStructure::unknown(3).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let present = i == 0 && j > 0;
            h.set_directed(
                i,
                j,
                if present {
                    Status::Present
                } else {
                    Status::Absent
                },
            )
            .unwrap();
            if i < j {
                h.set_bidirected(i, j, Status::Absent).unwrap();
            }
        }
    }
    h
}
