//! Exact branch-and-bound over the edge variables of a system graph.
//!
//! Every statement about the measurement graph (a directed or bidirected
//! pair that should be present or absent) carries an integer weight. A
//! partial assignment fixes some edges to true (the lower graph `L`) and some
//! to false; the upper graph `U` is everything not fixed to false. Walks in
//! `L` exist in every completion and walks outside `U` exist in none, so
//!
//! * an absent statement already implied by `L`, or
//! * a present statement no longer achievable within `U`
//!
//! is violated in every completion. The sum of those weights is an admissible
//! lower bound. Satisfaction search uses unit weights and a fixed bound of
//! zero; optimization uses the incumbent cost as the bound.

use std::time::Instant;

use crate::bitmatrix::{low_bits, ones, BitMatrix};
use crate::graph::{confounded_pairs, walk_powers, SystemGraph, USpec};

/// Weighted statements about the measurement graph. Zero-weight statements
/// are dropped on construction since they never change a cost.
#[derive(Clone, Debug)]
pub(crate) struct Objective {
    n: usize,
    dir_present: BitMatrix,
    dir_absent: BitMatrix,
    dir_weight: Vec<i64>,
    // upper triangle only
    bi_present: BitMatrix,
    bi_absent: BitMatrix,
    bi_weight: Vec<i64>,
    /// Every bidirected pair is a hard absence.
    no_confounding: bool,
}

impl Objective {
    pub(crate) fn new(n: usize) -> Self {
        Objective {
            n,
            dir_present: BitMatrix::zeros(n),
            dir_absent: BitMatrix::zeros(n),
            dir_weight: vec![0; n * n],
            bi_present: BitMatrix::zeros(n),
            bi_absent: BitMatrix::zeros(n),
            bi_weight: vec![0; n * n],
            no_confounding: false,
        }
    }

    pub(crate) fn set_directed(&mut self, i: usize, j: usize, present: bool, weight: i64) {
        debug_assert!(weight >= 0);
        self.dir_present.clear(i, j);
        self.dir_absent.clear(i, j);
        self.dir_weight[i * self.n + j] = weight;
        if weight > 0 {
            if present {
                self.dir_present.set(i, j);
            } else {
                self.dir_absent.set(i, j);
            }
        }
    }

    pub(crate) fn set_bidirected(&mut self, i: usize, j: usize, present: bool, weight: i64) {
        debug_assert!(weight >= 0 && i != j);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.bi_present.clear(i, j);
        self.bi_absent.clear(i, j);
        self.bi_weight[i * self.n + j] = weight;
        if weight > 0 {
            if present {
                self.bi_present.set(i, j);
            } else {
                self.bi_absent.set(i, j);
            }
        }
    }

    /// Enables the out-degree shortcut: with no confounding allowed and
    /// `u >= 2`, two successors of one node would induce a bidirected edge.
    pub(crate) fn set_no_confounding(&mut self, value: bool) {
        self.no_confounding = value;
    }

    fn weighted(&self, mask: &BitMatrix, weights: &[i64]) -> i64 {
        mask.iter_ones().map(|(i, j)| weights[i * self.n + j]).sum()
    }

    /// Cost of exactly the graph `g` at rate `u`.
    pub(crate) fn cost(&self, g: &BitMatrix, u: usize) -> i64 {
        let powers = walk_powers(g, u);
        let bi = confounded_pairs(&powers, u).and(&BitMatrix::upper_triangle(self.n));
        self.weighted(&self.dir_absent.and(&powers[u]), &self.dir_weight)
            + self.weighted(&self.dir_present.and_not(&powers[u]), &self.dir_weight)
            + self.weighted(&self.bi_absent.and(&bi), &self.bi_weight)
            + self.weighted(&self.bi_present.and_not(&bi), &self.bi_weight)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub graph: SystemGraph,
    pub u: usize,
    pub cost: i64,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Outcome {
    /// Cost of the listed solutions; `None` when none was found.
    pub best: Option<i64>,
    pub found: Vec<Found>,
    /// Solutions at `best`, including any not stored.
    pub count: u64,
    pub truncated: bool,
    pub timed_out: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Limits {
    pub cap: Option<usize>,
    pub deadline: Option<Instant>,
    /// Store solution graphs; counting alone otherwise.
    pub collect: bool,
}

/// Shared incumbent across all rates of one search.
struct Incumbent {
    best: i64,
    /// Prune when the lower bound exceeds this.
    limit: i64,
    found: Vec<Found>,
    count: u64,
    truncated: bool,
    any: bool,
}

impl Incumbent {
    fn offer(&mut self, lower: &BitMatrix, u: usize, cost: i64, limits: &Limits) {
        if cost > self.best {
            return;
        }
        if cost < self.best {
            self.best = cost;
            self.limit = cost;
            self.found.clear();
            self.count = 0;
            self.truncated = false;
        }
        self.any = true;
        if limits.cap.is_some_and(|cap| self.count as usize >= cap) {
            // A further tie exists; from now on only strictly better counts.
            self.truncated = true;
            self.limit = self.best - 1;
            return;
        }
        self.count += 1;
        if limits.collect {
            self.found.push(Found {
                graph: SystemGraph::from_adjacency(lower.clone()).expect("valid size"),
                u,
                cost,
            });
        }
    }

    /// Offers `lower` plus every subset of `open`, all known to cost `cost`.
    /// Returns false if the deadline passed first.
    fn offer_all(
        &mut self,
        lower: &BitMatrix,
        open: &BitMatrix,
        u: usize,
        cost: i64,
        limits: &Limits,
    ) -> bool {
        let free: Vec<(usize, usize)> = open.iter_ones().collect();
        if !limits.collect && limits.cap.is_none() {
            self.offer(lower, u, cost, limits);
            let extra = if free.len() >= 64 {
                u64::MAX
            } else {
                (1u64 << free.len()) - 1
            };
            self.count = self.count.saturating_add(extra);
            return true;
        }
        let mut g = lower.clone();
        // Gray code: each step toggles exactly one free edge.
        let total: u128 = 1 << free.len().min(127);
        let mut step: u128 = 0;
        loop {
            self.offer(&g, u, cost, limits);
            if self.limit < cost {
                return true;
            }
            step += 1;
            if step == total {
                return true;
            }
            if step.is_multiple_of(1024) && limits.deadline.is_some_and(|d| Instant::now() >= d) {
                return false;
            }
            let (i, j) = free[step.trailing_zeros() as usize];
            g.assign(i, j, !g.get(i, j));
        }
    }
}

struct Node {
    lower: BitMatrix,
    falses: BitMatrix,
}

struct RateSearch<'a> {
    obj: &'a Objective,
    u: usize,
    n: usize,
    full: BitMatrix,
    upper_tri: BitMatrix,
    out_degree_rule: bool,
}

impl<'a> RateSearch<'a> {
    fn new(obj: &'a Objective, u: usize) -> Self {
        RateSearch {
            obj,
            u,
            n: obj.n,
            full: BitMatrix::full(obj.n),
            upper_tri: BitMatrix::upper_triangle(obj.n),
            out_degree_rule: obj.no_confounding && u >= 2,
        }
    }

    /// Weight of absent statements implied by every supergraph of `lower`.
    fn forced_cost(&self, lower: &BitMatrix) -> i64 {
        let obj = self.obj;
        if obj.dir_absent.is_empty() && obj.bi_absent.is_empty() {
            return 0;
        }
        let powers = walk_powers(lower, self.u);
        let mut cost = obj.weighted(&obj.dir_absent.and(&powers[self.u]), &obj.dir_weight);
        if !obj.bi_absent.is_empty() {
            let bi = confounded_pairs(&powers, self.u).and(&self.upper_tri);
            cost += obj.weighted(&obj.bi_absent.and(&bi), &obj.bi_weight);
        }
        cost
    }

    /// Weight of present statements unreachable in every subgraph of `upper`.
    fn missing_cost(&self, upper: &BitMatrix) -> i64 {
        let obj = self.obj;
        if obj.dir_present.is_empty() && obj.bi_present.is_empty() {
            return 0;
        }
        let powers = walk_powers(upper, self.u);
        let mut cost = obj.weighted(&obj.dir_present.and_not(&powers[self.u]), &obj.dir_weight);
        if !obj.bi_present.is_empty() {
            let bi = confounded_pairs(&powers, self.u);
            cost += obj.weighted(&obj.bi_present.and_not(&bi), &obj.bi_weight);
        }
        cost
    }

    /// Fixes every edge whose opposite value alone would push the bound past
    /// `limit`, until nothing changes. Returns the two parts of the lower
    /// bound, or `None` on a conflict.
    fn propagate(&self, node: &mut Node, limit: i64) -> Option<(i64, i64)> {
        let mask = low_bits(self.n);
        let mut upper = node.falses.complement();
        let mut forced = self.forced_cost(&node.lower);
        let mut missing = self.missing_cost(&upper);
        if forced + missing > limit {
            return None;
        }
        loop {
            let mut changed = false;
            if self.out_degree_rule {
                for i in 0..self.n {
                    let row = node.lower.row(i);
                    if row.count_ones() > 1 {
                        return None;
                    }
                    if row != 0 {
                        let rest = mask & !row & !node.falses.row(i);
                        if rest != 0 {
                            node.falses.set_row(i, node.falses.row(i) | rest);
                            upper.set_row(i, upper.row(i) & !rest);
                            changed = true;
                        }
                    }
                }
                if changed {
                    missing = self.missing_cost(&upper);
                    if forced + missing > limit {
                        return None;
                    }
                }
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    if node.lower.get(i, j) || node.falses.get(i, j) {
                        continue;
                    }
                    node.lower.set(i, j);
                    let with_edge = self.forced_cost(&node.lower);
                    node.lower.clear(i, j);
                    if with_edge + missing > limit {
                        node.falses.set(i, j);
                        upper.clear(i, j);
                        missing = self.missing_cost(&upper);
                        changed = true;
                        if forced + missing > limit {
                            return None;
                        }
                        continue;
                    }
                    upper.clear(i, j);
                    let without_edge = self.missing_cost(&upper);
                    upper.set(i, j);
                    if forced + without_edge > limit {
                        node.lower.set(i, j);
                        forced = self.forced_cost(&node.lower);
                        changed = true;
                        if forced + missing > limit {
                            return None;
                        }
                    }
                }
            }
            if !changed {
                return Some((forced, missing));
            }
        }
    }

    /// Picks the next edge and the value to try first.
    ///
    /// Among present statements not yet guaranteed by `L` but still reachable
    /// in `U`, the one with the fewest candidate supports is chosen (ties by
    /// larger weight, then index) and the first undecided edge on one of its
    /// walks is set true first. Once every present statement is settled, the
    /// remaining edges can only add cost, and they are decided in row-major
    /// order with false first.
    fn choose_branch(&self, node: &Node) -> (usize, usize, bool) {
        let n = self.n;
        let u = self.u;
        let obj = self.obj;
        let upper = node.falses.complement();
        let up = walk_powers(&upper, u);
        let up_t: Vec<BitMatrix> = up.iter().map(BitMatrix::transpose).collect();

        // (supports, -weight, kind, i, j)
        let mut best: Option<(u32, i64, u8, usize, usize)> = None;
        let mut consider = |key: (u32, i64, u8, usize, usize)| {
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        };

        if !obj.dir_present.is_empty() {
            let low_u = node.lower.pow(u);
            let open = obj.dir_present.and(&up[u]).and_not(&low_u);
            for (i, j) in open.iter_ones() {
                let supports = (upper.row(i) & up_t[u - 1].row(j)).count_ones();
                consider((supports, -obj.dir_weight[i * n + j], 0, i, j));
            }
        }
        if !obj.bi_present.is_empty() && u >= 2 {
            let low = walk_powers(&node.lower, u - 1);
            let low_bi = confounded_pairs(&low, u);
            let up_bi = confounded_pairs(&up, u);
            let open = obj.bi_present.and(&up_bi).and_not(&low_bi);
            for (i, j) in open.iter_ones() {
                let supports: u32 = (1..u)
                    .map(|k| (up_t[k].row(i) & up_t[k].row(j)).count_ones())
                    .sum();
                consider((supports, -obj.bi_weight[i * n + j], 1, i, j));
            }
        }

        if let Some((_, _, kind, i, j)) = best {
            let edge = if kind == 0 {
                self.walk_edge(node, &upper, &up_t, i, j, u)
            } else {
                (1..u)
                    .flat_map(|k| ones(up_t[k].row(i) & up_t[k].row(j)).map(move |c| (k, c)))
                    .find_map(|(k, c)| {
                        self.walk_edge(node, &upper, &up_t, c, i, k)
                            .or_else(|| self.walk_edge(node, &upper, &up_t, c, j, k))
                    })
            };
            if let Some((a, b)) = edge {
                return (a, b, true);
            }
        }

        let open = self.full.and_not(&node.lower).and_not(&node.falses);
        let (a, b) = open
            .iter_ones()
            .next()
            .expect("a branch node has an open edge");
        (a, b, false)
    }

    /// First undecided edge on a greedy `len`-step walk from `from` to `to`
    /// inside `upper`, preferring edges already in `L`.
    fn walk_edge(
        &self,
        node: &Node,
        upper: &BitMatrix,
        up_t: &[BitMatrix],
        from: usize,
        to: usize,
        len: usize,
    ) -> Option<(usize, usize)> {
        let mut cur = from;
        for rem in (1..=len).rev() {
            let next = upper.row(cur) & up_t[rem - 1].row(to);
            if next == 0 {
                return None;
            }
            let fixed = next & node.lower.row(cur);
            if fixed != 0 {
                cur = fixed.trailing_zeros() as usize;
            } else {
                let m = next.trailing_zeros() as usize;
                return Some((cur, m));
            }
        }
        None
    }

    fn run(&self, inc: &mut Incumbent, limits: &Limits, nodes: &mut u64) -> bool {
        let mut stack = vec![Node {
            lower: BitMatrix::zeros(self.n),
            falses: BitMatrix::zeros(self.n),
        }];
        while let Some(mut node) = stack.pop() {
            *nodes += 1;
            if let Some(deadline) = limits.deadline {
                if Instant::now() >= deadline {
                    return false;
                }
            }
            let Some((forced, missing)) = self.propagate(&mut node, inc.limit) else {
                continue;
            };
            let bound = forced + missing;
            let open = self.full.and_not(&node.lower).and_not(&node.falses);
            if open.is_empty() {
                inc.offer(&node.lower, self.u, bound, limits);
                continue;
            }
            // Both parts are monotone in the graph, so equal values at L and
            // U pin the cost of every completion.
            if self.forced_cost(&node.falses.complement()) == forced
                && self.missing_cost(&node.lower) == missing
            {
                if !inc.offer_all(&node.lower, &open, self.u, bound, limits) {
                    return false;
                }
                continue;
            }
            let (a, b, first) = self.choose_branch(&node);
            let mut with = Node {
                lower: node.lower.clone(),
                falses: node.falses.clone(),
            };
            with.lower.set(a, b);
            node.falses.set(a, b);
            let without = node;
            if first {
                stack.push(without);
                stack.push(with);
            } else {
                stack.push(with);
                stack.push(without);
            }
        }
        true
    }
}

/// Exhaustive search over every rate in `uspec` for graphs of minimum cost,
/// considering only costs up to `bound`.
///
/// Satisfaction search passes zero. Optimization passes the cost of some
/// known candidate, so at least one solution is always found.
pub(crate) fn search(obj: &Objective, uspec: USpec, bound: i64, limits: &Limits) -> Outcome {
    let start = bound;
    let mut inc = Incumbent {
        best: start,
        limit: start,
        found: Vec::new(),
        count: 0,
        truncated: false,
        any: false,
    };
    let mut nodes = 0;
    let mut timed_out = false;
    for u in uspec.rates() {
        let rs = RateSearch::new(obj, u);
        if !rs.run(&mut inc, limits, &mut nodes) {
            timed_out = true;
            break;
        }
        if inc.limit < 0 {
            break;
        }
    }
    let mut found = inc.found;
    found.sort_by(|a, b| a.u.cmp(&b.u).then_with(|| a.graph.canonical_cmp(&b.graph)));
    Outcome {
        best: inc.any.then_some(inc.best),
        found,
        count: inc.count,
        truncated: inc.truncated,
        timed_out,
        nodes,
    }
}

/// First-improvement hill climbing from the empty graph at every rate.
/// Returns the best cost seen with its graph and rate.
pub(crate) fn greedy_upper_bound(obj: &Objective, uspec: USpec) -> (i64, BitMatrix, usize) {
    let n = obj.n;
    let mut best = (i64::MAX, BitMatrix::zeros(n), uspec.lo());
    for u in uspec.rates() {
        let mut g = BitMatrix::zeros(n);
        let mut cost = obj.cost(&g, u);
        loop {
            let mut improved = false;
            for i in 0..n {
                for j in 0..n {
                    let had = g.get(i, j);
                    g.assign(i, j, !had);
                    let c = obj.cost(&g, u);
                    if c < cost {
                        cost = c;
                        improved = true;
                    } else {
                        g.assign(i, j, had);
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if cost < best.0 {
            best = (cost, g, u);
        }
    }
    best
}
