//! Minimum-conflict system graphs for a weighted measurement structure.
//!
//! The objective charges the weight of every statement the candidate's
//! undersampling contradicts: a present edge that is missing, or an absent
//! edge that appears. Weights are converted to integer milli-units
//! (`round(1000 * w)`) before searching, the same scale the exported logic
//! program uses, so both routes agree exactly.

use std::fmt;

use crate::consistent::SearchOptions;
use crate::error::{Error, Result};
use crate::graph::{undersample, EstimatedStructure, MeasurementGraph, Status, SystemGraph, USpec};
use crate::search::{greedy_upper_bound, search, Objective};

/// Weight scale used for integer costs.
pub const MILLI: f64 = 1000.0;

pub fn to_milli(weight: f64) -> i64 {
    (weight * MILLI).round() as i64
}

pub fn from_milli(milli: i64) -> f64 {
    milli as f64 / MILLI
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Statement {
    pub present: bool,
    pub weight: f64,
}

impl Statement {
    pub fn present(weight: f64) -> Self {
        Statement {
            present: true,
            weight,
        }
    }

    pub fn absent(weight: f64) -> Self {
        Statement {
            present: false,
            weight,
        }
    }
}

fn check_weight(weight: f64) -> Result<()> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "weights must be finite and non-negative, got {weight}"
        )))
    }
}

/// Measurement structure with a presence/absence statement and a reliability
/// weight for every ordered pair and every unordered pair of distinct nodes.
#[derive(Clone, PartialEq)]
pub struct WeightedMeasurement {
    n: usize,
    directed: Vec<Statement>,
    // indexed i * n + j with i < j
    bidirected: Vec<Statement>,
}

impl WeightedMeasurement {
    /// Every statement absent with weight zero.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > crate::bitmatrix::MAX_NODES {
            return Err(Error::NodeCount(n));
        }
        Ok(WeightedMeasurement {
            n,
            directed: vec![Statement::absent(0.0); n * n],
            bidirected: vec![Statement::absent(0.0); n * n],
        })
    }

    /// Statements read off `m`, all with the same weight.
    pub fn from_graph(m: &MeasurementGraph, weight: f64) -> Result<Self> {
        check_weight(weight)?;
        let n = m.n();
        let mut w = Self::new(n)?;
        for i in 0..n {
            for j in 0..n {
                w.directed[i * n + j] = Statement {
                    present: m.has_directed(i, j),
                    weight,
                };
                if i < j {
                    w.bidirected[i * n + j] = Statement {
                        present: m.has_bidirected(i, j),
                        weight,
                    };
                }
            }
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::NodeIndex { index, n: self.n });
            }
        }
        Ok(())
    }

    pub fn set_directed(&mut self, i: usize, j: usize, s: Statement) -> Result<()> {
        self.check(i, j)?;
        check_weight(s.weight)?;
        self.directed[i * self.n + j] = s;
        Ok(())
    }

    pub fn set_bidirected(&mut self, i: usize, j: usize, s: Statement) -> Result<()> {
        self.check(i, j)?;
        if i == j {
            return Err(Error::SelfBidirected(i));
        }
        check_weight(s.weight)?;
        let (i, j) = (i.min(j), i.max(j));
        self.bidirected[i * self.n + j] = s;
        Ok(())
    }

    pub fn directed(&self, i: usize, j: usize) -> Statement {
        self.directed[i * self.n + j]
    }

    pub fn bidirected(&self, i: usize, j: usize) -> Statement {
        let (i, j) = (i.min(j), i.max(j));
        self.bidirected[i * self.n + j]
    }

    /// `(i, j, statement)` for every ordered pair, row-major.
    pub fn directed_statements(&self) -> impl Iterator<Item = (usize, usize, Statement)> + '_ {
        let n = self.n;
        (0..n * n).map(move |k| (k / n, k % n, self.directed[k]))
    }

    /// `(i, j, statement)` for every `i < j`.
    pub fn bidirected_statements(&self) -> impl Iterator<Item = (usize, usize, Statement)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j, self.bidirected[i * n + j])))
    }

    /// Statuses only, with no unknowns.
    pub fn to_structure(&self) -> EstimatedStructure {
        let mut h = EstimatedStructure::unknown(self.n).expect("valid size");
        let status = |s: Statement| {
            if s.present {
                Status::Present
            } else {
                Status::Absent
            }
        };
        for (i, j, s) in self.directed_statements() {
            h.set_directed(i, j, status(s)).expect("in range");
        }
        for (i, j, s) in self.bidirected_statements() {
            h.set_bidirected(i, j, status(s)).expect("in range");
        }
        h
    }

    /// Measurement graph of the present statements.
    pub fn present_graph(&self) -> MeasurementGraph {
        let mut m = MeasurementGraph::empty(self.n).expect("valid size");
        for (i, j, s) in self.directed_statements() {
            if s.present {
                m.add_directed(i, j).expect("in range");
            }
        }
        for (i, j, s) in self.bidirected_statements() {
            if s.present {
                m.add_bidirected(i, j).expect("in range");
            }
        }
        m
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        check_weight(factor)?;
        let mut w = self.clone();
        w.directed.iter_mut().for_each(|s| s.weight *= factor);
        w.bidirected.iter_mut().for_each(|s| s.weight *= factor);
        Ok(w)
    }

    pub(crate) fn objective(&self) -> Objective {
        let mut obj = Objective::new(self.n);
        for (i, j, s) in self.directed_statements() {
            obj.set_directed(i, j, s.present, to_milli(s.weight));
        }
        for (i, j, s) in self.bidirected_statements() {
            obj.set_bidirected(i, j, s.present, to_milli(s.weight));
        }
        obj
    }
}

impl fmt::Debug for WeightedMeasurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedMeasurement")
            .field("n", &self.n)
            .field("directed", &self.directed_statements().collect::<Vec<_>>())
            .field(
                "bidirected",
                &self.bidirected_statements().collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Objective value of `g` at rate `u`, in milli-units.
pub fn cost_milli(g: &SystemGraph, u: usize, w: &WeightedMeasurement) -> Result<i64> {
    if g.n() != w.n() {
        return Err(Error::NodeCountMismatch {
            left: g.n(),
            right: w.n(),
        });
    }
    let m = undersample(g, u);
    let mut total = 0;
    for (i, j, s) in w.directed_statements() {
        if s.present != m.has_directed(i, j) {
            total += to_milli(s.weight);
        }
    }
    for (i, j, s) in w.bidirected_statements() {
        if s.present != m.has_bidirected(i, j) {
            total += to_milli(s.weight);
        }
    }
    Ok(total)
}

/// Objective value of `g` at rate `u`: total weight of contradicted statements.
pub fn cost(g: &SystemGraph, u: usize, w: &WeightedMeasurement) -> Result<f64> {
    cost_milli(g, u, w).map(from_milli)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredSolution {
    pub graph: SystemGraph,
    pub u: usize,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalResult {
    pub min_cost: f64,
    pub min_cost_milli: i64,
    /// Minimizers sorted by `u`, then by edge bit vector.
    pub solutions: Vec<ScoredSolution>,
    /// Every minimizer is listed and optimality is proven.
    pub complete: bool,
    /// The deadline expired; `min_cost` is the best found so far.
    pub timed_out: bool,
    pub nodes: u64,
}

impl OptimalResult {
    pub fn graphs(&self) -> impl Iterator<Item = &SystemGraph> {
        self.solutions.iter().map(|s| &s.graph)
    }
}

/// Minimum of the objective jointly over graphs and every rate in `uspec`,
/// with up to the configured number of minimizers.
pub fn optimize(w: &WeightedMeasurement, uspec: USpec, opts: &SearchOptions) -> OptimalResult {
    let obj = w.objective();
    let (bound, seed_graph, seed_u) = greedy_upper_bound(&obj, uspec);
    let outcome = search(&obj, uspec, bound, &opts.limits(true));
    let mut solutions: Vec<ScoredSolution> = outcome
        .found
        .into_iter()
        .map(|f| ScoredSolution {
            graph: f.graph,
            u: f.u,
            cost: from_milli(f.cost),
        })
        .collect();
    let best = match outcome.best {
        Some(best) => best,
        None => {
            // Only reachable on timeout: fall back to the greedy candidate.
            solutions.push(ScoredSolution {
                graph: SystemGraph::from_adjacency(seed_graph).expect("valid size"),
                u: seed_u,
                cost: from_milli(bound),
            });
            bound
        }
    };
    OptimalResult {
        min_cost: from_milli(best),
        min_cost_milli: best,
        solutions,
        complete: !outcome.truncated && !outcome.timed_out,
        timed_out: outcome.timed_out,
        nodes: outcome.nodes,
    }
}
