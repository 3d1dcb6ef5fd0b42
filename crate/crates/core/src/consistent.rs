//! Enumeration of every system graph whose undersampling matches a
//! measurement structure exactly.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{EstimatedStructure, SystemGraph, USpec};
use crate::search::{search, Limits, Objective};

pub const DEFAULT_MAX_SOLUTIONS: usize = 1000;

/// Largest node count accepted by [`count_solutions`].
pub const COUNT_NODE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// `None` enumerates everything.
    pub max_solutions: Option<usize>,
    pub timeout: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_solutions: Some(DEFAULT_MAX_SOLUTIONS),
            timeout: None,
        }
    }
}

impl SearchOptions {
    pub fn unlimited() -> Self {
        SearchOptions {
            max_solutions: None,
            timeout: None,
        }
    }

    pub fn max_solutions(mut self, cap: usize) -> Self {
        self.max_solutions = Some(cap.max(1));
        self
    }

    pub fn timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }

    pub(crate) fn limits(&self, collect: bool) -> Limits {
        Limits {
            cap: self.max_solutions,
            deadline: self.timeout.map(|t| Instant::now() + t),
            collect,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub graph: SystemGraph,
    pub u: usize,
}

/// The equivalence class of `(graph, u)` pairs, sorted by `u` and then by
/// the row-major edge bit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub solutions: Vec<Solution>,
    /// Every consistent pair is listed.
    pub complete: bool,
    /// The deadline expired before the search finished.
    pub timed_out: bool,
    pub cap: Option<usize>,
    /// Search nodes visited.
    pub nodes: u64,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &SystemGraph> {
        self.solutions.iter().map(|s| &s.graph)
    }

    pub fn contains(&self, g: &SystemGraph, u: usize) -> bool {
        self.solutions.iter().any(|s| s.u == u && &s.graph == g)
    }
}

fn objective(h: &EstimatedStructure) -> Objective {
    let n = h.n();
    let mut obj = Objective::new(n);
    for (i, j) in h.directed_present().iter_ones() {
        obj.set_directed(i, j, true, 1);
    }
    for (i, j) in h.directed_absent().iter_ones() {
        obj.set_directed(i, j, false, 1);
    }
    for (i, j) in h.bidirected_present().iter_ones().filter(|(i, j)| i < j) {
        obj.set_bidirected(i, j, true, 1);
    }
    for (i, j) in h.bidirected_absent().iter_ones().filter(|(i, j)| i < j) {
        obj.set_bidirected(i, j, false, 1);
    }
    obj.set_no_confounding(n >= 2 && h.all_bidirected_absent());
    obj
}

/// All `(g, u)` with `u` in `uspec` whose undersampling agrees with every
/// known status of `h`, up to the configured cap.
///
/// The search is complete: an empty result with `complete == true` proves
/// that no consistent graph exists.
pub fn solve(h: &EstimatedStructure, uspec: USpec, opts: &SearchOptions) -> SolutionSet {
    let outcome = search(&objective(h), uspec, 0, &opts.limits(true));
    SolutionSet {
        solutions: outcome
            .found
            .into_iter()
            .map(|f| Solution {
                graph: f.graph,
                u: f.u,
            })
            .collect(),
        complete: !outcome.truncated && !outcome.timed_out,
        timed_out: outcome.timed_out,
        cap: opts.max_solutions,
        nodes: outcome.nodes,
    }
}

/// Exact size of the equivalence class without storing it.
pub fn count_solutions(h: &EstimatedStructure, uspec: USpec) -> Result<u64> {
    if h.n() > COUNT_NODE_LIMIT {
        return Err(Error::SizeGuard {
            n: h.n(),
            limit: COUNT_NODE_LIMIT,
        });
    }
    let limits = Limits {
        cap: None,
        deadline: None,
        collect: false,
    };
    Ok(search(&objective(h), uspec, 0, &limits).count)
}
