//! Recovery of system-timescale causal graphs from subsampled measurements.
//!
//! A system graph `G1` over variables `V_1..V_n` has an edge `i -> j` when
//! `V_i` at one step directly influences `V_j` at the next. Observing only
//! every `u`-th step yields a measurement graph whose directed edges are the
//! length-`u` walks of `G1` and whose bidirected edges join nodes sharing a
//! common cause through two walks of equal length below `u`.
//!
//! * [`consistent`] enumerates every `G1` whose undersampling matches a
//!   given structure exactly.
//! * [`optimal`] finds the `G1` that contradict a weighted, possibly
//!   conflicting structure the least.
//! * [`estimate`] derives weighted structures from time-series data.
//! * [`simulate`] generates ground truth and data; [`bench`] runs the
//!   evaluation protocols.

pub mod bench;
pub mod bitmatrix;
pub mod consistent;
pub mod encoding;
pub mod error;
pub mod estimate;
pub mod format;
pub mod graph;
pub mod optimal;
pub mod rng;
mod search;
pub mod series;
pub mod simulate;

pub use consistent::{count_solutions, solve, SearchOptions, Solution, SolutionSet};
pub use error::{Error, Result};
pub use graph::{
    exact_length_paths, is_consistent, undersample, EstimatedStructure, MeasurementGraph, Status,
    SystemGraph, USpec,
};
pub use optimal::{cost, optimize, OptimalResult, Statement, WeightedMeasurement};
pub use series::TimeSeries;
