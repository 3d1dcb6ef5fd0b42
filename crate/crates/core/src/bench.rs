//! Evaluation protocols: seeded instance generation, the two pipelines
//! (exact structure into the consistency search, or data into estimation
//! and optimization), accuracy bookkeeping and CSV output.
//!
//! Record CSVs hold only deterministic columns, so two runs with the same
//! spec are byte-identical. Wall-clock times go to a separate timings CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::consistent::{solve, SearchOptions};
use crate::error::{Error, Result};
use crate::estimate::{PairTests, TestConfig};
use crate::graph::{undersample, EstimatedStructure, MeasurementGraph, SystemGraph, USpec};
use crate::optimal::optimize;
use crate::rng::derive_seed;
use crate::simulate::{
    random_connected_graph, random_var, simulate, subsample_series, system_length, EdgeTarget,
    GenConfig, DEFAULT_BURN_IN, DEFAULT_NOISE_STD,
};

/// Worker-pool width override.
pub const WORKERS_ENV: &str = "SUBSAMPLE_WORKERS";
/// Default per-instance timeout override, in seconds.
pub const TIMEOUT_ENV: &str = "SUBSAMPLE_TIMEOUT";

/// Confusion counts of edge presence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn rates(&self) -> Rates {
        let ratio = |a: usize, b: usize| (a + b > 0).then(|| a as f64 / (a + b) as f64);
        Rates {
            tpr: ratio(self.tp, self.fn_),
            fpr: ratio(self.fp, self.tn),
        }
    }
}

/// `None` marks a rate whose denominator is zero.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Rates {
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
}

impl Rates {
    /// Uniform average over the defined values of each field.
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a Rates>) -> Rates {
        let (mut t, mut nt, mut f, mut nf) = (0.0, 0, 0.0, 0);
        for r in items {
            if let Some(v) = r.tpr {
                t += v;
                nt += 1;
            }
            if let Some(v) = r.fpr {
                f += v;
                nf += 1;
            }
        }
        Rates {
            tpr: (nt > 0).then(|| t / nt as f64),
            fpr: (nf > 0).then(|| f / nf as f64),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AccuracyReport {
    /// Estimated structure against the true measurement graph.
    pub h_directed: Rates,
    pub h_bidirected: Rates,
    /// Mean solution accuracy of the returned system graphs.
    pub g1: Rates,
}

pub fn graph_confusion(predicted: &SystemGraph, truth: &SystemGraph) -> Confusion {
    let n = truth.n();
    let mut c = Confusion::default();
    for i in 0..n {
        for j in 0..n {
            c.add(predicted.has_edge(i, j), truth.has_edge(i, j));
        }
    }
    c
}

/// Per-solution directed-edge TPR and FPR against `truth`, averaged over
/// the solutions. Empty input gives undefined rates.
pub fn mean_solution_accuracy<'a>(
    solutions: impl IntoIterator<Item = &'a SystemGraph>,
    truth: &SystemGraph,
) -> Result<Rates> {
    let mut per = Vec::new();
    for g in solutions {
        if g.n() != truth.n() {
            return Err(Error::NodeCountMismatch {
                left: g.n(),
                right: truth.n(),
            });
        }
        per.push(graph_confusion(g, truth).rates());
    }
    Ok(Rates::mean(&per))
}

/// Directed and bidirected confusion of an estimated measurement graph.
pub fn structure_confusion(
    estimated: &MeasurementGraph,
    truth: &MeasurementGraph,
) -> (Confusion, Confusion) {
    let n = truth.n();
    let (mut d, mut b) = (Confusion::default(), Confusion::default());
    for i in 0..n {
        for j in 0..n {
            d.add(estimated.has_directed(i, j), truth.has_directed(i, j));
            if i < j {
                b.add(estimated.has_bidirected(i, j), truth.has_bidirected(i, j));
            }
        }
    }
    (d, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Protocol {
    /// Runtime against density, exact structure, `n = 10`.
    Fig2Density,
    /// Runtime against node count at 10% density.
    Fig2Nodes,
    /// Enumerating all solutions against density, `n = 20`.
    Fig3Density,
    /// Enumerating all solutions over `u = 1..5`.
    Fig3Urange,
    /// Estimation and optimization accuracy over the test-parameter grid.
    Fig4Accuracy,
    /// Optimization runtime against node count, sample size and scheme.
    Fig5Runtime,
}

impl Protocol {
    pub const ALL: [Protocol; 6] = [
        Protocol::Fig2Density,
        Protocol::Fig2Nodes,
        Protocol::Fig3Density,
        Protocol::Fig3Urange,
        Protocol::Fig4Accuracy,
        Protocol::Fig5Runtime,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Fig2Density => "fig2-density",
            Protocol::Fig2Nodes => "fig2-nodes",
            Protocol::Fig3Density => "fig3-density",
            Protocol::Fig3Urange => "fig3-urange",
            Protocol::Fig4Accuracy => "fig4-accuracy",
            Protocol::Fig5Runtime => "fig5-runtime",
        }
    }

    /// Whether instances go through estimation from data.
    pub fn uses_data(&self) -> bool {
        matches!(self, Protocol::Fig4Accuracy | Protocol::Fig5Runtime)
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Protocol::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!(
                    "unknown protocol {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub protocol: Protocol,
    pub seed: u64,
    /// Instances per grid point.
    pub instances: usize,
    pub nodes: Vec<usize>,
    pub targets: Vec<EdgeTarget>,
    /// True subsampling rate of the generated data or structure.
    pub u: usize,
    /// Rates searched over.
    pub search: USpec,
    /// Measurement-timescale sample sizes (data protocols only).
    pub samples: Vec<usize>,
    pub schemes: Vec<TestConfig>,
    pub max_solutions: Option<usize>,
    pub timeout: Option<Duration>,
    /// Worker-pool width; `None` reads the environment, then uses every core.
    pub workers: Option<usize>,
}

fn densities(values: &[f64]) -> Vec<EdgeTarget> {
    values.iter().map(|&d| EdgeTarget::Density(d)).collect()
}

fn env_timeout() -> Option<Option<Duration>> {
    let raw = std::env::var(TIMEOUT_ENV).ok()?;
    let secs: f64 = raw.trim().parse().ok()?;
    Some((secs > 0.0).then(|| Duration::from_secs_f64(secs)))
}

impl ExperimentSpec {
    /// The protocol at its default desk-scale settings. `SUBSAMPLE_TIMEOUT`
    /// (seconds, 0 for none) replaces the default timeout when set.
    pub fn canned(protocol: Protocol, seed: u64) -> Self {
        let base = ExperimentSpec {
            protocol,
            seed,
            instances: 100,
            nodes: vec![10],
            targets: densities(&[0.1]),
            u: 2,
            search: USpec::Fixed(2),
            samples: Vec::new(),
            schemes: Vec::new(),
            max_solutions: Some(1000),
            timeout: Some(Duration::from_secs(100)),
            workers: None,
        };
        let mut spec =
            match protocol {
                Protocol::Fig2Density => ExperimentSpec {
                    targets: densities(&[0.1, 0.2, 0.3, 0.4, 0.5]),
                    ..base
                },
                Protocol::Fig2Nodes => ExperimentSpec {
                    nodes: vec![10, 15, 20, 25, 30],
                    timeout: Some(Duration::from_secs(3600)),
                    ..base
                },
                Protocol::Fig3Density => ExperimentSpec {
                    instances: 20,
                    nodes: vec![20],
                    targets: densities(&[0.1, 0.15, 0.2]),
                    max_solutions: None,
                    ..base
                },
                Protocol::Fig3Urange => ExperimentSpec {
                    instances: 20,
                    nodes: vec![5, 6, 7, 8],
                    targets: densities(&[0.2]),
                    search: USpec::Range(1, 5),
                    max_solutions: None,
                    ..base
                },
                Protocol::Fig4Accuracy => ExperimentSpec {
                    nodes: vec![6],
                    targets: vec![EdgeTarget::AvgDegree(3.0)],
                    samples: vec![200],
                    schemes: [0.001, 0.01, 0.05, 0.1]
                        .into_iter()
                        .map(|a| TestConfig::Uniform { alpha: a })
                        .chain([0.2, 0.4, 0.6, 0.8].into_iter().map(|p| {
                            TestConfig::PseudoBoolean {
                                prior_independence: p,
                            }
                        }))
                        .collect(),
                    ..base
                },
                Protocol::Fig5Runtime => ExperimentSpec {
                    instances: 20,
                    nodes: vec![5, 6, 7],
                    targets: vec![EdgeTarget::AvgDegree(3.0)],
                    samples: vec![200, 500, 1000],
                    schemes: vec![
                        TestConfig::PseudoBoolean {
                            prior_independence: 0.4,
                        },
                        TestConfig::Uniform { alpha: 0.05 },
                    ],
                    ..base
                },
            };
        if let Some(t) = env_timeout() {
            spec.timeout = t;
        }
        spec
    }

    pub fn validate(&self) -> Result<()> {
        if self.u == 0 {
            return Err(Error::InvalidRate("u must be at least 1".into()));
        }
        if self.nodes.is_empty() || self.targets.is_empty() {
            return Err(Error::Config(
                "node and edge-target grids must be non-empty".into(),
            ));
        }
        for &n in &self.nodes {
            for &target in &self.targets {
                GenConfig { n, target, seed: 0 }.edge_count()?;
            }
        }
        if self.protocol.uses_data() && (self.samples.is_empty() || self.schemes.is_empty()) {
            return Err(Error::Config(
                "data protocols need sample sizes and schemes".into(),
            ));
        }
        Ok(())
    }

    fn jobs(&self) -> Vec<Job> {
        let samples: Vec<Option<usize>> = if self.protocol.uses_data() {
            self.samples.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let mut jobs = Vec::new();
        for &n in &self.nodes {
            for (t, &target) in self.targets.iter().enumerate() {
                for &samples in &samples {
                    for instance in 0..self.instances {
                        // Independent of the sample size, so instances pair up across it.
                        let key = ((n as u64) << 40) ^ ((t as u64) << 20) ^ instance as u64;
                        jobs.push(Job {
                            n,
                            target,
                            samples,
                            instance,
                            seed: derive_seed(self.seed, "instance", key),
                        });
                    }
                }
            }
        }
        jobs
    }
}

#[derive(Clone, Copy, Debug)]
struct Job {
    n: usize,
    target: EdgeTarget,
    samples: Option<usize>,
    instance: usize,
    seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub protocol: Protocol,
    /// Index within its grid point; equal ids across sample sizes and
    /// schemes share the same graph and model.
    pub instance: usize,
    pub n: usize,
    pub u: usize,
    pub target: EdgeTarget,
    pub edges: usize,
    pub samples: Option<usize>,
    pub scheme: Option<TestConfig>,
    pub seconds: f64,
    /// Data protocols only.
    pub min_cost: Option<f64>,
    pub solutions: usize,
    pub complete: bool,
    pub timed_out: bool,
    pub nodes_visited: u64,
    /// Whether the true graph is among the listed solutions.
    pub truth_found: bool,
    pub accuracy: AccuracyReport,
    /// Why the instance produced no result, if it failed.
    pub error: Option<String>,
}

fn options(spec: &ExperimentSpec) -> SearchOptions {
    SearchOptions {
        max_solutions: spec.max_solutions,
        timeout: spec.timeout,
    }
}

fn run_exact(spec: &ExperimentSpec, job: &Job, truth: &SystemGraph) -> BenchRecord {
    let m = undersample(truth, spec.u);
    let h = EstimatedStructure::from_measurement(&m);
    let start = Instant::now();
    let set = solve(&h, spec.search, &options(spec));
    let seconds = start.elapsed().as_secs_f64();
    let (d, b) = structure_confusion(&m, &m);
    BenchRecord {
        seconds,
        min_cost: None,
        solutions: set.len(),
        complete: set.complete,
        timed_out: set.timed_out,
        nodes_visited: set.nodes,
        truth_found: set.contains(truth, spec.u),
        accuracy: AccuracyReport {
            h_directed: d.rates(),
            h_bidirected: b.rates(),
            g1: mean_solution_accuracy(set.graphs(), truth).expect("same size"),
        },
        ..blank(spec, job, truth, None)
    }
}

fn blank(
    spec: &ExperimentSpec,
    job: &Job,
    truth: &SystemGraph,
    scheme: Option<TestConfig>,
) -> BenchRecord {
    BenchRecord {
        protocol: spec.protocol,
        instance: job.instance,
        n: job.n,
        u: spec.u,
        target: job.target,
        edges: truth.edge_count(),
        samples: job.samples,
        scheme,
        seconds: 0.0,
        min_cost: None,
        solutions: 0,
        complete: false,
        timed_out: false,
        nodes_visited: 0,
        truth_found: false,
        accuracy: AccuracyReport::default(),
        error: None,
    }
}

fn failed(
    spec: &ExperimentSpec,
    job: &Job,
    truth: &SystemGraph,
    scheme: Option<TestConfig>,
    e: Error,
) -> BenchRecord {
    BenchRecord {
        error: Some(e.to_string()),
        ..blank(spec, job, truth, scheme)
    }
}

fn run_data(spec: &ExperimentSpec, job: &Job, truth: &SystemGraph) -> Vec<BenchRecord> {
    let fail_all = |e: Error| -> Vec<BenchRecord> {
        spec.schemes
            .iter()
            .map(|&s| failed(spec, job, truth, Some(s), Error::Config(e.to_string())))
            .collect()
    };
    let samples = job.samples.expect("data protocol");
    let tests = random_var(truth, DEFAULT_NOISE_STD, derive_seed(job.seed, "model", 0))
        .and_then(|model| {
            simulate(
                &model,
                system_length(samples, spec.u),
                DEFAULT_BURN_IN,
                derive_seed(job.seed, "data", 0),
            )
        })
        .and_then(|ts| subsample_series(&ts, spec.u))
        .and_then(|ts| PairTests::run(&ts));
    let tests = match tests {
        Ok(t) => t,
        Err(e) => return fail_all(e),
    };
    let true_m = undersample(truth, spec.u);
    spec.schemes
        .iter()
        .map(|&scheme| {
            let w = match tests.weigh(&scheme) {
                Ok(w) => w,
                Err(e) => return failed(spec, job, truth, Some(scheme), e),
            };
            let (d, b) = structure_confusion(&w.present_graph(), &true_m);
            let start = Instant::now();
            let result = optimize(&w, spec.search, &options(spec));
            let seconds = start.elapsed().as_secs_f64();
            BenchRecord {
                seconds,
                min_cost: Some(result.min_cost),
                solutions: result.solutions.len(),
                complete: result.complete,
                timed_out: result.timed_out,
                nodes_visited: result.nodes,
                truth_found: result
                    .solutions
                    .iter()
                    .any(|s| s.u == spec.u && &s.graph == truth),
                accuracy: AccuracyReport {
                    h_directed: d.rates(),
                    h_bidirected: b.rates(),
                    g1: mean_solution_accuracy(result.graphs(), truth).expect("same size"),
                },
                ..blank(spec, job, truth, Some(scheme))
            }
        })
        .collect()
}

fn run_job(spec: &ExperimentSpec, job: &Job) -> Vec<BenchRecord> {
    let cfg = GenConfig {
        n: job.n,
        target: job.target,
        seed: derive_seed(job.seed, "graph", 0),
    };
    let truth = match random_connected_graph(&cfg) {
        Ok(g) => g,
        // validate() rules this out; keep the record rather than panic.
        Err(e) => {
            let empty = SystemGraph::empty(job.n.clamp(1, crate::bitmatrix::MAX_NODES))
                .expect("valid size");
            return vec![failed(spec, job, &empty, None, e)];
        }
    };
    if spec.protocol.uses_data() {
        run_data(spec, job, &truth)
    } else {
        vec![run_exact(spec, job, &truth)]
    }
}

fn worker_count(spec: &ExperimentSpec) -> usize {
    spec.workers
        .or_else(|| std::env::var(WORKERS_ENV).ok()?.trim().parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

/// Every instance of the protocol, in grid order regardless of which worker
/// finished first. Per-instance failures and timeouts are recorded.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<BenchRecord>> {
    spec.validate()?;
    let jobs = spec.jobs();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(spec))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let nested: Vec<Vec<BenchRecord>> =
        pool.install(|| jobs.par_iter().map(|job| run_job(spec, job)).collect());
    Ok(nested.into_iter().flatten().collect())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn target_fields(t: EdgeTarget) -> (&'static str, f64) {
    match t {
        EdgeTarget::Density(d) => ("density", d),
        EdgeTarget::AvgDegree(k) => ("degree", k),
    }
}

fn scheme_fields(s: Option<TestConfig>) -> (String, String) {
    match s {
        Some(s) => (s.scheme_name().to_string(), s.parameter().to_string()),
        None => (String::new(), String::new()),
    }
}

pub const RECORD_HEADER: &str =
    "protocol,instance,n,u,target_kind,target,edges,samples,scheme,param,\
min_cost,solutions,complete,timed_out,search_nodes,truth_found,\
h_dir_tpr,h_dir_fpr,h_bi_tpr,h_bi_fpr,g1_tpr,g1_fpr,error";

/// Deterministic columns only; see [`write_timings_csv`] for wall-clock.
pub fn write_records_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for r in records {
        let (kind, target) = target_fields(r.target);
        let (scheme, param) = scheme_fields(r.scheme);
        let a = &r.accuracy;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.protocol.name(),
            r.instance,
            r.n,
            r.u,
            kind,
            target,
            r.edges,
            r.samples.map(|s| s.to_string()).unwrap_or_default(),
            scheme,
            param,
            opt(r.min_cost),
            r.solutions,
            r.complete,
            r.timed_out,
            r.nodes_visited,
            r.truth_found,
            opt(a.h_directed.tpr),
            opt(a.h_directed.fpr),
            opt(a.h_bidirected.tpr),
            opt(a.h_bidirected.fpr),
            opt(a.g1.tpr),
            opt(a.g1.fpr),
            r.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
        )
        .unwrap();
    }
    out
}

pub const TIMING_HEADER: &str = "protocol,instance,n,target,samples,scheme,param,seconds";

pub fn write_timings_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(TIMING_HEADER);
    out.push('\n');
    for r in records {
        let (_, target) = target_fields(r.target);
        let (scheme, param) = scheme_fields(r.scheme);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6}",
            r.protocol.name(),
            r.instance,
            r.n,
            target,
            r.samples.map(|s| s.to_string()).unwrap_or_default(),
            scheme,
            param,
            r.seconds
        )
        .unwrap();
    }
    out
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let k = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[k]
    } else {
        (values[k - 1] + values[k]) / 2.0
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub target: EdgeTarget,
    pub samples: Option<usize>,
    pub scheme: Option<TestConfig>,
    pub instances: usize,
    pub completed: usize,
    pub failed: usize,
    pub median_seconds: Option<f64>,
    pub max_seconds: Option<f64>,
    /// Means over completed instances only.
    pub accuracy: AccuracyReport,
}

/// One row per grid point, in first-appearance order.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    type Key = (usize, u64, Option<usize>, Option<(&'static str, u64)>);
    let key = |r: &BenchRecord| -> Key {
        let (_, t) = target_fields(r.target);
        (
            r.n,
            t.to_bits(),
            r.samples,
            r.scheme.map(|s| (s.scheme_name(), s.parameter().to_bits())),
        )
    };
    let mut order: Vec<Key> = Vec::new();
    let mut groups: BTreeMap<Key, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        let k = key(r);
        if !groups.contains_key(&k) {
            order.push(k);
        }
        groups.entry(k).or_default().push(r);
    }
    order
        .into_iter()
        .map(|k| {
            let rs = &groups[&k];
            let done: Vec<&&BenchRecord> = rs
                .iter()
                .filter(|r| r.complete && r.error.is_none())
                .collect();
            let mut secs: Vec<f64> = rs
                .iter()
                .filter(|r| r.error.is_none())
                .map(|r| r.seconds)
                .collect();
            let mean_of = |f: fn(&AccuracyReport) -> Rates| {
                Rates::mean(
                    done.iter()
                        .map(|r| f(&r.accuracy))
                        .collect::<Vec<_>>()
                        .iter(),
                )
            };
            SummaryRow {
                n: rs[0].n,
                target: rs[0].target,
                samples: rs[0].samples,
                scheme: rs[0].scheme,
                instances: rs.len(),
                completed: done.len(),
                failed: rs.iter().filter(|r| r.error.is_some()).count(),
                max_seconds: secs.iter().copied().reduce(f64::max),
                median_seconds: median(&mut secs),
                accuracy: AccuracyReport {
                    h_directed: mean_of(|a| a.h_directed),
                    h_bidirected: mean_of(|a| a.h_bidirected),
                    g1: mean_of(|a| a.g1),
                },
            }
        })
        .collect()
}

pub const SUMMARY_HEADER: &str = "n,target,samples,scheme,param,instances,completed,failed,\
median_seconds,max_seconds,h_dir_tpr,h_dir_fpr,h_bi_tpr,h_bi_fpr,g1_tpr,g1_fpr";

pub fn write_summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for s in rows {
        let (_, target) = target_fields(s.target);
        let (scheme, param) = scheme_fields(s.scheme);
        let a = &s.accuracy;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.n,
            target,
            s.samples.map(|v| v.to_string()).unwrap_or_default(),
            scheme,
            param,
            s.instances,
            s.completed,
            s.failed,
            opt(s.median_seconds),
            opt(s.max_seconds),
            opt(a.h_directed.tpr),
            opt(a.h_directed.fpr),
            opt(a.h_bidirected.tpr),
            opt(a.h_bidirected.fpr),
            opt(a.g1.tpr),
            opt(a.g1.fpr),
        )
        .unwrap();
    }
    out
}
