use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use subsample_core::bench::{self, ExperimentSpec, Protocol};
use subsample_core::encoding::{emit_encoding, emit_weighted_encoding};
use subsample_core::estimate::{estimate_structure, TestConfig};
use subsample_core::format;
use subsample_core::rng::derive_seed;
use subsample_core::simulate::{
    random_connected_graph, random_var, simulate, subsample_series, system_length, EdgeTarget,
    GenConfig, DEFAULT_BURN_IN, DEFAULT_NOISE_STD,
};
use subsample_core::{
    count_solutions, optimize, solve, undersample, SearchOptions, TimeSeries, USpec,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "subsample",
    version,
    about = "Recover system-timescale causal graphs from subsampled measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random connected system graph, optionally with simulated data.
    Gen(GenArgs),
    /// Measurement graph of a system graph, or row decimation of a series.
    Subsample(SubsampleArgs),
    /// Every system graph consistent with a measurement structure.
    Solve(SolveArgs),
    /// Weighted measurement structure from a CSV time series.
    Estimate(EstimateArgs),
    /// Minimum-conflict system graphs for a weighted structure.
    Optimize(OptimizeArgs),
    /// Answer-set program for an external solver.
    Encode(EncodeArgs),
    /// Run an evaluation protocol.
    Bench(BenchArgs),
}

#[derive(Args)]
struct RateArgs {
    /// Search a single subsampling rate.
    #[arg(long, conflicts_with = "u_range")]
    u: Option<usize>,
    /// Search every rate in an inclusive range.
    #[arg(long, value_name = "LO:HI")]
    u_range: Option<String>,
}

impl RateArgs {
    fn uspec(&self) -> Result<USpec> {
        match (self.u, &self.u_range) {
            (Some(u), _) => USpec::fixed(u),
            (None, Some(r)) => r.parse::<USpec>(),
            (None, None) => Ok(USpec::default()),
        }
        .map_err(|e| usage(e.to_string()))
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Largest number of solutions to list; 0 lists all.
    #[arg(long, default_value_t = 1000)]
    max_solutions: usize,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

impl SearchArgs {
    fn options(&self) -> Result<SearchOptions> {
        let mut opts = SearchOptions::unlimited();
        if self.max_solutions > 0 {
            opts = opts.max_solutions(self.max_solutions);
        }
        if let Some(t) = self.timeout {
            opts = opts.timeout(seconds(t)?);
        }
        Ok(opts)
    }
}

fn seconds(t: f64) -> Result<Duration> {
    if !(t.is_finite() && t > 0.0) {
        return Err(usage(format!(
            "timeout must be a positive number of seconds, got {t}"
        )));
    }
    Ok(Duration::from_secs_f64(t))
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    /// Fraction of the n^2 ordered pairs, self-loops included.
    #[arg(long, conflicts_with = "degree", required_unless_present = "degree")]
    density: Option<f64>,
    /// Average number of edges per node.
    #[arg(long)]
    degree: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the graph.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also simulate this many measurement-timescale rows.
    #[arg(long, requires = "data")]
    samples: Option<usize>,
    /// Subsampling rate of the simulated data.
    #[arg(long, default_value_t = 1)]
    u: usize,
    /// Where to write the simulated CSV.
    #[arg(long, requires = "samples")]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NOISE_STD)]
    noise_std: f64,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: usize,
}

#[derive(Args)]
struct SubsampleArgs {
    /// A system graph, or a CSV series with --series.
    input: PathBuf,
    #[arg(long)]
    u: usize,
    /// Treat the input as a CSV time series (implied by a .csv extension).
    #[arg(long)]
    series: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Measurement structure; unlisted pairs are unknown.
    input: PathBuf,
    #[command(flatten)]
    rates: RateArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Print only the number of consistent graphs.
    #[arg(long)]
    count: bool,
    /// Treat unmentioned pairs as absent rather than unknown.
    #[arg(long)]
    closed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// CSV time series, one row per measurement.
    input: PathBuf,
    /// `uniform` (p-value threshold) or `pb` (prior probability of independence).
    #[arg(long, default_value = "pb")]
    scheme: String,
    /// Scheme parameter; 0.05 for uniform and 0.4 for pb when omitted.
    #[arg(long)]
    param: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Weighted measurement structure.
    input: PathBuf,
    #[command(flatten)]
    rates: RateArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Measurement structure, or a weighted one with --weighted.
    input: PathBuf,
    #[command(flatten)]
    rates: RateArgs,
    #[arg(long)]
    weighted: bool,
    /// Treat unmentioned pairs as absent rather than unknown.
    #[arg(long, conflicts_with = "weighted")]
    closed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// fig2-density, fig2-nodes, fig3-density, fig3-urange, fig4-accuracy or fig5-runtime.
    protocol: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances per grid point.
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    nodes: Vec<usize>,
    #[arg(long, value_delimiter = ',', conflicts_with = "degree")]
    density: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    degree: Vec<f64>,
    /// Measurement-timescale sample sizes.
    #[arg(long, value_delimiter = ',')]
    samples: Vec<usize>,
    /// Weighting scheme for every parameter in --param.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, value_delimiter = ',', requires = "scheme")]
    param: Vec<f64>,
    /// True subsampling rate; also the searched rate unless --u-range is given.
    #[arg(long)]
    u: Option<usize>,
    #[arg(long, value_name = "LO:HI")]
    u_range: Option<String>,
    /// 0 lists all solutions.
    #[arg(long)]
    max_solutions: Option<usize>,
    /// Per-instance timeout in seconds; 0 disables it.
    #[arg(long)]
    timeout: Option<f64>,
    /// Worker threads; defaults to SUBSAMPLE_WORKERS, then every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for records.csv, timings.csv and summary.csv. Records go to
    /// stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(a: &GenArgs) -> Result<u8> {
    let target = match (a.density, a.degree) {
        (Some(d), _) => EdgeTarget::Density(d),
        (None, Some(k)) => EdgeTarget::AvgDegree(k),
        (None, None) => return Err(usage("one of --density or --degree is required")),
    };
    let cfg = GenConfig {
        n: a.nodes,
        target,
        seed: derive_seed(a.seed, "graph", 0),
    };
    let g = random_connected_graph(&cfg)?;
    emit(a.out.as_deref(), &format::write_system_graph(&g))?;
    if let (Some(samples), Some(path)) = (a.samples, &a.data) {
        if a.u == 0 {
            return Err(usage("--u must be at least 1"));
        }
        let model = random_var(&g, a.noise_std, derive_seed(a.seed, "model", 0))?;
        let ts = simulate(
            &model,
            system_length(samples, a.u),
            a.burn_in,
            derive_seed(a.seed, "data", 0),
        )?;
        let ts = subsample_series(&ts, a.u)?;
        emit(Some(path), &ts.to_csv())?;
    }
    Ok(0)
}

fn subsample_cmd(a: &SubsampleArgs) -> Result<u8> {
    if a.u == 0 {
        return Err(usage("--u must be at least 1"));
    }
    let text = read(&a.input)?;
    let is_series = a.series || a.input.extension().is_some_and(|e| e == "csv");
    let out = if is_series {
        subsample_series(&TimeSeries::from_csv(&text)?, a.u)?.to_csv()
    } else {
        format::write_measurement_graph(&undersample(&format::parse_system_graph(&text)?, a.u))
    };
    emit(a.out.as_deref(), &out)?;
    Ok(0)
}

fn solve_cmd(a: &SolveArgs) -> Result<u8> {
    let mut h = format::parse_estimated_structure(&read(&a.input)?)?;
    if a.closed {
        h.close_unknowns();
    }
    let uspec = a.rates.uspec()?;
    if a.count {
        emit(
            a.out.as_deref(),
            &format!("{}\n", count_solutions(&h, uspec)?),
        )?;
        return Ok(0);
    }
    let set = solve(&h, uspec, &a.search.options()?);
    emit(a.out.as_deref(), &format::write_solutions(&set))?;
    eprintln!(
        "{} solution(s){}",
        set.len(),
        if set.complete { "" } else { ", not exhaustive" }
    );
    Ok(if set.timed_out { EXIT_TIMEOUT } else { 0 })
}

fn estimate_cmd(a: &EstimateArgs) -> Result<u8> {
    let param = a
        .param
        .unwrap_or(if a.scheme == "uniform" { 0.05 } else { 0.4 });
    let cfg = TestConfig::from_name(&a.scheme, param).map_err(|e| usage(e.to_string()))?;
    let ts = TimeSeries::from_csv(&read(&a.input)?)?;
    let w = estimate_structure(&ts, &cfg)?;
    emit(a.out.as_deref(), &format::write_weighted(&w))?;
    Ok(0)
}

fn optimize_cmd(a: &OptimizeArgs) -> Result<u8> {
    let w = format::parse_weighted(&read(&a.input)?)?;
    let result = optimize(&w, a.rates.uspec()?, &a.search.options()?);
    emit(a.out.as_deref(), &format::write_optimal(&result))?;
    eprintln!(
        "min cost {} with {} solution(s){}",
        result.min_cost,
        result.solutions.len(),
        if result.complete {
            ""
        } else {
            ", not exhaustive"
        }
    );
    Ok(if result.timed_out { EXIT_TIMEOUT } else { 0 })
}

fn encode_cmd(a: &EncodeArgs) -> Result<u8> {
    let text = read(&a.input)?;
    let uspec = a.rates.uspec()?;
    let program = if a.weighted {
        emit_weighted_encoding(&format::parse_weighted(&text)?, uspec)
    } else {
        let mut h = format::parse_estimated_structure(&text)?;
        if a.closed {
            h.close_unknowns();
        }
        emit_encoding(&h, uspec)
    };
    emit(a.out.as_deref(), &program)?;
    Ok(0)
}

fn bench_spec(a: &BenchArgs) -> Result<ExperimentSpec> {
    let protocol: Protocol = a
        .protocol
        .parse()
        .map_err(|e: subsample_core::Error| usage(e.to_string()))?;
    let mut spec = ExperimentSpec::canned(protocol, a.seed);
    if let Some(i) = a.instances {
        spec.instances = i;
    }
    if !a.nodes.is_empty() {
        spec.nodes = a.nodes.clone();
    }
    if !a.density.is_empty() {
        spec.targets = a.density.iter().map(|&d| EdgeTarget::Density(d)).collect();
    }
    if !a.degree.is_empty() {
        spec.targets = a.degree.iter().map(|&k| EdgeTarget::AvgDegree(k)).collect();
    }
    if !a.samples.is_empty() {
        spec.samples = a.samples.clone();
    }
    if let Some(scheme) = &a.scheme {
        let params = if a.param.is_empty() {
            vec![if scheme == "uniform" { 0.05 } else { 0.4 }]
        } else {
            a.param.clone()
        };
        spec.schemes = params
            .into_iter()
            .map(|p| TestConfig::from_name(scheme, p))
            .collect::<subsample_core::Result<_>>()
            .map_err(|e| usage(e.to_string()))?;
    }
    if let Some(u) = a.u {
        spec.u = u;
        spec.search = USpec::fixed(u).map_err(|e| usage(e.to_string()))?;
    }
    if let Some(r) = &a.u_range {
        spec.search = r
            .parse()
            .map_err(|e: subsample_core::Error| usage(e.to_string()))?;
    }
    if let Some(m) = a.max_solutions {
        spec.max_solutions = (m > 0).then_some(m);
    }
    if let Some(t) = a.timeout {
        spec.timeout = if t == 0.0 { None } else { Some(seconds(t)?) };
    }
    if a.workers.is_some() {
        spec.workers = a.workers;
    }
    spec.validate().map_err(|e| usage(e.to_string()))?;
    Ok(spec)
}

fn bench_cmd(a: &BenchArgs) -> Result<u8> {
    let spec = bench_spec(a)?;
    let records = bench::run_experiment(&spec)?;
    let csv = bench::write_records_csv(&records);
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            emit(Some(&dir.join("records.csv")), &csv)?;
            emit(
                Some(&dir.join("timings.csv")),
                &bench::write_timings_csv(&records),
            )?;
            let summary = bench::summarize(&records);
            emit(
                Some(&dir.join("summary.csv")),
                &bench::write_summary_csv(&summary),
            )?;
        }
        None => emit(None, &csv)?,
    }
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let timed_out = records.iter().filter(|r| r.timed_out).count();
    eprintln!(
        "{} record(s), {timed_out} timed out, {failed} failed",
        records.len()
    );
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Subsample(a) => subsample_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Estimate(a) => estimate_cmd(a),
        Command::Optimize(a) => optimize_cmd(a),
        Command::Encode(a) => encode_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() {
                EXIT_USAGE
            } else {
                EXIT_DATA
            })
        }
    }
}
