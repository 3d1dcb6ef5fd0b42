//! Ground-truth graphs, linear Gaussian VAR(1) models and their data.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::SystemGraph;
use crate::rng;
use crate::series::TimeSeries;

pub const COEFFICIENT_RANGE: (f64, f64) = (0.2, 0.8);
/// Models at or above this spectral radius are rescaled down to it.
pub const MAX_SPECTRAL_RADIUS: f64 = 0.95;
pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_NOISE_STD: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeTarget {
    /// Fraction of all `n^2` ordered pairs, self-loops included.
    Density(f64),
    /// Edges per node.
    AvgDegree(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub target: EdgeTarget,
    pub seed: u64,
}

impl GenConfig {
    /// Edge count the generated graph will have.
    pub fn edge_count(&self) -> Result<usize> {
        let n = self.n;
        let raw = match self.target {
            EdgeTarget::Density(d) if d > 0.0 && d <= 1.0 => d * (n * n) as f64,
            EdgeTarget::AvgDegree(k) if k > 0.0 && k.is_finite() => k * n as f64,
            other => return Err(Error::Config(format!("invalid edge target {other:?}"))),
        };
        let edges = raw.round() as usize;
        if edges < n || edges > n * n {
            return Err(Error::Config(format!(
                "{edges} edges cannot hold a {n}-cycle within {} pairs",
                n * n
            )));
        }
        Ok(edges)
    }
}

/// A cycle through all nodes in random order plus uniformly chosen extra
/// edges (self-loops allowed) up to the target count.
pub fn random_connected_graph(cfg: &GenConfig) -> Result<SystemGraph> {
    let n = cfg.n;
    let mut g = SystemGraph::empty(n)?;
    let edges = cfg.edge_count()?;
    let mut rng = rng::stream(cfg.seed, "graph", 0);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    for k in 0..n {
        g.add_edge(order[k], order[(k + 1) % n])?;
    }
    let mut rest: Vec<(usize, usize)> = (0..n * n)
        .map(|k| (k / n, k % n))
        .filter(|&(i, j)| !g.has_edge(i, j))
        .collect();
    rest.shuffle(&mut rng);
    for &(i, j) in rest.iter().take(edges - n) {
        g.add_edge(i, j)?;
    }
    Ok(g)
}

/// Linear Gaussian VAR(1): `V_j^t = sum_i coef(i, j) V_i^{t-1} + e_j^t`.
#[derive(Clone, Debug, PartialEq)]
pub struct VarModel {
    pub graph: SystemGraph,
    /// Row-major `n x n`; entry `i * n + j` is the weight of `i -> j`.
    pub coefficients: Vec<f64>,
    pub noise_std: Vec<f64>,
    /// Factor applied to the sampled coefficients for stability (1 if none).
    pub scale: f64,
}

impl VarModel {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.coefficients[i * self.n() + j]
    }

    /// Coefficient before stability rescaling.
    pub fn sampled_coefficient(&self, i: usize, j: usize) -> f64 {
        self.coefficient(i, j) / self.scale
    }

    /// Transition matrix `M` with `V^t = M V^{t-1} + e`, i.e. `M[j][i] = coef(i, j)`.
    pub fn transition(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |j, i| self.coefficient(i, j))
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.transition())
    }

    /// Model with explicitly given coefficients on the edges of `graph`.
    pub fn with_coefficients(
        graph: SystemGraph,
        coefficients: impl IntoIterator<Item = ((usize, usize), f64)>,
        noise_std: f64,
    ) -> Result<Self> {
        let n = graph.n();
        let mut coef = vec![0.0; n * n];
        for ((i, j), c) in coefficients {
            if !graph.has_edge(i, j) {
                return Err(Error::Config(format!("coefficient on non-edge ({i}, {j})")));
            }
            coef[i * n + j] = c;
        }
        check_noise(noise_std)?;
        Ok(VarModel {
            graph,
            coefficients: coef,
            noise_std: vec![noise_std; n],
            scale: 1.0,
        })
    }
}

fn check_noise(noise_std: f64) -> Result<()> {
    if noise_std > 0.0 && noise_std.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "noise_std must be positive, got {noise_std}"
        )))
    }
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Coefficients uniform on `[-0.8, -0.2] U [0.2, 0.8]` on every edge,
/// rescaled to spectral radius 0.95 when at or above it.
pub fn random_var(g: &SystemGraph, noise_std: f64, seed: u64) -> Result<VarModel> {
    check_noise(noise_std)?;
    let n = g.n();
    let mut rng = rng::stream(seed, "coefficients", 0);
    let (lo, hi) = COEFFICIENT_RANGE;
    let mut coefficients = vec![0.0; n * n];
    for (i, j) in g.edges() {
        let magnitude = rng.random_range(lo..=hi);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        coefficients[i * n + j] = sign * magnitude;
    }
    let mut model = VarModel {
        graph: g.clone(),
        coefficients,
        noise_std: vec![noise_std; n],
        scale: 1.0,
    };
    let rho = model.spectral_radius();
    if rho >= MAX_SPECTRAL_RADIUS {
        let scale = MAX_SPECTRAL_RADIUS / rho;
        model.coefficients.iter_mut().for_each(|c| *c *= scale);
        model.scale = scale;
    }
    Ok(model)
}

/// `n_samples` consecutive system-timescale states after discarding
/// `burn_in` steps from a zero start.
pub fn simulate(m: &VarModel, n_samples: usize, burn_in: usize, seed: u64) -> Result<TimeSeries> {
    let n = m.n();
    let mut rng = rng::stream(seed, "innovations", 0);
    let noise: Vec<Normal<f64>> = m
        .noise_std
        .iter()
        .map(|&s| Normal::new(0.0, s).map_err(|e| Error::Config(e.to_string())))
        .collect::<Result<_>>()?;
    let parents: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| m.graph.has_edge(i, j))
                .map(|i| (i, m.coefficient(i, j)))
                .collect()
        })
        .collect();
    let mut state = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut data = Vec::with_capacity(n_samples * n);
    for step in 0..burn_in + n_samples {
        for j in 0..n {
            let drift: f64 = parents[j].iter().map(|&(i, c)| c * state[i]).sum();
            next[j] = drift + noise[j].sample(&mut rng);
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Simulation { step });
        }
        std::mem::swap(&mut state, &mut next);
        if step >= burn_in {
            data.extend_from_slice(&state);
        }
    }
    TimeSeries::from_rows(n, data)
}

/// Keeps rows `0, u, 2u, ...`.
pub fn subsample_series(ts: &TimeSeries, u: usize) -> Result<TimeSeries> {
    if u == 0 {
        return Err(Error::InvalidRate("u must be at least 1".into()));
    }
    let data = ts.rows().step_by(u).flatten().copied().collect();
    TimeSeries::from_rows(ts.n_vars(), data)
}

/// System-timescale length whose `u`-subsample has `measurements` rows.
pub fn system_length(measurements: usize, u: usize) -> usize {
    (measurements.max(1) - 1) * u + 1
}
