//! Weighted measurement structures from subsampled time series.
//!
//! Both edge kinds are decided by a conditional-independence test on the
//! lagged sample pairs `(V^{t-1}, V^t)`:
//!
//! * `X -> Y` is tested by `X^{t-1} _||_ Y^t | V^{t-1} \ X^{t-1}`,
//! * `X <-> Y` by `X^t _||_ Y^t | V^{t-1}`.
//!
//! Each test reports a Fisher-z p-value of the partial correlation and a
//! Bayesian score gap: the log marginal-likelihood ratio of a linear
//! regression with and without the tested dependence, under a
//! unit-information g-prior on the tested coefficient and a Jeffreys prior
//! on the noise variance. The conditioning variables are projected out
//! first (flat prior on their coefficients), so the gap depends on the data
//! only through the partial correlation `r` and the residual degrees of
//! freedom `nu`:
//!
//! ```text
//! gap = (nu - 1)/2 * ln(1 + g) - nu/2 * ln(1 + g (1 - r^2)),   g = nu
//! ```
//!
//! which is symmetric in the two tested variables.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::optimal::{Statement, WeightedMeasurement};
use crate::series::TimeSeries;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestConfig {
    /// Present iff `p < alpha`; every weight is 1.
    Uniform { alpha: f64 },
    /// Present iff the posterior log-odds of dependence is positive; the
    /// weight is its magnitude.
    PseudoBoolean { prior_independence: f64 },
}

impl TestConfig {
    pub fn uniform(alpha: f64) -> Result<Self> {
        check_open_unit(alpha, "alpha")?;
        Ok(TestConfig::Uniform { alpha })
    }

    pub fn pseudo_boolean(prior_independence: f64) -> Result<Self> {
        check_open_unit(prior_independence, "prior_independence")?;
        Ok(TestConfig::PseudoBoolean { prior_independence })
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            TestConfig::Uniform { alpha } => alpha,
            TestConfig::PseudoBoolean { prior_independence } => prior_independence,
        }
    }

    /// `"uniform"` or `"pb"`.
    pub fn scheme_name(&self) -> &'static str {
        match self {
            TestConfig::Uniform { .. } => "uniform",
            TestConfig::PseudoBoolean { .. } => "pb",
        }
    }

    pub fn from_name(scheme: &str, parameter: f64) -> Result<Self> {
        match scheme {
            "uniform" => Self::uniform(parameter),
            "pb" | "pseudo-boolean" => Self::pseudo_boolean(parameter),
            other => Err(Error::Config(format!("unknown weighting scheme {other:?}"))),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TestConfig::Uniform { alpha } => check_open_unit(alpha, "alpha"),
            TestConfig::PseudoBoolean { prior_independence } => {
                check_open_unit(prior_independence, "prior_independence")
            }
        }
    }
}

fn check_open_unit(v: f64, name: &str) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must lie strictly inside (0, 1), got {v}"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub p_value: f64,
    /// Log marginal likelihood of the dependent model minus that of the
    /// independent one.
    pub score_gap: f64,
    pub partial_correlation: f64,
}

/// Covariance of the stacked lagged vector `(V^{t-1}, V^t)`. Index `v` is
/// `V_v^{t-1}` and `n + v` is `V_v^t`.
#[derive(Clone, Debug)]
pub struct LaggedCovariance {
    n: usize,
    pairs: usize,
    cov: DMatrix<f64>,
}

impl LaggedCovariance {
    pub fn new(ts: &TimeSeries) -> Result<Self> {
        let n = ts.n_vars();
        let len = ts.len();
        if len < n + 3 {
            return Err(Error::Estimation {
                vars: (0..n).collect(),
                reason: format!("{len} samples is below the minimum of n + 3 = {}", n + 3),
            });
        }
        for v in 0..n {
            let col = ts.column(v);
            let mean = col.iter().sum::<f64>() / len as f64;
            let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / len as f64;
            if var <= (mean.abs() * 1e-12).powi(2) || var == 0.0 {
                return Err(Error::Estimation {
                    vars: vec![v],
                    reason: "constant column".into(),
                });
            }
        }
        let pairs = len - 1;
        let dim = 2 * n;
        let mut mean = vec![0.0; dim];
        for t in 1..len {
            let (prev, cur) = (ts.row(t - 1), ts.row(t));
            for v in 0..n {
                mean[v] += prev[v];
                mean[n + v] += cur[v];
            }
        }
        mean.iter_mut().for_each(|m| *m /= pairs as f64);
        let mut cov = DMatrix::<f64>::zeros(dim, dim);
        let mut z = vec![0.0; dim];
        for t in 1..len {
            let (prev, cur) = (ts.row(t - 1), ts.row(t));
            for v in 0..n {
                z[v] = prev[v] - mean[v];
                z[n + v] = cur[v] - mean[n + v];
            }
            for a in 0..dim {
                for b in a..dim {
                    cov[(a, b)] += z[a] * z[b];
                }
            }
        }
        for a in 0..dim {
            for b in a..dim {
                let v = cov[(a, b)] / pairs as f64;
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
        }
        Ok(LaggedCovariance { n, pairs, cov })
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    /// Lagged sample pairs used.
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// Partial correlation of stacked indices `a` and `b` given `cond`.
    fn partial_correlation(&self, a: usize, b: usize, cond: &[usize]) -> Result<f64> {
        let name = |k: usize| k % self.n;
        let k = cond.len();
        let (mut saa, mut sbb, mut sab) = (self.cov[(a, a)], self.cov[(b, b)], self.cov[(a, b)]);
        if k > 0 {
            let s = DMatrix::from_fn(k, k, |r, c| self.cov[(cond[r], cond[c])]);
            let singular = || Error::Estimation {
                vars: cond.iter().map(|&c| name(c)).collect(),
                reason: "singular conditioning covariance".into(),
            };
            let diag: Vec<f64> = (0..k).map(|r| s[(r, r)]).collect();
            let chol = s.cholesky().ok_or_else(singular)?;
            let l = chol.l_dirty();
            if (0..k).any(|r| !(l[(r, r)].powi(2) > diag[r] * 1e-10)) {
                return Err(singular());
            }
            let ca = DVector::from_fn(k, |r, _| self.cov[(cond[r], a)]);
            let cb = DVector::from_fn(k, |r, _| self.cov[(cond[r], b)]);
            let xa = chol.solve(&ca);
            let xb = chol.solve(&cb);
            saa -= ca.dot(&xa);
            sbb -= cb.dot(&xb);
            sab -= ca.dot(&xb);
        }
        for (v, raw, resid) in [(a, self.cov[(a, a)], saa), (b, self.cov[(b, b)], sbb)] {
            if !(resid > raw * 1e-12) {
                return Err(Error::Estimation {
                    vars: vec![name(v)],
                    reason: "tested variable is determined by the conditioning set".into(),
                });
            }
        }
        Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
    }

    fn statistics(&self, a: usize, b: usize, cond: &[usize]) -> Result<TestResult> {
        let r = self.partial_correlation(a, b, cond)?;
        let k = cond.len() as f64;
        let m = self.pairs as f64;
        let fisher_dof = m - k - 3.0;
        let nu = m - k - 1.0;
        if fisher_dof <= 0.0 || nu < 2.0 {
            return Err(Error::Estimation {
                vars: vec![a % self.n, b % self.n],
                reason: format!(
                    "{} lagged pairs leave no residual degrees of freedom",
                    self.pairs
                ),
            });
        }
        let p_value = if r.abs() >= 1.0 {
            0.0
        } else {
            let z = r.atanh() * fisher_dof.sqrt();
            erfc(z.abs() / std::f64::consts::SQRT_2)
        };
        Ok(TestResult {
            p_value,
            score_gap: score_gap(r, nu),
            partial_correlation: r,
        })
    }

    /// `X^{t-1} _||_ Y^t | V^{t-1} \ X^{t-1}`.
    pub fn test_directed(&self, x: usize, y: usize) -> Result<TestResult> {
        self.check(x)?;
        self.check(y)?;
        let cond: Vec<usize> = (0..self.n).filter(|&v| v != x).collect();
        self.statistics(x, self.n + y, &cond)
    }

    /// `X^t _||_ Y^t | V^{t-1}`.
    pub fn test_bidirected(&self, x: usize, y: usize) -> Result<TestResult> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Err(Error::SelfBidirected(x));
        }
        let (x, y) = (x.min(y), x.max(y));
        let cond: Vec<usize> = (0..self.n).collect();
        self.statistics(self.n + x, self.n + y, &cond)
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::NodeIndex {
                index: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }
}

/// Log Bayes factor of dependence for partial correlation `r` with `nu`
/// residual degrees of freedom, unit-information g-prior.
pub fn score_gap(r: f64, nu: f64) -> f64 {
    let g = nu;
    0.5 * (nu - 1.0) * g.ln_1p() - 0.5 * nu * (g * (1.0 - r * r)).ln_1p()
}

pub fn test_directed(x: usize, y: usize, ts: &TimeSeries) -> Result<TestResult> {
    LaggedCovariance::new(ts)?.test_directed(x, y)
}

pub fn test_bidirected(x: usize, y: usize, ts: &TimeSeries) -> Result<TestResult> {
    LaggedCovariance::new(ts)?.test_bidirected(x, y)
}

/// Statement and weight for one test under `cfg`.
pub fn weigh(result: &TestResult, cfg: &TestConfig) -> Statement {
    match *cfg {
        TestConfig::Uniform { alpha } => Statement {
            present: result.p_value < alpha,
            weight: 1.0,
        },
        TestConfig::PseudoBoolean { prior_independence } => {
            let log_odds =
                result.score_gap + ((1.0 - prior_independence) / prior_independence).ln();
            Statement {
                present: log_odds > 0.0,
                weight: log_odds.abs(),
            }
        }
    }
}

/// Raw test results for every ordered pair and every pair `i < j`, in the
/// row-major order of [`WeightedMeasurement`]'s statement iterators.
#[derive(Clone, Debug)]
pub struct PairTests {
    pub n: usize,
    pub directed: Vec<TestResult>,
    pub bidirected: Vec<((usize, usize), TestResult)>,
}

impl PairTests {
    pub fn run(ts: &TimeSeries) -> Result<Self> {
        let cov = LaggedCovariance::new(ts)?;
        let n = cov.n_vars();
        let directed = (0..n * n)
            .into_par_iter()
            .map(|k| cov.test_directed(k / n, k % n))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let bidirected = pairs
            .into_par_iter()
            .map(|(i, j)| cov.test_bidirected(i, j).map(|r| ((i, j), r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PairTests {
            n,
            directed,
            bidirected,
        })
    }

    pub fn weigh(&self, cfg: &TestConfig) -> Result<WeightedMeasurement> {
        cfg.validate()?;
        let n = self.n;
        let mut w = WeightedMeasurement::new(n)?;
        for (k, r) in self.directed.iter().enumerate() {
            w.set_directed(k / n, k % n, weigh(r, cfg))?;
        }
        for &((i, j), ref r) in &self.bidirected {
            w.set_bidirected(i, j, weigh(r, cfg))?;
        }
        Ok(w)
    }
}

/// Tests every pair and weighs the outcomes under `cfg`.
pub fn estimate_structure(ts: &TimeSeries, cfg: &TestConfig) -> Result<WeightedMeasurement> {
    cfg.validate()?;
    PairTests::run(ts)?.weigh(cfg)
}
