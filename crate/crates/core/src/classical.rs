//! Classical Fisher information, the Cramer-Rao bound, and seeded Monte-Carlo
//! maximum-likelihood experiments on the Gaussian location model.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Normalization slack accepted for probability vectors.
const NORM_TOL: f64 = 1e-12;

/// Probability distribution on a finite outcome space.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::invalid("probabilities must be non-negative"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "probabilities must sum to 1 within {NORM_TOL:.0e}, got {sum}"
            )));
        }
        Ok(DiscreteDistribution { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Location model x_i = theta + Gaussian noise of known standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLocationModel {
    pub theta: f64,
    pub sigma: f64,
}

impl GaussianLocationModel {
    pub fn new(theta: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::invalid("noise standard deviation must be > 0"));
        }
        Ok(GaussianLocationModel { theta, sigma })
    }
}

/// Symmetric positive-semidefinite Fisher information matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    m: DMatrix<f64>,
}

impl FisherMatrix {
    fn new(m: DMatrix<f64>) -> Result<Self> {
        let eigs = m.clone().symmetric_eigenvalues();
        if eigs.iter().any(|&e| e < -1e-10) {
            return Err(Error::numerical(format!(
                "Fisher matrix not positive semidefinite (min eigenvalue {:.3e})",
                eigs.min()
            )));
        }
        Ok(FisherMatrix { m })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }
}

/// Scalar Fisher information estimate plus the outcomes dropped by the
/// positive-support restriction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherEstimate {
    pub value: f64,
    pub excluded_outcomes: usize,
}

/// I = sum_{p > 0} p (d ln p / d theta)^2 with Richardson-refined central
/// differences of ln p. Outcomes with p(theta) = 0, or with vanishing
/// probability at a stencil point, are excluded and counted.
pub fn fisher_scalar_discrete<F>(family: F, theta: f64, h: f64) -> Result<FisherEstimate>
where
    F: Fn(f64) -> DiscreteDistribution,
{
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be > 0"));
    }
    let p0 = family(theta);
    let stencil = [
        family(theta + h),
        family(theta - h),
        family(theta + 0.5 * h),
        family(theta - 0.5 * h),
    ];
    if stencil.iter().any(|d| d.len() != p0.len()) {
        return Err(Error::invalid("family changed outcome-space size"));
    }
    let mut value = 0.0;
    let mut excluded = 0;
    for k in 0..p0.len() {
        let p = p0.probs()[k];
        let pts: Vec<f64> = stencil.iter().map(|d| d.probs()[k]).collect();
        if p <= 0.0 || pts.iter().any(|&q| q <= 0.0) {
            if p > 0.0 || pts.iter().any(|&q| q > 0.0) {
                excluded += 1;
            }
            continue;
        }
        let d_h = (pts[0].ln() - pts[1].ln()) / (2.0 * h);
        let d_h2 = (pts[2].ln() - pts[3].ln()) / h;
        let dlnp = (4.0 * d_h2 - d_h) / 3.0;
        value += p * dlnp * dlnp;
    }
    Ok(FisherEstimate {
        value,
        excluded_outcomes: excluded,
    })
}

/// Fisher information matrix I_ab = sum_{p > 0} (d_a p)(d_b p) / p with
/// Richardson-refined central differences per parameter.
pub fn fisher_matrix_discrete<F>(family: F, thetas: &[f64], h: f64) -> Result<FisherMatrix>
where
    F: Fn(&[f64]) -> DiscreteDistribution,
{
    if thetas.is_empty() {
        return Err(Error::invalid("need at least one parameter"));
    }
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be > 0"));
    }
    let np = thetas.len();
    let p0 = family(thetas);
    let n_out = p0.len();

    let deriv_at = |a: usize| -> Vec<f64> {
        let shifted = |step: f64| {
            let mut t = thetas.to_vec();
            t[a] += step;
            family(&t)
        };
        let pp = shifted(h);
        let pm = shifted(-h);
        let pp2 = shifted(0.5 * h);
        let pm2 = shifted(-0.5 * h);
        (0..n_out)
            .map(|k| {
                let d_h = (pp.probs()[k] - pm.probs()[k]) / (2.0 * h);
                let d_h2 = (pp2.probs()[k] - pm2.probs()[k]) / h;
                (4.0 * d_h2 - d_h) / 3.0
            })
            .collect()
    };
    let derivs: Vec<Vec<f64>> = (0..np).map(deriv_at).collect();

    let mut m = DMatrix::zeros(np, np);
    for a in 0..np {
        for b in a..np {
            let mut acc = 0.0;
            for k in 0..n_out {
                let p = p0.probs()[k];
                if p > 0.0 {
                    acc += derivs[a][k] * derivs[b][k] / p;
                }
            }
            m[(a, b)] = acc;
            m[(b, a)] = acc;
        }
    }
    FisherMatrix::new(m)
}

/// Closed form for the Gaussian location model: I = 1 / sigma^2.
pub fn fisher_gaussian_location(model: &GaussianLocationModel) -> f64 {
    1.0 / (model.sigma * model.sigma)
}

/// Cramer-Rao lower bound on the estimator error: 1 / sqrt(N I).
pub fn crb_lower_bound(info: f64, n_copies: u64) -> Result<f64> {
    if !(info > 0.0) {
        return Err(Error::invalid("Fisher information must be > 0"));
    }
    if n_copies == 0 {
        return Err(Error::invalid("need at least one copy"));
    }
    Ok(1.0 / (n_copies as f64 * info).sqrt())
}

/// Per-block statistics of an MLE experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleBlock {
    pub block: usize,
    pub trials: usize,
    pub empirical_std: f64,
    pub ratio: f64,
}

/// Outcome of a maximum-likelihood location experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MleReport {
    pub n_samples: usize,
    pub n_trials: usize,
    pub mean_estimate: f64,
    pub empirical_std: f64,
    pub crb: f64,
    pub blocks: Vec<MleBlock>,
}

/// Trials per reported block of `mle_location_experiment`.
pub const MLE_BLOCK_TRIALS: usize = 100;

/// Repeated location estimation with the sample-mean MLE. Trials run in
/// parallel on per-trial ChaCha substreams keyed by (seed, trial index), so
/// serial and parallel runs produce identical reports.
pub fn mle_location_experiment(
    model: &GaussianLocationModel,
    n_samples: usize,
    n_trials: usize,
    seed: u64,
) -> Result<MleReport> {
    if n_samples < 1 {
        return Err(Error::invalid("need at least one sample per trial"));
    }
    if n_trials < 100 {
        return Err(Error::invalid("need at least 100 trials"));
    }
    let estimates: Vec<f64> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let mut acc = 0.0;
            for _ in 0..n_samples {
                let z: f64 = StandardNormal.sample(&mut rng);
                acc += model.theta + model.sigma * z;
            }
            acc / n_samples as f64
        })
        .collect();

    let crb = model.sigma / (n_samples as f64).sqrt();
    let std_of = |xs: &[f64]| -> f64 {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };

    let blocks = estimates
        .chunks(MLE_BLOCK_TRIALS)
        .enumerate()
        .filter(|(_, c)| c.len() >= 2)
        .map(|(b, chunk)| {
            let s = std_of(chunk);
            MleBlock {
                block: b,
                trials: chunk.len(),
                empirical_std: s,
                ratio: s / crb,
            }
        })
        .collect();

    let mean_estimate = estimates.iter().sum::<f64>() / n_trials as f64;
    let empirical_std = std_of(&estimates);
    Ok(MleReport {
        n_samples,
        n_trials,
        mean_estimate,
        empirical_std,
        crb,
        blocks,
    })
}

/// Ratios d_H^2 / delta^2 for a list of offsets, plus the linear-in-delta
/// extrapolation to delta -> 0; the limit is I/4.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub ratios: Vec<(f64, f64)>,
    pub extrapolated: f64,
}

pub fn hellinger_expansion_check<F>(
    family: F,
    theta: f64,
    deltas: &[f64],
) -> Result<ExpansionReport>
where
    F: Fn(f64) -> DiscreteDistribution,
{
    if deltas.is_empty() || deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::invalid("deltas must be positive"));
    }
    let base = family(theta);
    let mut ratios: Vec<(f64, f64)> = deltas
        .iter()
        .map(|&d| {
            let shifted = family(theta + d);
            crate::info::hellinger_distance_sq(&base, &shifted).map(|h| (d, h / (d * d)))
        })
        .collect::<Result<_>>()?;
    ratios.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite deltas"));

    let extrapolated = match ratios.as_slice() {
        [(_, r)] => *r,
        [(d1, r1), (d2, r2), ..] => (r1 * d2 - r2 * d1) / (d2 - d1),
        [] => unreachable!("deltas checked non-empty"),
    };
    Ok(ExpansionReport {
        ratios,
        extrapolated,
    })
}

/// Bin width used by `binned_gaussian`, in units of sigma.
pub const GAUSSIAN_BIN_WIDTH: f64 = 1.0 / 50.0;
/// Half-range of the binning grid, in units of sigma.
pub const GAUSSIAN_BIN_HALF_RANGE: f64 = 8.0;

/// The Gaussian location model pushed through a fixed binning grid: bins of
/// width sigma/50 spanning [-8 sigma, 8 sigma] plus two tail outcomes. The
/// grid does not move with theta, so the family is a genuine
/// parameter-dependent discrete model.
pub fn binned_gaussian(theta: f64, sigma: f64) -> DiscreteDistribution {
    let ncells = (2.0 * GAUSSIAN_BIN_HALF_RANGE / GAUSSIAN_BIN_WIDTH).round() as usize;
    let cdf = |x: f64| 0.5 * (1.0 + libm::erf((x - theta) / (sigma * std::f64::consts::SQRT_2)));
    let mut probs = Vec::with_capacity(ncells + 2);
    let edge = |k: usize| sigma * (-GAUSSIAN_BIN_HALF_RANGE + k as f64 * GAUSSIAN_BIN_WIDTH);
    probs.push(cdf(edge(0)));
    let mut prev = cdf(edge(0));
    for k in 1..=ncells {
        let cur = cdf(edge(k));
        probs.push((cur - prev).max(0.0));
        prev = cur;
    }
    probs.push(1.0 - prev);
    DiscreteDistribution::new(probs).expect("binned Gaussian cells sum to one")
}
