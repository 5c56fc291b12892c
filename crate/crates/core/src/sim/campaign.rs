//! Seeded Monte-Carlo campaigns over `(H, S, W)` draws.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::{codeword_from_rng, information_density, noise_from_rng, TrialRecord};
use super::haar::haar_truncated_from_rng;
use super::rng::{derive_seed, rng_from_seed};
use super::stats;
use crate::dims::ChannelDims;
use crate::error::{Error, Result};
use crate::spectral::capacity_approx;

/// Fraction of failed trials above which a campaign is rejected.
pub const MAX_FAILURE_RATE: f64 = 1e-3;

/// Ordered trial records of one campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRun {
    pub trials: Vec<TrialRecord>,
    pub dims: ChannelDims,
    pub noise_power: f64,
    pub n_trials: usize,
    pub master_seed: u64,
    /// Trials that failed twice and were dropped.
    pub failed: usize,
}

fn one_trial(dims: &ChannelDims, noise_power: f64, seed: u64) -> Result<TrialRecord> {
    let mut rng = rng_from_seed(seed);
    let h = haar_truncated_from_rng(dims, &mut rng)?;
    let s = codeword_from_rng(dims.n_tx(), dims.blocklen(), &mut rng);
    let w = noise_from_rng(dims.n_rx(), dims.blocklen(), &mut rng);
    let mut rec = information_density(&h, &s, &w, noise_power)?;
    rec.seed = seed;
    Ok(rec)
}

/// Runs a campaign with a caller-supplied per-trial evaluator. Trial `t`
/// uses seed `derive_seed(master_seed, t)`; a failure is retried once with a
/// perturbed sub-seed.
pub(crate) fn run_trials<T, F>(n_trials: usize, master_seed: u64, f: F) -> (Vec<T>, usize)
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let out: Vec<Option<T>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(master_seed, t);
            f(seed).or_else(|_| f(derive_seed(seed, 1))).ok()
        })
        .collect();
    let failed = out.iter().filter(|o| o.is_none()).count();
    (out.into_iter().flatten().collect(), failed)
}

fn check_failures(failed: usize, n_trials: usize) -> Result<()> {
    if failed as f64 > MAX_FAILURE_RATE * n_trials as f64 {
        return Err(Error::Numerical(format!("{failed} of {n_trials} trials failed")));
    }
    Ok(())
}

pub fn run_clt_campaign(dims: &ChannelDims, noise_power: f64, n_trials: usize, master_seed: u64) -> Result<EmpiricalRun> {
    if n_trials < 100 {
        return Err(Error::Domain(format!("a campaign needs at least 100 trials, got {n_trials}")));
    }
    if noise_power.is_nan() || noise_power <= 0.0 {
        return Err(Error::Domain(format!("noise power must be positive, got {noise_power}")));
    }
    let (trials, failed) = run_trials(n_trials, master_seed, |seed| one_trial(dims, noise_power, seed));
    check_failures(failed, n_trials)?;
    Ok(EmpiricalRun { trials, dims: *dims, noise_power, n_trials, master_seed, failed })
}

impl EmpiricalRun {
    pub fn info_densities(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.info_density).collect()
    }

    pub fn mi_terms(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.mi_term).collect()
    }

    /// `√(ML)·(ID − center)` per trial.
    pub fn scaled_deviations(&self, center: f64) -> Vec<f64> {
        let k = self.dims.sqrt_ml();
        self.trials.iter().map(|t| k * (t.info_density - center)).collect()
    }

    pub fn mean_trace_c_sq_over_m(&self) -> f64 {
        stats::mean(&self.trials.iter().map(|t| t.trace_c_sq_over_m).collect::<Vec<_>>())
    }
}

/// Right-continuous empirical CDF of `√(ML)(ID − center)/scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        Self { sorted: samples }
    }

    /// Fraction of samples `≤ x`.
    pub fn query(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Kolmogorov–Smirnov distance to the standard normal.
    pub fn ks_distance_normal(&self) -> f64 {
        stats::ks_normal(&self.sorted)
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

pub fn empirical_cdf(run: &EmpiricalRun, center: f64, scale: f64) -> Result<EmpiricalCdf> {
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::Domain(format!("scale must be positive, got {scale}")));
    }
    if run.trials.is_empty() {
        return Err(Error::Domain("empty run".into()));
    }
    Ok(EmpiricalCdf::from_samples(run.scaled_deviations(center).into_iter().map(|v| v / scale).collect()))
}

/// `P[√(ML)(ID − C̄) ≤ r]` with `r = √(ML)(R − C̄)`, i.e. the fraction of
/// trials with `ID ≤ R`, estimated from a fresh campaign.
pub fn empirical_error_probability(dims: &ChannelDims, noise_power: f64, rate: f64, n_trials: usize, seed: u64) -> Result<f64> {
    if n_trials < 1000 {
        return Err(Error::Domain(format!("needs at least 1000 trials, got {n_trials}")));
    }
    let run = run_clt_campaign(dims, noise_power, n_trials, seed)?;
    error_fraction(&run, rate)
}

/// Fraction of trials of `run` whose scaled deviation from `C̄` is `≤ r`.
pub fn error_fraction(run: &EmpiricalRun, rate: f64) -> Result<f64> {
    let cbar = capacity_approx(&run.dims, run.noise_power)?.cbar;
    let k = run.dims.sqrt_ml();
    let r = k * (rate - cbar);
    let hits = run.trials.iter().filter(|t| k * (t.info_density - cbar) <= r).count();
    Ok(hits as f64 / run.trials.len() as f64)
}

/// Monte-Carlo draws of `(1/M) logdet(I + HHᴴ/σ²)` alone.
pub fn mutual_information_samples(dims: &ChannelDims, noise_power: f64, n_trials: usize, master_seed: u64) -> Result<Vec<f64>> {
    let nr = dims.n_rx();
    let m = dims.n_tx() as f64;
    let (v, failed) = run_trials(n_trials, master_seed, |seed| {
        let h = haar_truncated_from_rng(dims, &mut rng_from_seed(seed))?;
        let mut b = &h.entries * h.entries.adjoint();
        b /= nalgebra::Complex::new(noise_power, 0.0);
        for i in 0..nr {
            b[(i, i)] += 1.0;
        }
        let chol = b.cholesky().ok_or_else(|| Error::Numerical("not positive definite".into()))?;
        let l = chol.l();
        Ok(2.0 * (0..nr).map(|i| l[(i, i)].re.ln()).sum::<f64>() / m)
    });
    check_failures(failed, n_trials)?;
    Ok(v)
}
