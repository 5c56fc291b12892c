//! Declarative parameter sweeps over the analytic formulas and the
//! simulator, with CSV/JSON output.

mod config;
mod emit;

pub use config::{parse_config, preset, preset_mc_outputs, McSettings, Quantity, RateRule, SweepConfig};
pub use emit::{emit, read_json, OutputFormat};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{
    dispersion_components, error_probability_bounds, gallager_comparison, rayleigh_bounds, BoundEvaluation,
    DispersionComponents,
};
use crate::dims::ChannelDims;
use crate::error::{Error, Result};
use crate::noise_power_from_db;
use crate::sim::{derive_seed, empirical_cdf, error_fraction, run_clt_campaign, stats};
use crate::spectral::capacity_approx;

/// Fraction of erroring grid points above which a sweep fails.
pub const MAX_POINT_FAILURE_RATE: f64 = 0.10;

/// One `(grid point, quantity)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n_rx: usize,
    #[serde(rename = "M")]
    pub n_tx: usize,
    #[serde(rename = "n")]
    pub n_avail: usize,
    #[serde(rename = "L")]
    pub blocklen: usize,
    pub snr_db: f64,
    /// Rate used at this point; absent if it could not be resolved.
    pub rate: Option<f64>,
    pub quantity: String,
    pub value: Option<f64>,
    pub std_err: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// sha256 of the canonical JSON form of the resolved config
    pub config_hash: String,
    pub master_seed: Option<u64>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub provenance: Provenance,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Number of grid points with at least one errored cell.
    pub fn failed_points(&self, n_quantities: usize) -> usize {
        self.rows.chunks(n_quantities.max(1)).filter(|c| c.iter().any(|r| r.error.is_some())).count()
    }
}

pub fn config_hash(cfg: &SweepConfig) -> String {
    let canonical = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(&canonical))
}

/// Noise power at a grid point, honoring normalized SNR.
pub fn point_noise_power(cfg: &SweepConfig, dims: &ChannelDims, snr_db: f64) -> f64 {
    let s = noise_power_from_db(snr_db);
    if cfg.snr_normalized {
        s * dims.n_tx() as f64 / dims.n_avail() as f64
    } else {
        s
    }
}

struct Cell {
    value: f64,
    std_err: Option<f64>,
}

impl From<f64> for Cell {
    fn from(value: f64) -> Self {
        Cell { value, std_err: None }
    }
}

/// Lazily computed analytic pieces shared by the quantities of one point.
struct PointEval<'a> {
    dims: &'a ChannelDims,
    noise_power: f64,
    rate: f64,
}

impl PointEval<'_> {
    fn dispersion(&self) -> Result<DispersionComponents> {
        dispersion_components(self.dims, self.noise_power)
    }

    fn bounds(&self) -> Result<BoundEvaluation> {
        error_probability_bounds(self.dims, self.noise_power, self.rate)
    }
}

fn evaluate_point(cfg: &SweepConfig, index: usize, dims: &ChannelDims, snr_db: f64) -> Vec<SweepRow> {
    let noise_power = point_noise_power(cfg, dims, snr_db);
    let rate = match cfg.rate {
        RateRule::Fixed(r) => Ok(r),
        RateRule::FractionOfCapacity(f) => capacity_approx(dims, noise_power).map(|s| f * s.cbar),
    };
    let row = |quantity: Quantity, rate: Option<f64>, cell: Result<Cell>| {
        let (value, std_err, error) = match cell {
            Ok(c) => (Some(c.value), c.std_err, None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        SweepRow {
            n_rx: dims.n_rx(),
            n_tx: dims.n_tx(),
            n_avail: dims.n_avail(),
            blocklen: dims.blocklen(),
            snr_db,
            rate,
            quantity: quantity.name().to_string(),
            value,
            std_err,
            error,
        }
    };
    let rate = match rate {
        Ok(r) => r,
        Err(e) => {
            let msg = e.to_string();
            return cfg
                .outputs
                .iter()
                .map(|&q| row(q, None, Err(Error::Numerical(format!("rate: {msg}")))))
                .collect();
        }
    };

    let point = PointEval { dims, noise_power, rate };
    let needs_run = cfg.outputs.iter().any(|q| q.is_monte_carlo());
    let run = match (needs_run, cfg.mc) {
        (true, Some(mc)) => {
            Some(run_clt_campaign(dims, noise_power, mc.n_trials, derive_seed(mc.master_seed, index as u64)))
        }
        _ => None,
    };

    cfg.outputs
        .iter()
        .map(|&q| {
            let cell: Result<Cell> = match q {
                Quantity::Cbar => capacity_approx(dims, noise_power).map(|s| s.cbar.into()),
                Quantity::V1 => point.dispersion().map(|d| d.v1.into()),
                Quantity::V2 => point.dispersion().map(|d| d.v2.into()),
                Quantity::V3 => point.dispersion().map(|d| d.v3.into()),
                Quantity::XiMinus => point.dispersion().map(|d| d.xi_minus.into()),
                Quantity::XiPlus => point.dispersion().map(|d| d.xi_plus.into()),
                Quantity::Lower => point.bounds().map(|b| b.lower_bound.into()),
                Quantity::Upper => point.bounds().map(|b| b.upper_bound.into()),
                Quantity::Outage => point.bounds().map(|b| b.outage.into()),
                Quantity::R => point.bounds().map(|b| b.second_order_rate.into()),
                Quantity::Gallager => gallager_comparison(dims, noise_power).map(|g| g.e_g.into()),
                Quantity::RayleighLower | Quantity::RayleighUpper => {
                    if cfg.snr_normalized {
                        rayleigh_bounds(dims, noise_power_from_db(snr_db), rate).map(|b| {
                            if q == Quantity::RayleighLower { b.lower_bound } else { b.upper_bound }.into()
                        })
                    } else {
                        Err(Error::Config("Rayleigh-limit bounds need normalized SNR".into()))
                    }
                }
                Quantity::EmpiricalCdf | Quantity::EmpiricalPe => match &run {
                    None => Err(Error::Config("Monte-Carlo quantity without mc settings".into())),
                    Some(Err(e)) => Err(Error::Numerical(e.to_string())),
                    Some(Ok(run)) => {
                        let n = run.trials.len();
                        if q == Quantity::EmpiricalPe {
                            error_fraction(run, rate)
                                .map(|p| Cell { value: p, std_err: Some(stats::proportion_std_err(p, n)) })
                        } else {
                            let centered = capacity_approx(dims, noise_power).and_then(|s| {
                                let xi = point.dispersion()?.realized_xi(run.mean_trace_c_sq_over_m());
                                empirical_cdf(run, s.cbar, xi.sqrt())
                            });
                            centered.map(|cdf| Cell {
                                value: cdf.ks_distance_normal(),
                                std_err: Some(1.0 / (n as f64).sqrt()),
                            })
                        }
                    }
                },
            };
            row(q, Some(rate), cell)
        })
        .collect()
}

/// Evaluates every requested quantity at every grid point. Points run in
/// parallel; row order is dims-major, then SNR, then quantity.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    let points: Vec<(usize, &ChannelDims, f64)> = cfg
        .dims_grid
        .iter()
        .flat_map(|d| cfg.snr_grid_db.iter().map(move |&s| (d, s)))
        .enumerate()
        .map(|(i, (d, s))| (i, d, s))
        .collect();
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(i, d, s)| evaluate_point(cfg, i, d, s))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let result = SweepResult {
        provenance: Provenance {
            config_hash: config_hash(cfg),
            master_seed: cfg.mc.map(|m| m.master_seed),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        },
        rows,
    };
    let failed = result.failed_points(cfg.outputs.len());
    if failed as f64 > MAX_POINT_FAILURE_RATE * points.len() as f64 {
        return Err(Error::Numerical(format!("{failed} of {} grid points failed", points.len())));
    }
    Ok(result)
}
