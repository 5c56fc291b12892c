//! Sweep configuration: TOML documents and the built-in presets.

use serde::{Deserialize, Serialize};

use crate::dims::{make_dims, ChannelDims};
use crate::error::{Error, Result};

/// Quantities a sweep can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Cbar,
    V1,
    V2,
    V3,
    XiMinus,
    XiPlus,
    Lower,
    Upper,
    Outage,
    /// second-order rate `√(ML)(R − C̄)`
    R,
    /// KS distance of the normalized information density to `N(0,1)`
    EmpiricalCdf,
    /// Monte-Carlo `P[ID ≤ R]`
    EmpiricalPe,
    /// Gallager exponent `E_G` (needs `M + N = n`, `N ≤ M`)
    Gallager,
    /// Rayleigh-limit bounds (normalized SNR only)
    RayleighLower,
    RayleighUpper,
}

impl Quantity {
    pub const ALL: [Quantity; 15] = [
        Quantity::Cbar,
        Quantity::V1,
        Quantity::V2,
        Quantity::V3,
        Quantity::XiMinus,
        Quantity::XiPlus,
        Quantity::Lower,
        Quantity::Upper,
        Quantity::Outage,
        Quantity::R,
        Quantity::EmpiricalCdf,
        Quantity::EmpiricalPe,
        Quantity::Gallager,
        Quantity::RayleighLower,
        Quantity::RayleighUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Cbar => "cbar",
            Quantity::V1 => "v1",
            Quantity::V2 => "v2",
            Quantity::V3 => "v3",
            Quantity::XiMinus => "xi_minus",
            Quantity::XiPlus => "xi_plus",
            Quantity::Lower => "lower",
            Quantity::Upper => "upper",
            Quantity::Outage => "outage",
            Quantity::R => "r",
            Quantity::EmpiricalCdf => "empirical_cdf",
            Quantity::EmpiricalPe => "empirical_pe",
            Quantity::Gallager => "gallager",
            Quantity::RayleighLower => "rayleigh_lower",
            Quantity::RayleighUpper => "rayleigh_upper",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == name)
    }

    pub fn is_monte_carlo(self) -> bool {
        matches!(self, Quantity::EmpiricalCdf | Quantity::EmpiricalPe)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateRule {
    /// nats per transmit antenna per channel use
    Fixed(f64),
    /// `R = f · C̄` at each grid point
    FractionOfCapacity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McSettings {
    pub n_trials: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub dims_grid: Vec<ChannelDims>,
    pub snr_grid_db: Vec<f64>,
    /// SNR values are `σ̄⁻²` with `σ² = (M/n)σ̄²`.
    pub snr_normalized: bool,
    pub rate: RateRule,
    pub mc: Option<McSettings>,
    pub outputs: Vec<Quantity>,
}

impl SweepConfig {
    /// Number of grid points (rows per quantity).
    pub fn n_points(&self) -> usize {
        self.dims_grid.len() * self.snr_grid_db.len()
    }

    /// Replaces the Monte-Carlo settings; `None` trials keeps the sweep
    /// analytic.
    pub fn with_mc(mut self, n_trials: Option<usize>, master_seed: u64) -> Self {
        self.mc = n_trials.map(|n_trials| McSettings { n_trials, master_seed });
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dims_grid.is_empty() {
            return Err(Error::Config("dims: grid is empty".into()));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::Config("snr.db: grid is empty".into()));
        }
        if let Some((i, v)) = self.snr_grid_db.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Config(format!("snr.db[{i}]: {v} is not finite")));
        }
        if self.outputs.is_empty() {
            return Err(Error::Config("outputs.quantities: at least one quantity is required".into()));
        }
        let any_mc = self.outputs.iter().any(|q| q.is_monte_carlo());
        match self.mc {
            Some(mc) if mc.n_trials < 1000 => {
                return Err(Error::Config(format!("mc.trials: needs at least 1000, got {}", mc.n_trials)))
            }
            None if any_mc => {
                return Err(Error::Config("outputs: Monte-Carlo quantities need an [mc] section".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

/// Built-in experiment definitions.
pub fn preset(name: &str) -> Result<SweepConfig> {
    let cfg = match name {
        // N=4, M=6, 5 dB, R=0.37, β = 2..22
        "fig2" => {
            let mut dims_grid = Vec::new();
            for n in [12, 14, 16] {
                for beta in 2..=22 {
                    dims_grid.push(make_dims(4, 6, n, 6 * beta)?);
                }
            }
            SweepConfig {
                dims_grid,
                snr_grid_db: vec![5.0],
                snr_normalized: false,
                rate: RateRule::Fixed(0.37),
                mc: None,
                outputs: vec![Quantity::Cbar, Quantity::R, Quantity::XiPlus, Quantity::Upper, Quantity::Outage],
            }
        }
        // N=16, M=8, L=36, R=1, normalized SNR 0..10 dB
        "fig3" => SweepConfig {
            dims_grid: [32, 64, 128].into_iter().map(|n| make_dims(16, 8, n, 36)).collect::<Result<_>>()?,
            snr_grid_db: (0..=10).map(f64::from).collect(),
            snr_normalized: true,
            rate: RateRule::Fixed(1.0),
            mc: None,
            outputs: vec![
                Quantity::Cbar,
                Quantity::XiMinus,
                Quantity::XiPlus,
                Quantity::Lower,
                Quantity::Upper,
                Quantity::Outage,
                Quantity::RayleighLower,
                Quantity::RayleighUpper,
            ],
        },
        other => return Err(Error::Config(format!("unknown preset '{other}' (expected fig2 or fig3)"))),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Monte-Carlo quantities added to a preset when trials are requested.
pub fn preset_mc_outputs(name: &str) -> Vec<Quantity> {
    match name {
        "fig2" => vec![Quantity::EmpiricalPe],
        _ => vec![Quantity::EmpiricalPe, Quantity::EmpiricalCdf],
    }
}

// ---- TOML document ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    dims: DimsSection,
    snr: SnrSection,
    rate: RateSection,
    mc: Option<McSection>,
    outputs: OutputsSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimsSection {
    #[serde(rename = "N")]
    n_rx: Option<usize>,
    #[serde(rename = "M")]
    n_tx: Option<usize>,
    n: Option<Vec<usize>>,
    #[serde(rename = "L")]
    blocklen: Option<Vec<usize>>,
    beta: Option<Vec<f64>>,
    /// explicit `[N, M, n, L]` tuples
    points: Option<Vec<[usize; 4]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnrSection {
    db: Vec<f64>,
    #[serde(default)]
    normalized: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RateSection {
    value: Option<f64>,
    fraction_of_capacity: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct McSection {
    trials: usize,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputsSection {
    quantities: Vec<String>,
}

/// 1-based line of the first line of `text` that starts with `key`.
fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let t = l.trim_start();
        t.starts_with(key) && t[key.len()..].trim_start().starts_with(['=', ']'])
    })
    .map(|i| i + 1)
}

fn config_err(text: &str, key: &str, field: &str, msg: impl std::fmt::Display) -> Error {
    match line_of(text, key) {
        Some(line) => Error::Config(format!("line {line}: {field}: {msg}")),
        None => Error::Config(format!("{field}: {msg}")),
    }
}

/// Parses a TOML sweep document with sections `dims`, `snr`, `rate`,
/// optional `mc` and `outputs`.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;

    let dims_grid = parse_dims(text, &doc.dims)?;

    let rate = match (doc.rate.value, doc.rate.fraction_of_capacity) {
        (Some(v), None) if v.is_finite() => RateRule::Fixed(v),
        (None, Some(f)) if f.is_finite() && f > 0.0 => RateRule::FractionOfCapacity(f),
        (Some(_), Some(_)) => {
            return Err(config_err(text, "value", "rate", "give either value or fraction_of_capacity, not both"))
        }
        (None, None) => return Err(config_err(text, "[rate", "rate", "missing value or fraction_of_capacity")),
        _ => return Err(config_err(text, "value", "rate", "rate must be finite (and a fraction positive)")),
    };

    let mut outputs = Vec::new();
    for (i, name) in doc.outputs.quantities.iter().enumerate() {
        let q = Quantity::from_name(name).ok_or_else(|| {
            let vocab: Vec<_> = Quantity::ALL.iter().map(|q| q.name()).collect();
            config_err(
                text,
                "quantities",
                &format!("outputs.quantities[{i}]"),
                format!("unknown quantity '{name}' (expected one of {})", vocab.join(", ")),
            )
        })?;
        if !outputs.contains(&q) {
            outputs.push(q);
        }
    }

    let cfg = SweepConfig {
        dims_grid,
        snr_grid_db: doc.snr.db,
        snr_normalized: doc.snr.normalized,
        rate,
        mc: doc.mc.map(|m| McSettings { n_trials: m.trials, master_seed: m.seed }),
        outputs,
    };
    cfg.validate().map_err(|e| match e {
        Error::Config(msg) => {
            // point at the offending key if present, else at its section
            let field = msg.split(':').next().unwrap_or("");
            let section = field.split('.').next().unwrap_or("");
            let leaf = field.rsplit('.').next().unwrap_or("").split('[').next().unwrap_or("");
            let line = (leaf != section).then(|| line_of(text, leaf)).flatten().or_else(|| line_of(text, &format!("[{section}")));
            match line {
                Some(line) => Error::Config(format!("line {line}: {msg}")),
                None => Error::Config(msg),
            }
        }
        other => other,
    })?;
    Ok(cfg)
}

fn parse_dims(text: &str, d: &DimsSection) -> Result<Vec<ChannelDims>> {
    if let Some(points) = &d.points {
        if d.n_rx.is_some() || d.n_tx.is_some() || d.n.is_some() || d.blocklen.is_some() || d.beta.is_some() {
            return Err(config_err(text, "points", "dims.points", "cannot be combined with N/M/n/L/beta"));
        }
        return points
            .iter()
            .enumerate()
            .map(|(i, &[nr, nt, n, l])| {
                make_dims(nr, nt, n, l).map_err(|e| config_err(text, "points", &format!("dims.points[{i}]"), e))
            })
            .collect();
    }
    let nr = d.n_rx.ok_or_else(|| config_err(text, "[dims", "dims.N", "missing"))?;
    let nt = d.n_tx.ok_or_else(|| config_err(text, "[dims", "dims.M", "missing"))?;
    let ns = d.n.as_ref().ok_or_else(|| config_err(text, "[dims", "dims.n", "missing"))?;
    let ls: Vec<usize> = match (&d.blocklen, &d.beta) {
        (Some(ls), None) => ls.clone(),
        (None, Some(betas)) => betas
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let l = (b * nt as f64).round();
                if b.is_finite() && l >= 1.0 {
                    Ok(l as usize)
                } else {
                    Err(config_err(text, "beta", &format!("dims.beta[{i}]"), format!("{b} gives no valid L")))
                }
            })
            .collect::<Result<_>>()?,
        (Some(_), Some(_)) => return Err(config_err(text, "beta", "dims", "give either L or beta, not both")),
        (None, None) => return Err(config_err(text, "[dims", "dims", "missing L or beta")),
    };
    let mut grid = Vec::with_capacity(ns.len() * ls.len());
    for (i, &n) in ns.iter().enumerate() {
        for &l in &ls {
            grid.push(make_dims(nr, nt, n, l).map_err(|e| config_err(text, "n", &format!("dims.n[{i}]"), e))?);
        }
    }
    Ok(grid)
}
