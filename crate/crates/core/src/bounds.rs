//! Dispersion of the information density, error-probability bounds,
//! outage probability, high-SNR asymptotes and the Gallager comparison.

use serde::{Deserialize, Serialize};

use crate::dims::{Branch, ChannelDims};
use crate::error::{Error, Result};
use crate::normal::std_normal_cdf;
use crate::spectral::{
    capacity_approx, rayleigh_capacity, rayleigh_edge_support, rayleigh_limit_delta,
    rayleigh_limit_delta_derivative, SpectralSolution,
};

/// Negative variances larger than this in magnitude are reported as errors.
const NEG_TOLERANCE: f64 = 1e-10;

/// Variance components of `√(ML)·(ID − C̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionComponents {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub beta: f64,
    /// `βV₁ + V₂`
    pub xi_minus: f64,
    /// `βV₁ + V₂ + V₃`
    pub xi_plus: f64,
    /// `Tr(C²)/M` behind `xi_plus`; `1/β` in the spherical-Gaussian limit.
    pub trace_c_sq_over_m: f64,
}

impl DispersionComponents {
    fn assemble(v1: f64, v2: f64, v3: f64, beta: f64) -> Self {
        let xi_minus = beta * v1 + v2;
        Self { v1, v2, v3, beta, xi_minus, xi_plus: xi_minus + v3, trace_c_sq_over_m: 1.0 / beta }
    }

    /// Variance for a codebook with realized `Tr(C²)/M`:
    /// `βV₁ + V₂ + (Tr(C²)/M)·βV₃`.
    pub fn realized_xi(&self, trace_c_sq_over_m: f64) -> f64 {
        self.xi_minus + trace_c_sq_over_m * self.beta * self.v3
    }
}

fn clamp_variance(name: &str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::Numerical(format!("{name} is not finite")));
    }
    if v < -NEG_TOLERANCE {
        return Err(Error::Numerical(format!("{name} = {v:e} is negative")));
    }
    Ok(v.max(0.0))
}

/// `log((√(s+λ₊)+√(s+λ₋))² / (4√((s+λ₊)(s+λ₋))))`
fn v1_form(s: f64, lm: f64, lp: f64) -> f64 {
    let (a, b) = ((s + lp).sqrt(), (s + lm).sqrt());
    // (a+b)²/(4ab) = 1 + (a−b)²/(4ab)
    ((a - b) * (a - b) / (4.0 * a * b)).ln_1p()
}

pub fn dispersion_components(dims: &ChannelDims, noise_power: f64) -> Result<DispersionComponents> {
    let sol = capacity_approx(dims, noise_power)?;
    dispersion_from_solution(dims, &sol)
}

fn dispersion_from_solution(dims: &ChannelDims, sol: &SpectralSolution) -> Result<DispersionComponents> {
    let s = sol.noise_power;
    let (d, dp) = (sol.delta, sol.delta_prime);
    let (y1, y2) = (dims.y1(), dims.y2());
    let v1 = v1_form(s, sol.lambda_minus, sol.lambda_plus);
    let a = 1.0 + (1.0 + s) * d;
    let b = 1.0 + s * d;
    let (v2, v3) = match sol.branch {
        Branch::RxLeqTx => {
            let v2 = (y1 / y2) * (1.0 + (1.0 - y1) / y1 * s * s * dp);
            let (nr, nt, n0) = (dims.n_rx() as f64, dims.n_tx() as f64, dims.n0() as f64);
            let den = y1 * ((nt * (1.0 + s) / nr) / (a * a) + (n0 * s / nr) / (b * b));
            (v2, y2 * d / den / a.powi(4))
        }
        Branch::RxGtTx => {
            let v2 = 1.0 + (1.0 - y2) / y2 * s * s * dp;
            let g = 1.0 + d / b;
            let inner = 1.0 - 1.0 / (b * (1.0 + s + s * (1.0 - y1) / y1 * g * g));
            let v3 = y1 * (1.0 - y1) * s * d.powi(3) / (y2 * y2 * a * a * b) * inner;
            (v2, v3)
        }
    };
    Ok(DispersionComponents::assemble(
        clamp_variance("V1", v1)?,
        clamp_variance("V2", v2)?,
        clamp_variance("V3", v3)?,
        dims.beta(),
    ))
}

/// Upper/lower bounds on the optimal average error probability at rate `R`
/// (nats per transmit antenna per channel use).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub rate_per_antenna: f64,
    /// `r = √(ML)(R − C̄)`
    pub second_order_rate: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub outage: f64,
    pub cbar: f64,
    pub xi_minus: f64,
    pub xi_plus: f64,
}

impl BoundEvaluation {
    fn from_parts(dims: &ChannelDims, rate: f64, cbar: f64, disp: &DispersionComponents) -> Self {
        let r = dims.sqrt_ml() * (rate - cbar);
        let lower_bound = if r > 0.0 { 0.5 } else { std_normal_cdf(r / disp.xi_minus.sqrt()) };
        Self {
            rate_per_antenna: rate,
            second_order_rate: r,
            lower_bound,
            upper_bound: std_normal_cdf(r / disp.xi_plus.sqrt()),
            outage: outage_from_parts(dims, rate, cbar, disp.v1),
            cbar,
            xi_minus: disp.xi_minus,
            xi_plus: disp.xi_plus,
        }
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("rate must be finite, got {rate}")))
    }
}

pub fn error_probability_bounds(dims: &ChannelDims, noise_power: f64, rate_per_antenna: f64) -> Result<BoundEvaluation> {
    check_rate(rate_per_antenna)?;
    let sol = capacity_approx(dims, noise_power)?;
    let disp = dispersion_from_solution(dims, &sol)?;
    Ok(BoundEvaluation::from_parts(dims, rate_per_antenna, sol.cbar, &disp))
}

fn outage_from_parts(dims: &ChannelDims, rate: f64, cbar: f64, v1: f64) -> f64 {
    std_normal_cdf(dims.n_tx() as f64 * (rate - cbar) / v1.sqrt())
}

/// `Φ(M(R − C̄)/√V₁)`, the infinite-blocklength limit of both bounds.
pub fn outage_probability(dims: &ChannelDims, noise_power: f64, rate_per_antenna: f64) -> Result<f64> {
    check_rate(rate_per_antenna)?;
    let sol = capacity_approx(dims, noise_power)?;
    let v1 = v1_form(noise_power, sol.lambda_minus, sol.lambda_plus);
    Ok(outage_from_parts(dims, rate_per_antenna, sol.cbar, v1))
}

/// Leading behavior as `σ² → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighSnrAsymptotes {
    /// Coefficient of `log(1/σ²)` in `C̄`: `min(y₁,y₂)/y₂`.
    pub cbar_coeff: f64,
    pub xi_minus_limit: f64,
    pub xi_plus_limit: f64,
}

/// `−log(1 − y_i(1−y_j) / (y_j(1−y_i)))`
fn v1_infinity(yi: f64, yj: f64) -> f64 {
    -(-(yi * (1.0 - yj)) / (yj * (1.0 - yi))).ln_1p()
}

/// Limits of `Ξ±` as `σ² → 0`. For `N > M`, `V₂ → 1` and `V₃ → 0`, so both
/// limits equal `βV₁^∞ + 1`.
pub fn high_snr_asymptotes(dims: &ChannelDims) -> Result<HighSnrAsymptotes> {
    let (y1, y2, beta) = (dims.y1(), dims.y2(), dims.beta());
    let cbar_coeff = y1.min(y2) / y2;
    match dims.n_rx().cmp(&dims.n_tx()) {
        std::cmp::Ordering::Equal => Err(Error::Degenerate(
            "N = M: the dispersion diverges like 1/σ as σ² → 0".into(),
        )),
        std::cmp::Ordering::Less => {
            let base = beta * v1_infinity(y1, y2);
            let c = y1 / y2;
            Ok(HighSnrAsymptotes {
                cbar_coeff,
                xi_minus_limit: base + c,
                xi_plus_limit: base + 2.0 * c - c * c,
            })
        }
        std::cmp::Ordering::Greater => {
            let lim = beta * v1_infinity(y2, y1) + 1.0;
            Ok(HighSnrAsymptotes { cbar_coeff, xi_minus_limit: lim, xi_plus_limit: lim })
        }
    }
}

/// Near-capacity comparison against the Gallager error exponent for a
/// fully excited fiber (`M + N = n`, `N ≤ M`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GallagerComparison {
    /// ω from δ.
    pub omega: f64,
    /// ω from the spectral edges, `(1+y₁/y₂)(1−√((σ²+λ₋)/(σ²+1)))/2`.
    pub omega_closed_form: f64,
    pub e_g: f64,
    /// `V₁ + (2ω − ω²)/β`
    pub xi_plus_over_beta: f64,
}

pub fn gallager_comparison(dims: &ChannelDims, noise_power: f64) -> Result<GallagerComparison> {
    if dims.n_rx() + dims.n_tx() != dims.n_avail() {
        return Err(Error::Regime(format!("needs M+N = n, got {dims}")));
    }
    if dims.n_rx() > dims.n_tx() {
        return Err(Error::Regime(format!("needs N <= M, got {dims}")));
    }
    let sol = capacity_approx(dims, noise_power)?;
    let s = noise_power;
    let (y1, y2, beta) = (dims.y1(), dims.y2(), dims.beta());
    let d = sol.delta;
    // δ here is normalized by min(N, M); the max(N,M)/M prefactor makes the
    // expression branch-independent
    let scale = dims.n_rx().max(dims.n_tx()) as f64 / dims.n_tx() as f64;
    let omega = scale * d / (1.0 + (1.0 + s) * d);
    let root = ((s + sol.lambda_minus) / (s + 1.0)).sqrt();
    let omega_closed_form = (1.0 + y1 / y2) * (1.0 - root) / 2.0;
    let v1 = v1_form(s, sol.lambda_minus, sol.lambda_plus);
    Ok(GallagerComparison {
        omega,
        omega_closed_form,
        e_g: v1 + (y1 / y2 + 1.0) * (1.0 - root) / beta,
        xi_plus_over_beta: v1 + (2.0 * omega - omega * omega) / beta,
    })
}

/// Dispersion in the i.i.d. Rayleigh limit, `c = N/M`, `σ̄²` normalized noise.
pub fn rayleigh_dispersion(c: f64, norm_noise: f64, beta: f64) -> Result<DispersionComponents> {
    if !(c > 0.0 && norm_noise > 0.0 && beta > 0.0) {
        return Err(Error::Domain(format!("need c, σ̄², β > 0 (c={c}, σ̄²={norm_noise}, β={beta})")));
    }
    let s = norm_noise;
    let (lm, lp) = rayleigh_edge_support(c);
    let d0 = rayleigh_limit_delta(c, s);
    let v2 = c + s * s * rayleigh_limit_delta_derivative(c, s);
    let v3 = d0 / ((1.0 + d0).powi(4) * (s + 1.0 / ((1.0 + d0) * (1.0 + d0))));
    Ok(DispersionComponents::assemble(
        clamp_variance("V1", v1_form(s, lm, lp))?,
        clamp_variance("V2", v2)?,
        clamp_variance("V3", v3)?,
        beta,
    ))
}

/// Bounds in the Rayleigh limit for `M` transmit antennas and blocklength `L`.
pub fn rayleigh_bounds(dims: &ChannelDims, norm_noise: f64, rate_per_antenna: f64) -> Result<BoundEvaluation> {
    check_rate(rate_per_antenna)?;
    let c = dims.c();
    let disp = rayleigh_dispersion(c, norm_noise, dims.beta())?;
    let cbar = rayleigh_capacity(c, norm_noise);
    Ok(BoundEvaluation::from_parts(dims, rate_per_antenna, cbar, &disp))
}
