//! Deterministic equivalents of the Jacobi channel and the capacity
//! approximation built on them.
//!
//! All quantities are in nats per transmit antenna per channel use, and
//! `noise_power` is the linear noise variance σ².

mod rayleigh;
mod resolvent;

pub use rayleigh::{
    rayleigh_branch_delta, rayleigh_capacity, rayleigh_edge_support, rayleigh_limit_delta,
    rayleigh_limit_delta_derivative,
};
pub use resolvent::{second_order_resolvent, solve_general_resolvent, GeneralResolventParams};

use serde::{Deserialize, Serialize};

pub use crate::dims::Branch;
use crate::dims::ChannelDims;
use crate::error::{Error, Result};

/// Smallest noise power accepted by the finite-SNR formulas.
pub const MIN_NOISE_POWER: f64 = 1e-30;

/// δ, its derivative, the spectral edges and the capacity approximation at
/// one noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSolution {
    pub delta: f64,
    pub delta_prime: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub branch: Branch,
    pub noise_power: f64,
    pub cbar: f64,
}

/// Support edges `(λ₋, λ₊)` of the limiting eigenvalue density of `HHᴴ`.
pub fn edge_support(dims: &ChannelDims) -> (f64, f64) {
    edges_from_ratios(dims.y1(), dims.y2())
}

pub(crate) fn edges_from_ratios(y1: f64, y2: f64) -> (f64, f64) {
    let a = (y1 * (1.0 - y2)).sqrt();
    let b = (y2 * (1.0 - y1)).sqrt();
    let lm = (a - b) * (a - b);
    let lp = ((a + b) * (a + b)).min(1.0);
    (lm, lp)
}

/// Positive root of `a x² + b x − c = 0` for `a ≥ 0`, `c > 0`, evaluated
/// without subtractive cancellation.
pub(crate) fn positive_root(a: f64, b: f64, c: f64) -> f64 {
    let disc = (b * b + 4.0 * a * c).sqrt();
    if b >= 0.0 {
        2.0 * c / (b + disc)
    } else {
        (disc - b) / (2.0 * a)
    }
}

/// Coefficients `(A, B, C)` of the quadratic `A δ² + B δ − C = 0` solved
/// by δ, plus `(y_p, y_q)` with `p` the smaller side.
struct Quadratic {
    a: f64,
    b: f64,
    c: f64,
    yp: f64,
}

fn quadratic(dims: &ChannelDims, s: f64) -> Quadratic {
    let (yp, yq) = match dims.branch() {
        Branch::RxLeqTx => (dims.y1(), dims.y2()),
        Branch::RxGtTx => (dims.y2(), dims.y1()),
    };
    Quadratic {
        a: (1.0 - yp) * s * (1.0 + s),
        b: yq - yp + (1.0 - 2.0 * yp) * s,
        c: yp,
        yp,
    }
}

fn check_noise(noise_power: f64) -> Result<()> {
    if !noise_power.is_finite() || noise_power.is_nan() {
        return Err(Error::Domain(format!("noise power must be finite, got {noise_power}")));
    }
    if noise_power < MIN_NOISE_POWER {
        return Err(Error::Numerical(format!(
            "noise power {noise_power:e} below {MIN_NOISE_POWER:e}; use the high-SNR asymptotes"
        )));
    }
    Ok(())
}

/// δ(σ²), the positive root of the branch quadratic.
///
/// Uses the conjugate form `2y_p / (B + √((σ²+λ₋)(σ²+λ₊)))`; `B ≥ 0`
/// always holds since `y_p ≤ 1/2`, so nothing cancels at low SNR.
pub fn solve_delta(dims: &ChannelDims, noise_power: f64) -> Result<f64> {
    check_noise(noise_power)?;
    let s = noise_power;
    let q = quadratic(dims, s);
    let (lm, lp) = edge_support(dims);
    let disc = ((s + lm) * (s + lp)).sqrt();
    let delta = 2.0 * q.yp / (q.b + disc);
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Numerical(format!("delta not positive/finite: {delta}")));
    }
    Ok(delta)
}

/// Relative residual of δ in its defining quadratic,
/// `|Aδ² + Bδ − C| / (|Aδ²| + |Bδ| + C)`.
pub fn delta_residual(dims: &ChannelDims, noise_power: f64, delta: f64) -> f64 {
    let q = quadratic(dims, noise_power);
    let t2 = q.a * delta * delta;
    let t1 = q.b * delta;
    (t2 + t1 - q.c).abs() / (t2.abs() + t1.abs() + q.c)
}

/// dδ/dσ² by implicit differentiation of the quadratic.
pub fn delta_derivative(dims: &ChannelDims, noise_power: f64) -> Result<f64> {
    let delta = solve_delta(dims, noise_power)?;
    delta_derivative_at(dims, noise_power, delta)
}

fn delta_derivative_at(dims: &ChannelDims, s: f64, delta: f64) -> Result<f64> {
    let q = quadratic(dims, s);
    let denom = 2.0 * q.a * delta + q.b;
    if denom.abs() < 1e-14 {
        return Err(Error::Numerical(format!(
            "implicit-derivative denominator {denom:e} is degenerate"
        )));
    }
    // d/ds of A(s) = (1-y_p)(1+2s), of B(s) = 1-2y_p
    let num = (1.0 - q.yp) * (1.0 + 2.0 * s) * delta * delta + (1.0 - 2.0 * q.yp) * delta;
    Ok(-num / denom)
}

/// Full spectral solution including `C̄(σ²)`.
pub fn capacity_approx(dims: &ChannelDims, noise_power: f64) -> Result<SpectralSolution> {
    let s = noise_power;
    let delta = solve_delta(dims, s)?;
    let delta_prime = delta_derivative_at(dims, s, delta)?;
    let (lambda_minus, lambda_plus) = edge_support(dims);
    let (y1, y2) = (dims.y1(), dims.y2());
    let cbar = match dims.branch() {
        Branch::RxLeqTx => cbar_form(y1, y2, s, delta),
        Branch::RxGtTx => (y1 / y2) * cbar_form(y2, y1, s, delta),
    };
    if !cbar.is_finite() {
        return Err(Error::Numerical(format!("capacity approximation not finite at σ²={s:e}")));
    }
    Ok(SpectralSolution {
        delta,
        delta_prime,
        lambda_minus,
        lambda_plus,
        branch: dims.branch(),
        noise_power: s,
        // rounding can leave a -1e-17 residue at vanishing SNR
        cbar: cbar.max(0.0),
    })
}

/// `log(1+(1+s)δ) + ((1−v)/v)·log(1+sδ) − (u/v)·log((1−u)sδ/u) + log(1−u)/v`
/// with `u` the smaller-side ratio.
fn cbar_form(u: f64, v: f64, s: f64, delta: f64) -> f64 {
    let sd = s * delta;
    ((1.0 + s) * delta).ln_1p() + (1.0 - v) / v * sd.ln_1p() - (u / v) * ((1.0 - u) * sd / u).ln()
        + (-u).ln_1p() / v
}
