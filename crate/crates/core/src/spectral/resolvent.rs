//! Deterministic equivalents of `G(a,b) = (aXXᴴ + bYYᴴ)⁻¹` for
//! independent Gaussian `X` (N×M₁) and `Y` (N×M₂) with variance-1/N entries.

use serde::{Deserialize, Serialize};

use super::positive_root;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralResolventParams {
    pub a: f64,
    pub b: f64,
    /// `M₁ / N`
    pub c1: f64,
    /// `M₂ / N`
    pub c2: f64,
    /// δ(a,b), the limit of `(1/N) Tr G(a,b)`.
    pub delta_ab: f64,
}

/// Positive root of `ab(c₁+c₂−1)δ² + (ac₁+bc₂−a−b)δ − 1 = 0`.
pub fn solve_general_resolvent(a: f64, b: f64, c1: f64, c2: f64) -> Result<GeneralResolventParams> {
    if !(a > b && b > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("need a > b > 0, got a={a}, b={b}")));
    }
    if !(c1 >= 1.0 && c2 > 0.0) || !c1.is_finite() || !c2.is_finite() {
        return Err(Error::Domain(format!("need c1 >= 1 and c2 > 0, got c1={c1}, c2={c2}")));
    }
    let qa = a * b * (c1 + c2 - 1.0);
    let qb = a * c1 + b * c2 - a - b;
    if qb * qb + 4.0 * qa < 0.0 {
        return Err(Error::Numerical("negative discriminant".into()));
    }
    let delta_ab = positive_root(qa, qb, 1.0);
    if !(delta_ab > 0.0 && delta_ab.is_finite()) {
        return Err(Error::Numerical(format!("resolvent root not positive: {delta_ab}")));
    }
    Ok(GeneralResolventParams { a, b, c1, c2, delta_ab })
}

impl GeneralResolventParams {
    /// Relative residual of δ(a,b) in its quadratic.
    pub fn residual(&self) -> f64 {
        let d = self.delta_ab;
        let t2 = self.a * self.b * (self.c1 + self.c2 - 1.0) * d * d;
        let t1 = (self.a * self.c1 + self.b * self.c2 - self.a - self.b) * d;
        (t2 + t1 - 1.0).abs() / (t2.abs() + t1.abs() + 1.0)
    }
}

/// Deterministic equivalent of `(1/N) E Tr[G(a,b) G(c,d)]`, with `p1 = (a,b)`
/// and `p2 = (c,d)`.
pub fn second_order_resolvent(p1: &GeneralResolventParams, p2: &GeneralResolventParams) -> Result<f64> {
    if p1.c1 != p2.c1 || p1.c2 != p2.c2 {
        return Err(Error::Domain("second-order resolvent needs matching (c1, c2)".into()));
    }
    let (c1, c2) = (p1.c1, p1.c2);
    let (d_ab, d_cd) = (p1.delta_ab, p2.delta_ab);
    let den = p2.a * c1 / ((1.0 + p2.a * d_cd) * (1.0 + p1.a * d_ab))
        + p2.b * c2 / ((1.0 + p2.b * d_cd) * (1.0 + p1.b * d_ab));
    Ok(d_ab / den)
}
