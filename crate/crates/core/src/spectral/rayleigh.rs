//! Limits of the Jacobi formulas as `n → ∞` with `σ² = (M/n)·σ̄²`, where the
//! channel degenerates to i.i.d. Rayleigh fading. `c = N/M` and `norm_noise`
//! is σ̄².

use super::positive_root;

/// δ₀(σ̄²), the positive root of `σ̄²δ² + (1−c+σ̄²)δ − c = 0`.
pub fn rayleigh_limit_delta(c: f64, norm_noise: f64) -> f64 {
    positive_root(norm_noise, 1.0 - c + norm_noise, c)
}

/// dδ₀/dσ̄².
pub fn rayleigh_limit_delta_derivative(c: f64, norm_noise: f64) -> f64 {
    let s = norm_noise;
    let d = rayleigh_limit_delta(c, s);
    -(d * d + d) / (2.0 * s * d + 1.0 - c + s)
}

/// Limit of the branch δ itself. For `c ≤ 1` this is δ₀; for `c > 1` the
/// `N > M` branch is normalized by `M` and tends to `δ₀ + (1−c)/σ̄²`, the
/// positive root of `σ̄²δ² + (c−1+σ̄²)δ − 1 = 0`.
pub fn rayleigh_branch_delta(c: f64, norm_noise: f64) -> f64 {
    if c <= 1.0 {
        rayleigh_limit_delta(c, norm_noise)
    } else {
        positive_root(norm_noise, c - 1.0 + norm_noise, 1.0)
    }
}

/// Marchenko–Pastur edges `(1 ∓ √c)²`.
pub fn rayleigh_edge_support(c: f64) -> (f64, f64) {
    let r = c.sqrt();
    ((1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r))
}

/// Limit of `C̄` (nats per transmit antenna).
pub fn rayleigh_capacity(c: f64, norm_noise: f64) -> f64 {
    let s = norm_noise;
    let d = rayleigh_branch_delta(c, s);
    if c <= 1.0 {
        d.ln_1p() + s * d - c * (s * d / c).ln() - c
    } else {
        c * d.ln_1p() + s * d - (s * d).ln() - 1.0
    }
}
