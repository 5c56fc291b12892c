//! Estimates of `(1/N) E Tr (aXXᴴ + bYYᴴ)⁻¹` for Gaussian `X` (N×M₁) and
//! `Y` (N×M₂) with variance-1/N entries.

use nalgebra::{DMatrix, SymmetricEigen};

use super::campaign::run_trials;
use super::rng::{complex_gaussian_matrix, rng_from_seed, C64};
use super::stats;
use crate::error::{Error, Result};

fn check(a: f64, b: f64, dim_n: usize, c1: f64, c2: f64) -> Result<(usize, usize)> {
    if !(a > b && b > 0.0) {
        return Err(Error::Domain(format!("need a > b > 0, got a={a}, b={b}")));
    }
    if dim_n == 0 || !(c1 >= 1.0 && c2 > 0.0) {
        return Err(Error::Domain(format!("need N >= 1, c1 >= 1, c2 > 0 (N={dim_n}, c1={c1}, c2={c2})")));
    }
    let m1 = (c1 * dim_n as f64).round() as usize;
    let m2 = (c2 * dim_n as f64).round() as usize;
    if m2 == 0 {
        return Err(Error::Domain("c2·N rounds to zero".into()));
    }
    Ok((m1, m2))
}

/// Monte-Carlo mean and standard error.
pub fn resolvent_trace_mc(a: f64, b: f64, dim_n: usize, c1: f64, c2: f64, n_trials: usize, seed: u64) -> Result<(f64, f64)> {
    let (m1, m2) = check(a, b, dim_n, c1, c2)?;
    let nf = dim_n as f64;
    let var = 1.0 / nf;
    let (v, failed) = run_trials(n_trials, seed, |s| {
        let mut rng = rng_from_seed(s);
        let mut x = complex_gaussian_matrix(dim_n, m1, var, &mut rng);
        let mut y = complex_gaussian_matrix(dim_n, m2, var, &mut rng);
        x *= C64::new(a.sqrt(), 0.0);
        y *= C64::new(b.sqrt(), 0.0);
        let w = &x * x.adjoint() + &y * y.adjoint();
        let l = w.cholesky().ok_or_else(|| Error::Numerical("singular draw".into()))?.l();
        // Tr W⁻¹ = ‖L⁻¹‖²_F
        let linv = l
            .solve_lower_triangular(&DMatrix::<C64>::identity(dim_n, dim_n))
            .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
        Ok(linv.norm_squared() / nf)
    });
    if failed > 0 && failed as f64 > 1e-3 * n_trials as f64 {
        return Err(Error::Numerical(format!("{failed} of {n_trials} draws were singular")));
    }
    Ok((stats::mean(&v), stats::std_err(&v)))
}

/// Exact finite-`N` value (up to quadrature error far below `f64`
/// resolution) for integer `M₁, M₂ ≥ N`.
///
/// With `W = XXᴴ + YYᴴ = LLᴴ`, `J = L⁻¹XXᴴL⁻ᴴ` is a unitarily invariant
/// matrix-Beta independent of `W`, so
/// `E Tr G = E[Tr W⁻¹]/N · E Tr (bI + (a−b)J)⁻¹`, with
/// `E Tr W⁻¹ = N²/(M₁+M₂−N)`. The second factor is integrated against the
/// one-point density of the Jacobi unitary ensemble with weight
/// `x^(M₁−N)(1−x)^(M₂−N)`, written through the Christoffel–Darboux kernel
/// and evaluated with Gauss–Jacobi quadrature.
pub fn resolvent_trace_exact(a: f64, b: f64, dim_n: usize, m1: usize, m2: usize) -> Result<f64> {
    if !(a > b && b > 0.0) {
        return Err(Error::Domain(format!("need a > b > 0, got a={a}, b={b}")));
    }
    if dim_n == 0 || m1 < dim_n || m2 < dim_n {
        return Err(Error::Domain(format!("need M1, M2 >= N >= 1 (N={dim_n}, M1={m1}, M2={m2})")));
    }
    let q = dim_n + 150;
    // Jacobi polynomials on [-1, 1] with weight (1−t)^α (1+t)^β, mapped to
    // x = (1+t)/2
    let alpha = (m2 - dim_n) as f64;
    let beta = (m1 - dim_n) as f64;
    let mut jm = DMatrix::<f64>::zeros(q, q);
    for k in 0..q {
        let kf = k as f64;
        let s = 2.0 * kf + alpha + beta;
        let diag = if k == 0 {
            (beta - alpha) / (alpha + beta + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        };
        jm[(k, k)] = (1.0 + diag) / 2.0;
        if k + 1 < q {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + alpha + beta;
            let off = (4.0 * k1 * (k1 + alpha) * (k1 + beta) * (k1 + alpha + beta)
                / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)))
                .sqrt();
            jm[(k, k + 1)] = off / 2.0;
            jm[(k + 1, k)] = off / 2.0;
        }
    }
    let eig = SymmetricEigen::new(jm);
    let mut acc = 0.0;
    for j in 0..q {
        let x = eig.eigenvalues[j];
        let v = eig.eigenvectors.column(j);
        let kernel: f64 = (0..dim_n).map(|k| v[k] * v[k]).sum();
        acc += kernel / (b + (a - b) * x);
    }
    let nf = dim_n as f64;
    Ok(nf / ((m1 + m2) as f64 - nf) * acc / nf)
}
