//! Matrix-Beta (Jacobi ensemble) sampling, the second route to the channel
//! spectrum.

use nalgebra::DMatrix;
use rand::Rng;

use super::haar::sorted;
use super::rng::{complex_gaussian_matrix, derive_seed, rng_from_seed, C64};
use crate::dims::{Branch, ChannelDims};
use crate::error::{Error, Result};

/// Eigenvalues of `J(p, q, r) = XXᴴ(XXᴴ+YYᴴ)⁻¹` with `X` p×q and `Y` p×r,
/// computed as the spectrum of `L⁻¹XXᴴL⁻ᴴ` for `LLᴴ = XXᴴ+YYᴴ`.
pub fn sample_jacobi_eigs<R: Rng + ?Sized>(p: usize, q: usize, r: usize, rng: &mut R) -> Result<Vec<f64>> {
    let x = complex_gaussian_matrix(p, q, 1.0, rng);
    let y = complex_gaussian_matrix(p, r, 1.0, rng);
    let xx = &x * x.adjoint();
    let w = &xx + &y * y.adjoint();
    let chol = w
        .cholesky()
        .ok_or_else(|| Error::Numerical("XXᴴ+YYᴴ is numerically singular".into()))?;
    let l = chol.l();
    let t = l
        .solve_lower_triangular(&xx)
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    // L⁻¹ XXᴴ L⁻ᴴ = L⁻¹ (L⁻¹ XXᴴ)ᴴ
    let j: DMatrix<C64> = l
        .solve_lower_triangular(&t.adjoint())
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let herm = (&j + j.adjoint()) * C64::new(0.5, 0.0);
    Ok(sorted(herm.symmetric_eigenvalues().iter().copied().collect()))
}

pub(crate) fn beta_eigs_from_rng<R: Rng + ?Sized>(dims: &ChannelDims, rng: &mut R) -> Result<Vec<f64>> {
    let (nr, nt, n) = (dims.n_rx(), dims.n_tx(), dims.n_avail());
    match dims.branch() {
        Branch::RxLeqTx => sample_jacobi_eigs(nr, nt, n - nt, rng),
        Branch::RxGtTx => sample_jacobi_eigs(nt, nr, n - nr, rng),
    }
}

/// Gram-matrix eigenvalues of a Jacobi channel drawn through the matrix-Beta
/// equivalence: `J(N, M, n−M)` for `N ≤ M`, `J(M, N, n−N)` otherwise.
pub fn sample_beta_equivalent_gram_eigs(dims: &ChannelDims, seed: u64) -> Result<Vec<f64>> {
    beta_eigs_from_rng(dims, &mut rng_from_seed(seed))
        .or_else(|_| beta_eigs_from_rng(dims, &mut rng_from_seed(derive_seed(seed, u64::MAX))))
}
