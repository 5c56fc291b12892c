//! Haar-distributed unitaries and their truncations.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::{complex_gaussian_matrix, derive_seed, rng_from_seed, C64};
use crate::dims::ChannelDims;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelSource {
    HaarTruncation,
    BetaEnsembleEquivalent,
}

/// An `N×M` channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub entries: DMatrix<C64>,
    pub source: ChannelSource,
}

impl ChannelMatrix {
    pub fn new(entries: DMatrix<C64>, source: ChannelSource) -> Self {
        Self { entries, source }
    }

    pub fn zeros(n_rx: usize, n_tx: usize) -> Self {
        Self::new(DMatrix::zeros(n_rx, n_tx), ChannelSource::HaarTruncation)
    }
}

/// Haar unitary of size `n`: QR of a complex Gaussian with the columns of
/// `Q` rotated so that `diag(R)` is real positive.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DMatrix<C64>> {
    let z = complex_gaussian_matrix(n, n, 1.0, rng);
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let rjj = r[(j, j)];
        let mag = rjj.norm();
        if mag.is_nan() || mag <= 1e-300 || !mag.is_finite() {
            return Err(Error::Numerical("Gaussian draw is numerically singular".into()));
        }
        let mut col = q.column_mut(j);
        col *= rjj / mag;
    }
    Ok(q)
}

pub(crate) fn haar_truncated_from_rng<R: Rng + ?Sized>(dims: &ChannelDims, rng: &mut R) -> Result<ChannelMatrix> {
    let u = sample_haar_unitary(dims.n_avail(), rng)?;
    Ok(ChannelMatrix::new(
        u.view((0, 0), (dims.n_rx(), dims.n_tx())).into_owned(),
        ChannelSource::HaarTruncation,
    ))
}

/// Leading `N×M` block of an `n×n` Haar unitary. A breakdown of the
/// factorization is retried once with a derived seed.
pub fn sample_haar_truncated(dims: &ChannelDims, seed: u64) -> Result<ChannelMatrix> {
    haar_truncated_from_rng(dims, &mut rng_from_seed(seed))
        .or_else(|_| haar_truncated_from_rng(dims, &mut rng_from_seed(derive_seed(seed, u64::MAX))))
}

/// Eigenvalues of the smaller Gram matrix (`HHᴴ` if `N ≤ M`, else `HᴴH`).
pub fn gram_eigs(h: &ChannelMatrix) -> Vec<f64> {
    let e = &h.entries;
    let gram = if e.nrows() <= e.ncols() { e * e.adjoint() } else { e.adjoint() * e };
    sorted(gram.symmetric_eigenvalues().iter().copied().collect())
}

pub(crate) fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::make_dims;

    #[test]
    fn parent_is_unitary() {
        let mut rng = rng_from_seed(3);
        for n in [2, 12, 64, 512] {
            let u = sample_haar_unitary(n, &mut rng).unwrap();
            let dev = (u.adjoint() * &u - DMatrix::<C64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-10, "n={n}: {dev:e}");
        }
    }

    #[test]
    fn truncation_is_contractive() {
        let d = make_dims(4, 6, 12, 1).unwrap();
        for seed in 0..50 {
            let h = sample_haar_truncated(&d, seed).unwrap();
            assert_eq!(h.entries.shape(), (4, 6));
            for s in h.entries.singular_values().iter() {
                assert!(*s <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let d = make_dims(3, 5, 10, 1).unwrap();
        assert_eq!(sample_haar_truncated(&d, 9).unwrap(), sample_haar_truncated(&d, 9).unwrap());
    }

    #[test]
    fn phase_fix_makes_first_entry_distribution_uniform_in_phase() {
        // without the fix the diagonal of Q has a biased phase; with it,
        // E[U_00] = 0
        let mut rng = rng_from_seed(11);
        let t = 20_000;
        let mut acc = C64::new(0.0, 0.0);
        for _ in 0..t {
            acc += sample_haar_unitary(4, &mut rng).unwrap()[(0, 0)];
        }
        let mean = acc / t as f64;
        // |U_00|² has mean 1/4, so SE of the mean ≈ 0.5/√t
        assert!(mean.norm() < 4.0 * 0.5 / (t as f64).sqrt(), "{mean}");
    }
}
