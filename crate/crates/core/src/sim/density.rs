//! Per-trial information density.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::haar::ChannelMatrix;
use super::rng::{complex_gaussian_matrix, rng_from_seed, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// nats per transmit antenna per channel use
    pub info_density: f64,
    /// `(1/M) logdet(I + HHᴴ/σ²)`
    pub mi_term: f64,
    /// realized `Tr(C²)/M`, `C = I − SSᴴ/L`
    pub trace_c_sq_over_m: f64,
    pub seed: u64,
}

/// `M×L` i.i.d. complex Gaussian codeword rescaled to `Tr(SSᴴ) = ML`.
pub fn spherical_gaussian_codeword(m: usize, l: usize, seed: u64) -> DMatrix<C64> {
    codeword_from_rng(m, l, &mut rng_from_seed(seed))
}

pub(crate) fn codeword_from_rng<R: Rng + ?Sized>(m: usize, l: usize, rng: &mut R) -> DMatrix<C64> {
    let mut s = complex_gaussian_matrix(m, l, 1.0, rng);
    let scale = ((m * l) as f64 / s.norm_squared()).sqrt();
    s *= C64::new(scale, 0.0);
    s
}

/// `‖I − SSᴴ/L‖²_F / M`
pub fn trace_c_sq_over_m(codeword: &DMatrix<C64>) -> f64 {
    let (m, l) = codeword.shape();
    let mut c = codeword * codeword.adjoint();
    c *= C64::new(-1.0 / l as f64, 0.0);
    for i in 0..m {
        c[(i, i)] += 1.0;
    }
    c.norm_squared() / m as f64
}

/// `(1/M)logdet(I+HHᴴ/σ²) + (1/ML)Tr((HHᴴ+σ²I)⁻¹(HS+σW)(HS+σW)ᴴ) − (1/ML)Tr(WWᴴ)`.
///
/// One Cholesky factor `LLᴴ = I + HHᴴ/σ²` serves both the log-determinant and
/// the resolvent term, which becomes `‖L⁻¹(HS/σ + W)‖²_F`.
pub fn information_density(
    h: &ChannelMatrix,
    codeword: &DMatrix<C64>,
    noise: &DMatrix<C64>,
    noise_power: f64,
) -> Result<TrialRecord> {
    let hm = &h.entries;
    let (nr, m) = hm.shape();
    let l = codeword.ncols();
    if codeword.nrows() != m || noise.shape() != (nr, l) {
        return Err(Error::Dimension(format!(
            "H is {nr}x{m}, S is {}x{}, W is {}x{}",
            codeword.nrows(),
            l,
            noise.nrows(),
            noise.ncols()
        )));
    }
    if noise_power.is_nan() || noise_power <= 0.0 {
        return Err(Error::Domain(format!("noise power must be positive, got {noise_power}")));
    }
    let energy = codeword.norm_squared() / (m * l) as f64;
    if (energy - 1.0).abs() > 1e-12 {
        return Err(Error::EnergyConstraint(energy));
    }
    let inv_sigma = 1.0 / noise_power.sqrt();
    let mut b = hm * hm.adjoint();
    b *= C64::new(1.0 / noise_power, 0.0);
    for i in 0..nr {
        b[(i, i)] += 1.0;
    }
    let chol = b
        .cholesky()
        .ok_or_else(|| Error::Numerical("I + HHᴴ/σ² not positive definite".into()))?;
    let lf = chol.l();
    let mi = 2.0 * (0..nr).map(|i| lf[(i, i)].re.ln()).sum::<f64>() / m as f64;
    let mut y = hm * codeword;
    y *= C64::new(inv_sigma, 0.0);
    y += noise;
    let z = lf
        .solve_lower_triangular(&y)
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let ml = (m * l) as f64;
    let info_density = mi + z.norm_squared() / ml - noise.norm_squared() / ml;
    Ok(TrialRecord { info_density, mi_term: mi, trace_c_sq_over_m: trace_c_sq_over_m(codeword), seed: 0 })
}

/// Fresh noise for one block.
pub(crate) fn noise_from_rng<R: Rng + ?Sized>(n_rx: usize, l: usize, rng: &mut R) -> DMatrix<C64> {
    complex_gaussian_matrix(n_rx, l, 1.0, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::make_dims;
    use crate::sim::haar::sample_haar_truncated;

    #[test]
    fn codeword_energy_exact() {
        let s = spherical_gaussian_codeword(6, 60, 5);
        assert!((s.norm_squared() / 360.0 - 1.0).abs() < 1e-14);
        assert_eq!(s, spherical_gaussian_codeword(6, 60, 5));
    }

    #[test]
    fn zero_channel_gives_zero_density() {
        let s = spherical_gaussian_codeword(3, 20, 1);
        let w = complex_gaussian_matrix(2, 20, 1.0, &mut rng_from_seed(2));
        let rec = information_density(&ChannelMatrix::zeros(2, 3), &s, &w, 0.3).unwrap();
        assert_eq!(rec.info_density, 0.0);
        assert_eq!(rec.mi_term, 0.0);
    }

    #[test]
    fn noiseless_orthogonal_codeword() {
        // SSᴴ = L·I makes C = 0, and with W = 0 the density is
        // MI + (1/M) Tr((HHᴴ+σ²)⁻¹HHᴴ)
        let (m, l, s2) = (2, 4, 0.5);
        let mut s = DMatrix::<C64>::zeros(m, l);
        s[(0, 0)] = C64::new(2f64.sqrt(), 0.0);
        s[(0, 1)] = C64::new(2f64.sqrt(), 0.0);
        s[(1, 2)] = C64::new(0.0, 2f64.sqrt());
        s[(1, 3)] = C64::new(2f64.sqrt(), 0.0);
        let d = make_dims(3, 2, 8, l).unwrap();
        let h = sample_haar_truncated(&d, 4).unwrap();
        let rec = information_density(&h, &s, &DMatrix::zeros(3, l), s2).unwrap();
        assert!(rec.trace_c_sq_over_m.abs() < 1e-15);
        let hh = &h.entries * h.entries.adjoint();
        let reg = &hh + DMatrix::<C64>::identity(3, 3) * C64::new(s2, 0.0);
        let tr = (reg.try_inverse().unwrap() * &hh).trace().re / m as f64;
        assert!((rec.info_density - rec.mi_term - tr).abs() < 1e-12);
    }

    #[test]
    fn energy_and_shape_checked() {
        let h = ChannelMatrix::zeros(2, 3);
        let w = DMatrix::<C64>::zeros(2, 5);
        let bad = DMatrix::<C64>::from_element(3, 5, C64::new(2.0, 0.0));
        assert!(matches!(information_density(&h, &bad, &w, 1.0), Err(Error::EnergyConstraint(_))));
        let s = spherical_gaussian_codeword(3, 4, 1);
        assert!(matches!(information_density(&h, &s, &w, 1.0), Err(Error::Dimension(_))));
    }

    #[test]
    fn trace_c_sq_mean_near_inverse_beta() {
        // E Tr(C²)/M ≈ M/L = 1/β
        let t = 10_000;
        let m: f64 = (0..t).map(|i| trace_c_sq_over_m(&spherical_gaussian_codeword(6, 120, i))).sum::<f64>() / t as f64;
        assert!((m - 6.0 / 120.0).abs() / (6.0 / 120.0) < 0.10, "{m}");
    }
}
