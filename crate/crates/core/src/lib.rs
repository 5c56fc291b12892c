//! Finite-blocklength performance limits of Jacobi MIMO channels.
//!
//! * [`spectral`] — deterministic equivalents and the capacity approximation.
//! * [`bounds`] — dispersion, error-probability bounds, outage, asymptotes.
//! * [`sim`] — Monte-Carlo channel simulator used to validate the formulas.
//! * [`sweep`] — grid runner and CSV/JSON emitter.

pub mod bounds;
pub mod dims;
pub mod error;
pub mod normal;
pub mod sim;
pub mod spectral;
pub mod sweep;

pub use bounds::{BoundEvaluation, DispersionComponents};
pub use dims::{make_dims, Branch, ChannelDims};
pub use error::{Error, Result};
pub use spectral::SpectralSolution;

/// Linear noise power σ² for an SNR `σ⁻²` given in dB.
pub fn noise_power_from_db(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}
