//! Monte-Carlo channel simulator.
//!
//! Channels are sampled two ways — truncation of a Haar unitary and the
//! matrix-Beta equivalent — and every trial is driven by a ChaCha8 stream
//! seeded from `(master_seed, trial_index)`, so campaigns are reproducible
//! regardless of thread scheduling.

mod beta;
mod campaign;
mod density;
mod haar;
mod resolvent;
pub mod rng;
pub mod stats;

pub use beta::{sample_beta_equivalent_gram_eigs, sample_jacobi_eigs};
pub use campaign::{
    empirical_cdf, empirical_error_probability, error_fraction, mutual_information_samples, run_clt_campaign,
    EmpiricalCdf, EmpiricalRun, MAX_FAILURE_RATE,
};
pub use density::{information_density, spherical_gaussian_codeword, trace_c_sq_over_m, TrialRecord};
pub use haar::{gram_eigs, sample_haar_truncated, sample_haar_unitary, ChannelMatrix, ChannelSource};
pub use resolvent::{resolvent_trace_exact, resolvent_trace_mc};
pub use rng::{derive_seed, C64};
