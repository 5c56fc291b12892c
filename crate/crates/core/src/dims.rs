//! Integer problem size of a Jacobi MIMO link and the ratios derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sizes of a Jacobi MIMO link: `N` excited receive channels, `M` excited
/// transmit channels, `n` fiber channels in total and a blocklength of `L`
/// channel uses.
///
/// Only the regime `N + M <= n` is modeled; construction rejects anything
/// else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelDims {
    n_rx: usize,
    n_tx: usize,
    n_avail: usize,
    blocklen: usize,
}

impl ChannelDims {
    pub fn new(n_rx: usize, n_tx: usize, n_avail: usize, blocklen: usize) -> Result<Self> {
        if n_rx < 1 || n_tx < 1 || n_avail < 1 || blocklen < 1 {
            return Err(Error::Dimension(format!(
                "all sizes must be >= 1 (N={n_rx}, M={n_tx}, n={n_avail}, L={blocklen})"
            )));
        }
        if n_rx + n_tx > n_avail {
            return Err(Error::Dimension(format!(
                "N+M exceeds n ({n_rx}+{n_tx} > {n_avail})"
            )));
        }
        Ok(Self { n_rx, n_tx, n_avail, blocklen })
    }

    /// `N`
    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    /// `M`
    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    /// `n`
    pub fn n_avail(&self) -> usize {
        self.n_avail
    }

    /// `L`
    pub fn blocklen(&self) -> usize {
        self.blocklen
    }

    /// Same link with a different blocklength.
    pub fn with_blocklen(&self, blocklen: usize) -> Result<Self> {
        Self::new(self.n_rx, self.n_tx, self.n_avail, blocklen)
    }

    /// `y1 = N / n`
    pub fn y1(&self) -> f64 {
        self.n_rx as f64 / self.n_avail as f64
    }

    /// `y2 = M / n`
    pub fn y2(&self) -> f64 {
        self.n_tx as f64 / self.n_avail as f64
    }

    /// `beta = L / M`
    pub fn beta(&self) -> f64 {
        self.blocklen as f64 / self.n_tx as f64
    }

    /// `c = N / M`
    pub fn c(&self) -> f64 {
        self.n_rx as f64 / self.n_tx as f64
    }

    /// `N0 = n - M`, the number of unexcited inputs.
    pub fn n0(&self) -> usize {
        self.n_avail - self.n_tx
    }

    /// `N1 = n - N`, the number of unobserved outputs.
    pub fn n1(&self) -> usize {
        self.n_avail - self.n_rx
    }

    /// `sqrt(M L)`, the second-order scaling of the total rate.
    pub fn sqrt_ml(&self) -> f64 {
        ((self.n_tx * self.blocklen) as f64).sqrt()
    }

    pub fn branch(&self) -> Branch {
        if self.n_rx <= self.n_tx {
            Branch::RxLeqTx
        } else {
            Branch::RxGtTx
        }
    }
}

impl std::fmt::Display for ChannelDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(N={}, M={}, n={}, L={})", self.n_rx, self.n_tx, self.n_avail, self.blocklen)
    }
}

/// Which closed form applies: `N <= M` (ties included) or `N > M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    RxLeqTx,
    RxGtTx,
}

/// Convenience wrapper around [`ChannelDims::new`].
pub fn make_dims(n_rx: usize, n_tx: usize, n_avail: usize, blocklen: usize) -> Result<ChannelDims> {
    ChannelDims::new(n_rx, n_tx, n_avail, blocklen)
}
