//! Model parameters and the model-level quantities that need no simulation:
//! the Strauss conditional intensity and count approximation, the LGCP
//! covariance, and the spectral representation of the Gaussian DPP.

mod dpp;
mod params;
mod strauss;

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::math::abs;

pub use dpp::{dpp_count_distribution, dpp_spectrum, DppSpectrum, DEFAULT_SPECTRUM_EPS};
pub use params::{DppGaussParams, LgcpParams, PoissonParams, StraussParams};
pub use strauss::{papangelou_strauss, ripley_count_mean, ripley_count_pmf};

/// Probability mass function on `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountPmf {
    probs: Vec<f64>,
}

impl CountPmf {
    pub const NORMALISATION_TOL: f64 = 1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(invalid("probabilities must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if abs(total - 1.0) > Self::NORMALISATION_TOL {
            return Err(invalid("probabilities must sum to one"));
        }
        Ok(CountPmf { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn pmf(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs.iter().enumerate().map(|(n, p)| (n as f64 - m) * (n as f64 - m) * p).sum()
    }
}

/// Covariance `sigma2 * exp(-d / delta)` of the LGCP's Gaussian field.
pub fn lgcp_covariance(p: &LgcpParams, d: f64) -> f64 {
    p.sigma2() * crate::math::exp(-d / p.delta())
}
