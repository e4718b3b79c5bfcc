//! Parameter estimation: plug-in intensity, minimum contrast on `K` for the
//! Cox and determinantal models, and maximum pseudo-likelihood for Strauss.

mod contrast;
mod pseudo;

pub use contrast::{
    fit_minimum_contrast, fit_minimum_contrast_curve, theoretical_k_dpp, theoretical_k_lgcp, theoretical_k_lgcp_grid,
    ContrastConfig, ContrastModel,
};
pub use pseudo::{
    default_r_grid, mple_strauss, mple_strauss_conditional, profile_mple_r, ConditionalPseudoLikelihood,
    PseudoLikelihood, DEFAULT_QUAD_RESOLUTION,
};

use crate::error::{Error, Result};
use crate::geom::PointPattern;
use crate::models::{DppGaussParams, LgcpParams, PoissonParams, StraussParams};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FittedParams {
    Poisson(PoissonParams),
    Lgcp(LgcpParams),
    Strauss(StraussParams),
    /// Conditional pseudo-likelihood fits the interaction only.
    StraussInteraction {
        gamma: f64,
        #[cfg_attr(feature = "serde", serde(rename = "R"))]
        r: f64,
    },
    Dpp(DppGaussParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitResult {
    pub params: FittedParams,
    /// Contrast (minimised) or log pseudo-likelihood (maximised) at the fit.
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
    /// The estimate sits on the edge of the search region (`gamma` in
    /// `{0, 1}`, or a box bound in minimum contrast).
    pub boundary: bool,
}

impl FitResult {
    pub fn gamma(&self) -> Option<f64> {
        match self.params {
            FittedParams::Strauss(p) => Some(p.gamma()),
            FittedParams::StraussInteraction { gamma, .. } => Some(gamma),
            _ => None,
        }
    }
}

/// Fits whose scale parameter lands where minimum contrast is known to be
/// unreliable are excluded from the study.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExclusionRule {
    /// LGCP fits with `delta >= max_delta` are excluded.
    pub max_delta: f64,
    /// DPP fits with `kappa < min_kappa` are excluded.
    pub min_kappa: f64,
}

impl Default for ExclusionRule {
    fn default() -> Self {
        ExclusionRule { max_delta: 0.3, min_kappa: 0.001 }
    }
}

impl ExclusionRule {
    pub fn excludes(&self, fit: &FittedParams) -> bool {
        match fit {
            FittedParams::Lgcp(p) => p.delta() >= self.max_delta,
            FittedParams::Dpp(p) => p.kappa() < self.min_kappa,
            _ => false,
        }
    }
}

/// `rho = n / |W|`.
pub fn fit_intensity(x: &PointPattern) -> Result<PoissonParams> {
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    PoissonParams::new(x.len() as f64 / x.window().area())
}
