//! Unconditional and count-conditioned samplers for the four models.
//!
//! The free functions here take a [`SeedSpec`] and are the stable entry
//! points. Each submodule also exposes the same sampler over any
//! `rand::Rng`, which the harness uses to run many draws from one stream.

pub mod dpp;
pub mod lgcp;
pub mod poisson;
pub mod strauss;

use crate::error::Result;
use crate::geom::{PointPattern, Window};
use crate::models::{DppSpectrum, LgcpParams, PoissonParams, StraussParams};
use crate::seed::SeedSpec;

pub use dpp::DEFAULT_MAX_ATTEMPTS as DPP_DEFAULT_MAX_ATTEMPTS;
pub use lgcp::{GaussField, GridField, DEFAULT_GRID, DEFAULT_MAX_ATTEMPTS as LGCP_DEFAULT_MAX_ATTEMPTS};
pub use strauss::{ChainConfig, ChainTrace};

/// `n` i.i.d. uniform points on `w`.
pub fn sample_binomial(n: usize, w: &Window, seed: SeedSpec) -> PointPattern {
    poisson::binomial(n, w, &mut seed.rng())
}

pub fn sample_poisson(p: &PoissonParams, w: &Window, seed: SeedSpec) -> PointPattern {
    poisson::poisson(p, w, &mut seed.rng())
}

pub fn sample_gauss_field(p: &LgcpParams, w: &Window, nx: usize, ny: usize, seed: SeedSpec) -> Result<GridField> {
    Ok(GaussField::new(p, w, nx, ny)?.sample(&mut seed.rng()))
}

pub fn sample_lgcp(p: &LgcpParams, w: &Window, nx: usize, ny: usize, seed: SeedSpec) -> Result<PointPattern> {
    Ok(GaussField::new(p, w, nx, ny)?.sample_cox(&mut seed.rng()))
}

pub fn sample_lgcp_conditional(
    n: usize,
    p: &LgcpParams,
    w: &Window,
    nx: usize,
    ny: usize,
    seed: SeedSpec,
    max_attempts: usize,
) -> Result<PointPattern> {
    GaussField::new(p, w, nx, ny)?.sample_cox_conditional(n, max_attempts, &mut seed.rng())
}

pub fn sample_strauss(p: &StraussParams, w: &Window, cfg: &ChainConfig, seed: SeedSpec) -> Result<PointPattern> {
    strauss::unconditional(p, w, cfg, &mut seed.rng())
}

pub fn sample_strauss_conditional(
    n: usize,
    p: &StraussParams,
    w: &Window,
    cfg: &ChainConfig,
    seed: SeedSpec,
) -> Result<PointPattern> {
    strauss::conditional(n, p, w, cfg, &mut seed.rng())
}

pub fn sample_dpp(s: &DppSpectrum, w: &Window, seed: SeedSpec) -> Result<PointPattern> {
    dpp::unconditional(s, w, &mut seed.rng())
}

/// Indices (into the spectrum's sorted eigenvalues) of the Bernoulli
/// variables that are one, conditioned on exactly `n` of them being one.
pub fn sample_dpp_count_indices(
    n: usize,
    s: &DppSpectrum,
    seed: SeedSpec,
    max_attempts: usize,
) -> Result<alloc::vec::Vec<usize>> {
    dpp::IndexSampler::new(s.eigenvalues()).sample(n, max_attempts, &mut seed.rng())
}

pub fn sample_dpp_conditional(
    n: usize,
    s: &DppSpectrum,
    w: &Window,
    seed: SeedSpec,
    max_attempts: usize,
) -> Result<PointPattern> {
    dpp::conditional(n, s, w, max_attempts, &mut seed.rng())
}
