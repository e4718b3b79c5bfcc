use crate::error::{invalid, Error, Result};
use crate::math::PI;

/// Homogeneous Poisson process with intensity `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "raw::Poisson"))]
pub struct PoissonParams {
    rho: f64,
}

impl PoissonParams {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(invalid("poisson: rho must be positive"));
        }
        Ok(PoissonParams { rho })
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Log-Gaussian Cox process driven by `exp(Y)`, `Y` Gaussian with
/// exponential covariance `sigma2 * exp(-d / delta)`.
///
/// The field mean is always derived as `log(rho) - sigma2 / 2` so that the
/// intensity is `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "raw::Lgcp"))]
pub struct LgcpParams {
    rho: f64,
    sigma2: f64,
    delta: f64,
}

impl LgcpParams {
    pub fn new(rho: f64, sigma2: f64, delta: f64) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(rho) && ok(sigma2) && ok(delta)) {
            return Err(invalid("lgcp: rho, sigma2 and delta must be positive"));
        }
        Ok(LgcpParams { rho, sigma2, delta })
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn mu(&self) -> f64 {
        crate::math::ln(self.rho) - self.sigma2 / 2.0
    }
}

/// Strauss process: density proportional to `beta^n gamma^s` where `s`
/// counts pairs at distance `<= r`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "raw::Strauss"))]
pub struct StraussParams {
    beta: f64,
    gamma: f64,
    #[cfg_attr(feature = "serde", serde(rename = "R"))]
    r: f64,
}

impl StraussParams {
    pub fn new(beta: f64, gamma: f64, r: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("strauss: beta must be positive"));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(invalid("strauss: gamma must lie in [0, 1]"));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("strauss: R must be positive"));
        }
        Ok(StraussParams { beta, gamma, r })
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    /// Interaction radius.
    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Stationary DPP with Gaussian kernel `rho * exp(-|h / kappa|^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "raw::Dpp"))]
pub struct DppGaussParams {
    rho: f64,
    kappa: f64,
}

/// Slack on the existence bound so that `kappa = 1/sqrt(rho pi)` computed in
/// floating point is accepted.
const EXISTENCE_SLACK: f64 = 1e-10;

impl DppGaussParams {
    pub fn new(rho: f64, kappa: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite() && kappa > 0.0 && kappa.is_finite()) {
            return Err(invalid("dpp: rho and kappa must be positive"));
        }
        let value = rho * PI * kappa * kappa;
        if value > 1.0 + EXISTENCE_SLACK {
            return Err(Error::ExistenceViolated { value });
        }
        Ok(DppGaussParams { rho, kappa })
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    /// Largest admissible `kappa` for intensity `rho`.
    pub fn kappa_max(rho: f64) -> f64 {
        1.0 / crate::math::sqrt(rho * PI)
    }
}

#[cfg(feature = "serde")]
mod raw {
    use super::*;

    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Poisson {
        rho: f64,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Lgcp {
        rho: f64,
        sigma2: f64,
        delta: f64,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Strauss {
        beta: f64,
        gamma: f64,
        #[serde(rename = "R")]
        r: f64,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Dpp {
        rho: f64,
        kappa: f64,
    }

    impl TryFrom<Poisson> for PoissonParams {
        type Error = Error;
        fn try_from(v: Poisson) -> Result<Self> {
            PoissonParams::new(v.rho)
        }
    }
    impl TryFrom<Lgcp> for LgcpParams {
        type Error = Error;
        fn try_from(v: Lgcp) -> Result<Self> {
            LgcpParams::new(v.rho, v.sigma2, v.delta)
        }
    }
    impl TryFrom<Strauss> for StraussParams {
        type Error = Error;
        fn try_from(v: Strauss) -> Result<Self> {
            StraussParams::new(v.beta, v.gamma, v.r)
        }
    }
    impl TryFrom<Dpp> for DppGaussParams {
        type Error = Error;
        fn try_from(v: Dpp) -> Result<Self> {
            DppGaussParams::new(v.rho, v.kappa)
        }
    }
}
