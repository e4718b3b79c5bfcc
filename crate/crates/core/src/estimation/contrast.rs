//! Minimum contrast estimation on Ripley's `K`.

use alloc::vec::Vec;

use super::{fit_intensity, FitResult, FittedParams};
use crate::error::{invalid, Error, Result};
use crate::geom::{PointPattern, RGrid};
use crate::math::{exp, expm1, ln, pow, PI};
use crate::models::{DppGaussParams, LgcpParams};
use crate::optim::{golden_section, nelder_mead_box};
use crate::quad::adaptive_simpson;
use crate::summaries::{estimate_k, Curve};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ContrastModel {
    Lgcp,
    Dpp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastConfig {
    /// Distances over which the contrast is integrated.
    pub rgrid: RGrid,
    pub q: f64,
    pub sigma2_bounds: (f64, f64),
    pub delta_bounds: (f64, f64),
    /// Lower end of the `kappa` search; the upper end is the existence bound.
    pub kappa_min: f64,
}

impl Default for ContrastConfig {
    fn default() -> Self {
        ContrastConfig {
            rgrid: RGrid::linspace(0.01, 0.25, 241).expect("valid grid"),
            q: 0.25,
            sigma2_bounds: (1e-3, 10.0),
            delta_bounds: (1e-3, 2.0),
            kappa_min: 1e-4,
        }
    }
}

/// `K(r) = 2 pi ∫_0^r t exp(sigma2 e^{-t/delta}) dt`.
pub fn theoretical_k_lgcp(p: &LgcpParams, r: f64) -> f64 {
    theoretical_k_lgcp_grid(p, &[r])[0]
}

/// [`theoretical_k_lgcp`] at nondecreasing distances, integrating each gap
/// once.
pub fn theoretical_k_lgcp_grid(p: &LgcpParams, r: &[f64]) -> Vec<f64> {
    let (s2, d) = (p.sigma2(), p.delta());
    let f = |t: f64| t * exp(s2 * exp(-t / d));
    let mut acc = 0.0;
    let mut prev = 0.0;
    r.iter()
        .map(|&ri| {
            let ri = ri.max(0.0);
            acc += adaptive_simpson(&f, prev, ri, 1e-13);
            prev = ri;
            2.0 * PI * acc
        })
        .collect()
}

/// `K(r) = pi r^2 - (pi kappa^2 / 2)(1 - exp(-2 r^2 / kappa^2))`, from the
/// pair correlation `1 - exp(-2 r^2 / kappa^2)` of the Gaussian kernel.
pub fn theoretical_k_dpp(p: &DppGaussParams, r: f64) -> f64 {
    let k2 = p.kappa() * p.kappa();
    PI * r * r + (PI * k2 / 2.0) * expm1(-2.0 * r * r / k2)
}

fn contrast(khat: &[f64], model: &[f64], r: &[f64], q: f64) -> f64 {
    let g = |i: usize| {
        let d = pow(khat[i].max(0.0), q) - pow(model[i].max(0.0), q);
        d * d
    };
    (1..r.len()).map(|i| (r[i] - r[i - 1]) * (g(i - 1) + g(i)) / 2.0).sum()
}

fn near_bound(v: f64, lo: f64, hi: f64) -> bool {
    v <= lo * (1.0 + 1e-6) || v >= hi * (1.0 - 1e-6)
}

/// Fit the model's shape parameters to an estimated `K` on `cfg.rgrid`, with
/// intensity `rho` held fixed.
pub fn fit_minimum_contrast_curve(
    khat: &Curve,
    rho: f64,
    model: ContrastModel,
    cfg: &ContrastConfig,
) -> Result<FitResult> {
    if khat.rgrid().values() != cfg.rgrid.values() {
        return Err(Error::MismatchedGrids);
    }
    if !(cfg.q > 0.0) || cfg.rgrid.len() < 2 {
        return Err(invalid("contrast needs q > 0 and at least two distances"));
    }
    let r = cfg.rgrid.values();
    let k = khat.values();
    match model {
        ContrastModel::Lgcp => {
            let (s_lo, s_hi) = cfg.sigma2_bounds;
            let (d_lo, d_hi) = cfg.delta_bounds;
            if !(0.0 < s_lo && s_lo < s_hi && 0.0 < d_lo && d_lo < d_hi) {
                return Err(invalid("LGCP contrast bounds must be positive, increasing intervals"));
            }
            let obj = |v: &[f64]| match LgcpParams::new(rho, exp(v[0]), exp(v[1])) {
                Ok(p) => contrast(k, &theoretical_k_lgcp_grid(&p, r), r, cfg.q),
                Err(_) => f64::INFINITY,
            };
            let lo = [ln(s_lo), ln(d_lo)];
            let hi = [ln(s_hi), ln(d_hi)];
            // coarse grid start guards against a poor local basin
            let mut start = [0.0, 0.0];
            let mut best = f64::INFINITY;
            for a in 0..8 {
                for b in 0..8 {
                    let v = [lo[0] + (hi[0] - lo[0]) * (a as f64 + 0.5) / 8.0, lo[1] + (hi[1] - lo[1]) * (b as f64 + 0.5) / 8.0];
                    let f = obj(&v);
                    if f < best {
                        best = f;
                        start = v;
                    }
                }
            }
            let step = [(hi[0] - lo[0]) / 16.0, (hi[1] - lo[1]) / 16.0];
            let s = nelder_mead_box(obj, &start, &step, &lo, &hi, 1e-10, 4000);
            if !s.f.is_finite() {
                return Err(Error::NoConvergence { iterations: s.iterations });
            }
            let (s2, d) = (exp(s.x[0]), exp(s.x[1]));
            Ok(FitResult {
                params: FittedParams::Lgcp(LgcpParams::new(rho, s2, d)?),
                objective: s.f,
                converged: s.converged,
                iterations: s.iterations,
                boundary: near_bound(s2, s_lo, s_hi) || near_bound(d, d_lo, d_hi),
            })
        }
        ContrastModel::Dpp => {
            let k_hi = DppGaussParams::kappa_max(rho);
            let k_lo = cfg.kappa_min;
            if !(0.0 < k_lo && k_lo < k_hi) {
                return Err(invalid("kappa search interval is empty"));
            }
            let obj = |kappa: f64| match DppGaussParams::new(rho, kappa) {
                Ok(p) => {
                    let m: Vec<f64> = r.iter().map(|&ri| theoretical_k_dpp(&p, ri)).collect();
                    contrast(k, &m, r, cfg.q)
                }
                Err(_) => f64::INFINITY,
            };
            let n = 64;
            let at = |i: usize| k_lo + (k_hi - k_lo) * i as f64 / n as f64;
            let best = (0..=n).min_by(|&a, &b| obj(at(a)).total_cmp(&obj(at(b)))).unwrap_or(0);
            let s = golden_section(obj, at(best.saturating_sub(1)), at((best + 1).min(n)), 1e-12, 500);
            Ok(FitResult {
                params: FittedParams::Dpp(DppGaussParams::new(rho, s.x)?),
                objective: s.f,
                converged: s.converged,
                iterations: s.iterations,
                boundary: near_bound(s.x, k_lo, k_hi),
            })
        }
    }
}

/// Minimum contrast fit of `model` to `x`, with `rho = n / |W|`.
pub fn fit_minimum_contrast(x: &PointPattern, model: ContrastModel, cfg: &ContrastConfig) -> Result<FitResult> {
    let rho = fit_intensity(x)?.rho();
    let khat = estimate_k(x, &cfg.rgrid)?;
    fit_minimum_contrast_curve(&khat, rho, model, cfg)
}
