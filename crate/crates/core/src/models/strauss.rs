use alloc::vec::Vec;

use super::{CountPmf, StraussParams};
use crate::error::{Error, Result};
use crate::geom::{Point, PointPattern};
use crate::math::{exp, ln, ln_gamma, log_sum_exp, powu, PI};

/// `beta * gamma^t` where `t` counts points of `x` within `R` of `u`.
pub fn papangelou_strauss(x: &PointPattern, u: &Point, p: &StraussParams) -> f64 {
    let r2 = p.r() * p.r();
    let t = x.points().iter().filter(|q| q.dist2(u) <= r2).count() as u32;
    p.beta() * powu(p.gamma(), t)
}

fn ln_weight(p: &StraussParams, n: usize) -> f64 {
    let nf = n as f64;
    nf * ln(p.beta()) - ln_gamma(nf + 1.0) + (p.gamma() - 1.0) * nf * (nf - 1.0) * PI * p.r() * p.r() / 2.0
}

const TAIL_TOL: f64 = 1e-12;

/// Ripley's approximation to the distribution of the Strauss count on the
/// unit square, `p(n) ∝ beta^n / n! * exp{(gamma - 1) n (n - 1) pi R^2 / 2}`.
///
/// The omitted tail beyond `n_max` is bounded by a geometric series: the
/// ratio `p(n+1)/p(n)` is nonincreasing in `n`, so the tail is at most
/// `p(n_max) q / (1 - q)` with `q` the ratio at `n_max`.
pub fn ripley_count_pmf(p: &StraussParams, n_max: usize) -> Result<CountPmf> {
    let lw: Vec<f64> = (0..=n_max).map(|n| ln_weight(p, n)).collect();
    let lz = log_sum_exp(&lw);
    let probs: Vec<f64> = lw.iter().map(|l| exp(l - lz)).collect();
    let q = exp(ln_weight(p, n_max + 1) - lw[n_max]);
    let tail = if q < 1.0 { probs[n_max] * q / (1.0 - q) } else { f64::INFINITY };
    if !(tail < TAIL_TOL) {
        return Err(Error::TailTooHeavy { n_max, tail });
    }
    // renormalise the rounded probabilities
    let s: f64 = probs.iter().sum();
    CountPmf::new(probs.into_iter().map(|v| v / s).collect())
}

/// Mean of [`ripley_count_pmf`] with `n_max` starting at `max(4 beta, 200)`
/// and doubling until the tail check passes.
pub fn ripley_count_mean(p: &StraussParams) -> Result<f64> {
    let mut n_max = ((4.0 * p.beta()) as usize).max(200);
    loop {
        match ripley_count_pmf(p, n_max) {
            Ok(pmf) => return Ok(pmf.mean()),
            Err(Error::TailTooHeavy { .. }) if n_max < 1 << 24 => n_max *= 2,
            Err(e) => return Err(e),
        }
    }
}
