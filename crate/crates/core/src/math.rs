//! Float helpers routed through `libm` so results do not depend on the
//! platform maths library.

pub(crate) use libm::{ceil, cos, exp, expm1, fabs as abs, floor, lgamma as ln_gamma, log as ln, pow, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;

/// `base^k` for a nonnegative integer exponent, with `0^0 = 1`.
pub(crate) fn powu(base: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut acc = 1.0;
    let mut b = base;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// `gamma^delta` for a signed integer exponent, with `0^0 = 1` and
/// `0^(-k) = +inf`.
pub(crate) fn powi(base: f64, k: i64) -> f64 {
    if k >= 0 {
        powu(base, k as u32)
    } else if base == 0.0 {
        f64::INFINITY
    } else {
        1.0 / powu(base, (-k) as u32)
    }
}

/// Numerically stable `log(sum(exp(v)))`.
pub(crate) fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + ln(v.iter().map(|&x| exp(x - m)).sum::<f64>())
}

pub(crate) fn ln_poisson_pmf(n: usize, mean: f64) -> f64 {
    if mean <= 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    n as f64 * ln(mean) - mean - ln_gamma(n as f64 + 1.0)
}
