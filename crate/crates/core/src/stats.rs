//! Small descriptive and goodness-of-fit helpers used by the tests and the
//! study harness.

use alloc::vec::Vec;

use crate::math::{ceil, exp, floor, sqrt};

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Unbiased sample variance; `NaN` for fewer than two values.
pub fn variance(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return f64::NAN;
    }
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
}

/// Standard error of the mean.
pub fn std_error(v: &[f64]) -> f64 {
    sqrt(variance(v) / v.len() as f64)
}

/// Linear-interpolation quantile (the "type 7" definition). `NaN` on empty
/// input.
pub fn quantile(v: &[f64], q: f64) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s: Vec<f64> = v.to_vec();
    s.sort_by(f64::total_cmp);
    let h = (s.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = floor(h) as usize;
    let hi = (lo + 1).min(s.len() - 1);
    s[lo] + (h - lo as f64) * (s[hi] - s[lo])
}

pub fn median(v: &[f64]) -> f64 {
    quantile(v, 0.5)
}

/// Kolmogorov–Smirnov distance between the empirical law of `v` and the
/// uniform law on `[0, 1]`. Sorts `v` in place.
pub fn ks_statistic_uniform(v: &mut [f64]) -> f64 {
    ks_statistic(v, |x| x.clamp(0.0, 1.0), |x| x.clamp(0.0, 1.0))
}

/// KS distance to the discrete uniform law on `{1/m, 2/m, ..., 1}`, the null
/// law of a Monte Carlo p-value from `m - 1` simulations.
pub fn ks_statistic_discrete_uniform(v: &mut [f64], m: usize) -> f64 {
    let mf = m as f64;
    // small slack absorbs rounding in p = k / m
    let at = move |x: f64| (floor(x * mf + 1e-9) / mf).clamp(0.0, 1.0);
    let before = move |x: f64| ((ceil(x * mf - 1e-9) - 1.0) / mf).clamp(0.0, 1.0);
    ks_statistic(v, at, before)
}

/// `sup |F_n - F|` where `cdf(x) = F(x)` and `cdf_left(x) = F(x-)`.
pub fn ks_statistic(v: &mut [f64], cdf: impl Fn(f64) -> f64, cdf_left: impl Fn(f64) -> f64) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        let mut j = i;
        while j < v.len() && v[j] == x {
            j += 1;
        }
        d = d.max((cdf(x) - j as f64 / n).abs()).max((cdf_left(x) - i as f64 / n).abs());
        i = j;
    }
    d
}

/// Asymptotic Kolmogorov tail probability `P(D_n >= d)` with the usual
/// small-sample correction of the scale.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = sqrt(n as f64);
    let lam = (sn + 0.12 + 0.11 / sn) * d;
    if lam < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let t = exp(-2.0 * kf * kf * lam * lam);
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        let v = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(median(&v), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert!((variance(&v) - 5.0 / 3.0).abs() < 1e-15);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn ks_on_a_perfect_grid() {
        let mut v: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        assert!((ks_statistic_uniform(&mut v) - 0.1).abs() < 1e-15);
        assert!(ks_statistic_discrete_uniform(&mut v, 10) < 1e-12);
        let mut all_one = [1.0; 4];
        assert!((ks_statistic_discrete_uniform(&mut all_one, 10) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn kolmogorov_tail_matches_tables() {
        // 1.358 / sqrt(n) is the 5% critical value for large n
        let p = ks_p_value(1.358 / sqrt(1e6), 1_000_000);
        assert!((p - 0.05).abs() < 5e-4, "{p}");
        let p1 = ks_p_value(1.628 / sqrt(1e6), 1_000_000);
        assert!((p1 - 0.01).abs() < 2e-4, "{p1}");
        assert_eq!(ks_p_value(0.0, 50), 1.0);
    }
}
