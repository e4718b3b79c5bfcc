//! Small derivative-free optimisers and a monotone root finder.

use alloc::vec::Vec;

use crate::math::{abs, sqrt};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Scalar {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Golden-section minimisation of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> Scalar {
    let g = (sqrt(5.0) - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut it = 0;
    while abs(hi - lo) > xtol && it < max_iter {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
        it += 1;
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    // the ends may beat the interior when the minimum sits on a bound
    let (fl, fh) = (f(lo), f(hi));
    let (x, fx) = if fl < fx { (lo, fl) } else { (x, fx) };
    let (x, fx) = if fh < fx { (hi, fh) } else { (x, fx) };
    Scalar { x, f: fx, iterations: it, converged: abs(hi - lo) <= xtol }
}

/// Root of a nonincreasing function on `[lo, hi]` with `f(lo) >= 0 >= f(hi)`.
/// Bisection with secant steps when they stay inside the bracket.
pub(crate) fn decreasing_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> Scalar {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    let mut it = 0;
    while hi - lo > xtol && it < max_iter {
        let mid = 0.5 * (lo + hi);
        let secant = if flo.is_finite() && fhi.is_finite() && flo != fhi {
            lo + flo * (hi - lo) / (flo - fhi)
        } else {
            mid
        };
        // alternate secant and bisection so the bracket always shrinks
        let x = if it % 2 == 0 && secant > lo && secant < hi { secant } else { mid };
        let fx = f(x);
        if fx == 0.0 {
            return Scalar { x, f: 0.0, iterations: it + 1, converged: true };
        }
        if fx > 0.0 {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        it += 1;
    }
    let (x, fx) = if abs(flo) <= abs(fhi) { (lo, flo) } else { (hi, fhi) };
    Scalar { x, f: fx, iterations: it, converged: hi - lo <= xtol }
}

#[derive(Debug, Clone)]
pub(crate) struct Simplex {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead on a box: every trial point is projected onto `[lo, hi]`.
pub(crate) fn nelder_mead_box(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    step: &[f64],
    lo: &[f64],
    hi: &[f64],
    xtol: f64,
    max_iter: usize,
) -> Simplex {
    let n = start.len();
    let project = |mut v: Vec<f64>| {
        for k in 0..n {
            v[k] = v[k].clamp(lo[k], hi[k]);
        }
        v
    };
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(project(start.to_vec()));
    for k in 0..n {
        let mut v = pts[0].clone();
        v[k] += step[k];
        if v[k] > hi[k] {
            v[k] = pts[0][k] - step[k];
        }
        pts.push(project(v));
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut it = 0;
    let mut converged = false;
    while it < max_iter {
        // order
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = idx.iter().map(|&i| pts[i].clone()).collect();
        vals = idx.iter().map(|&i| vals[i]).collect();
        let size = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| abs(a - b)).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if size <= xtol {
            converged = true;
            break;
        }
        it += 1;
        let centroid: Vec<f64> = (0..n).map(|k| pts[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| project((0..n).map(|k| centroid[k] + t * (pts[n][k] - centroid[k])).collect());
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = along(-0.5);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(0.5);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < vals[n].min(fr) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        // shrink towards the best vertex
        for i in 1..=n {
            let v: Vec<f64> = (0..n).map(|k| pts[0][k] + 0.5 * (pts[i][k] - pts[0][k])).collect();
            pts[i] = project(v);
            vals[i] = f(&pts[i]);
        }
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    Simplex { x: pts[best].clone(), f: vals[best], iterations: it, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let r = golden_section(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10, 200);
        assert!((r.x - 0.3).abs() < 1e-8 && r.converged);
        let b = golden_section(|x| x, 0.0, 1.0, 1e-10, 200);
        assert_eq!(b.x, 0.0);
    }

    #[test]
    fn root_of_decreasing_function() {
        let r = decreasing_root(|x| 2.0 - x * x * x, 0.0, 3.0, 1e-13, 500);
        assert!((r.x - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn nelder_mead_rosenbrock_in_box() {
        let f = |v: &[f64]| (1.0 - v[0]).powi(2) + 100.0 * (v[1] - v[0] * v[0]).powi(2);
        let r = nelder_mead_box(f, &[-1.0, 1.5], &[0.5, 0.5], &[-2.0, -2.0], &[2.0, 3.0], 1e-10, 5000);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
        // constrained optimum on the boundary
        let g = |v: &[f64]| (v[0] - 5.0).powi(2) + (v[1] - 0.5).powi(2);
        let r = nelder_mead_box(g, &[0.0, 0.0], &[0.3, 0.3], &[-1.0, -1.0], &[1.0, 1.0], 1e-10, 5000);
        assert!((r.x[0] - 1.0).abs() < 1e-8 && (r.x[1] - 0.5).abs() < 1e-6);
    }
}
