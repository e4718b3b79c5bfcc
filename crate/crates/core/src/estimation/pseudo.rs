//! Strauss pseudo-likelihoods with `R` known, evaluated by midpoint
//! quadrature on a lattice over the eroded window `D = W ⊖ R`.
//!
//! Both objectives depend on the data only through histograms of the
//! neighbour count `t(x, u)` over the lattice, so each evaluation costs
//! `O(max t)` per histogram.

use alloc::vec::Vec;

use super::{FitResult, FittedParams};
use crate::cells::CellIndex;
use crate::error::{invalid, Error, Result};
use crate::geom::{Point, PointPattern, Window};
use crate::math::{exp, ln};
use crate::models::StraussParams;
use crate::optim::decreasing_root;

pub const DEFAULT_QUAD_RESOLUTION: usize = 256;

/// 41 equally spaced values from 0.03 to 0.07.
pub fn default_r_grid() -> Vec<f64> {
    (0..41).map(|k| 0.03 + 0.001 * k as f64).collect()
}

/// Lattice point counts by neighbour count, `counts[t]`.
#[derive(Debug, Clone, PartialEq)]
struct Histogram {
    counts: Vec<f64>,
}

impl Histogram {
    /// `ln sum_t c_t e^{psi t} - shift` and the tilted mean and variance of
    /// `t`. `psi = -inf` keeps only `t = 0`.
    fn tilted(&self, psi: f64) -> (f64, f64, f64) {
        let term = |t: usize| if t == 0 { 0.0 } else { psi * t as f64 };
        let shift = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0.0)
            .map(|(t, _)| term(t))
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (t, &c) in self.counts.iter().enumerate() {
            if c > 0.0 {
                let wgt = c * exp(term(t) - shift);
                let tf = t as f64;
                s0 += wgt;
                s1 += wgt * tf;
                s2 += wgt * tf * tf;
            }
        }
        let mean = s1 / s0;
        (shift + ln(s0), mean, (s2 / s0 - mean * mean).max(0.0))
    }

    fn has_positive(&self) -> bool {
        self.counts.iter().skip(1).any(|&c| c > 0.0)
    }
}

/// Neighbour counts shared by both pseudo-likelihoods.
struct Quadrature {
    domain: Window,
    cell_area: f64,
    resolution: usize,
    /// `t(x, u)` per lattice point, row-major.
    t: Vec<u32>,
    base: Histogram,
    /// Data points in the domain and their neighbour counts among the rest
    /// of `x`.
    interior: Vec<(Point, u32)>,
}

impl Quadrature {
    fn new(x: &PointPattern, r: f64, border: f64, resolution: usize) -> Result<Self> {
        if !(r > 0.0) {
            return Err(invalid("interaction radius must be positive"));
        }
        if !(border >= r) {
            return Err(invalid("border must be at least the interaction radius"));
        }
        if resolution < 2 {
            return Err(invalid("quadrature resolution must be at least 2"));
        }
        let domain = x.window().erode(border)?;
        let index = CellIndex::from_points(x.window(), r, x.points());
        let interior: Vec<(Point, u32)> = x
            .points()
            .iter()
            .enumerate()
            .filter(|(_, p)| domain.contains(p))
            .map(|(i, p)| (*p, index.count_within(p, r, Some(i))))
            .collect();
        if interior.is_empty() {
            return Err(Error::NoInteriorPoints);
        }
        let mut t = Vec::with_capacity(resolution * resolution);
        let mut counts = Vec::new();
        for c in 0..resolution * resolution {
            let u = Self::node(&domain, resolution, c % resolution, c / resolution);
            let k = index.count_within(&u, r, None);
            if counts.len() <= k as usize {
                counts.resize(k as usize + 1, 0.0);
            }
            counts[k as usize] += 1.0;
            t.push(k);
        }
        Ok(Quadrature {
            cell_area: domain.area() / (resolution * resolution) as f64,
            domain,
            resolution,
            t,
            base: Histogram { counts },
            interior,
        })
    }

    #[inline]
    fn node(domain: &Window, res: usize, i: usize, j: usize) -> Point {
        let step = 1.0 / res as f64;
        domain.point_at((i as f64 + 0.5) * step, (j as f64 + 0.5) * step)
    }

    /// Histogram of `t(x \ {x_i}, u)`: lattice points within `r` of `x_i`
    /// lose one neighbour.
    fn leave_one_out(&self, p: &Point, r: f64) -> Histogram {
        let mut h = self.base.clone();
        let res = self.resolution;
        let to_index = |v: f64, lo: f64, width: f64| (v - lo) / width * res as f64 - 0.5;
        let span = |v: f64, lo: f64, width: f64| {
            let a = libm::floor(to_index(v - r, lo, width)).max(0.0) as usize;
            let b = (libm::ceil(to_index(v + r, lo, width)).max(0.0) as usize).min(res - 1);
            (a, b)
        };
        let d = &self.domain;
        let (i0, i1) = span(p.x, d.xmin(), d.width());
        let (j0, j1) = span(p.y, d.ymin(), d.height());
        for j in j0..=j1 {
            for i in i0..=i1 {
                let u = Self::node(d, res, i, j);
                if u.dist2(p) <= r * r {
                    let t = self.t[j * res + i] as usize;
                    h.counts[t] -= 1.0;
                    h.counts[t - 1] += 1.0;
                }
            }
        }
        h
    }
}

/// Profile log pseudo-likelihood of the Strauss model on `D`, with
/// `beta` profiled out:
/// `pl(psi) = m ln m - m - m ln I(psi) + psi T`,
/// `I(psi) = ∫_D e^{psi t(x, u)} du`, `T = sum_{x_i in D} t(x \ {x_i}, x_i)`.
pub struct PseudoLikelihood {
    quad: Quadrature,
    m: f64,
    t_sum: f64,
    r: f64,
}

impl PseudoLikelihood {
    /// Estimation domain `W ⊖ R`.
    pub fn new(x: &PointPattern, r: f64, resolution: usize) -> Result<Self> {
        Self::with_border(x, r, r, resolution)
    }

    /// Estimation domain `W ⊖ border`, `border >= R`.
    pub fn with_border(x: &PointPattern, r: f64, border: f64, resolution: usize) -> Result<Self> {
        let quad = Quadrature::new(x, r, border, resolution)?;
        let m = quad.interior.len() as f64;
        let t_sum = quad.interior.iter().map(|(_, t)| *t as f64).sum();
        Ok(PseudoLikelihood { quad, m, t_sum, r })
    }

    pub fn interior_count(&self) -> usize {
        self.quad.interior.len()
    }

    /// `T`, the neighbour-count sum over interior points.
    pub fn neighbour_sum(&self) -> f64 {
        self.t_sum
    }

    fn ln_integral(&self, psi: f64) -> f64 {
        ln(self.quad.cell_area) + self.quad.base.tilted(psi).0
    }

    pub fn value(&self, psi: f64) -> f64 {
        let tilt = if self.t_sum == 0.0 { 0.0 } else { psi * self.t_sum };
        self.m * ln(self.m) - self.m - self.m * self.ln_integral(psi) + tilt
    }

    pub fn score(&self, psi: f64) -> f64 {
        self.t_sum - self.m * self.quad.base.tilted(psi).1
    }

    pub fn second_derivative(&self, psi: f64) -> f64 {
        -self.m * self.quad.base.tilted(psi).2
    }

    /// `beta(psi) = m / I(psi)`.
    pub fn beta(&self, psi: f64) -> f64 {
        self.m / exp(self.ln_integral(psi))
    }

    pub fn maximise(&self) -> Result<FitResult> {
        let (psi, converged, iterations, boundary) =
            maximise_concave(|s| self.score(s), self.t_sum, self.quad.base.has_positive());
        let gamma = exp(psi);
        let params = StraussParams::new(self.beta(psi), gamma, self.r)?;
        Ok(FitResult { params: FittedParams::Strauss(params), objective: self.value(psi), converged, iterations, boundary })
    }
}

/// Besag's pseudo-likelihood of the interior points given their count:
/// `pl_m(psi) = psi sum_i t_i - sum_i ln ∫_D e^{psi t(x \ {x_i}, u)} du`.
pub struct ConditionalPseudoLikelihood {
    hists: Vec<Histogram>,
    cell_area: f64,
    t_sum: f64,
    r: f64,
}

impl ConditionalPseudoLikelihood {
    pub fn new(x: &PointPattern, r: f64, resolution: usize) -> Result<Self> {
        Self::with_border(x, r, r, resolution)
    }

    pub fn with_border(x: &PointPattern, r: f64, border: f64, resolution: usize) -> Result<Self> {
        let quad = Quadrature::new(x, r, border, resolution)?;
        if quad.interior.len() < 2 {
            return Err(Error::NoInteriorPoints);
        }
        let hists = quad.interior.iter().map(|(p, _)| quad.leave_one_out(p, r)).collect();
        let t_sum = quad.interior.iter().map(|(_, t)| *t as f64).sum();
        Ok(ConditionalPseudoLikelihood { hists, cell_area: quad.cell_area, t_sum, r })
    }

    pub fn value(&self, psi: f64) -> f64 {
        let tilt = if self.t_sum == 0.0 { 0.0 } else { psi * self.t_sum };
        let n = self.hists.len() as f64;
        tilt - n * ln(self.cell_area) - self.hists.iter().map(|h| h.tilted(psi).0).sum::<f64>()
    }

    pub fn score(&self, psi: f64) -> f64 {
        self.t_sum - self.hists.iter().map(|h| h.tilted(psi).1).sum::<f64>()
    }

    pub fn second_derivative(&self, psi: f64) -> f64 {
        -self.hists.iter().map(|h| h.tilted(psi).2).sum::<f64>()
    }

    pub fn maximise(&self) -> Result<FitResult> {
        let positive = self.hists.iter().any(Histogram::has_positive);
        let (psi, converged, iterations, boundary) = maximise_concave(|s| self.score(s), self.t_sum, positive);
        Ok(FitResult {
            params: FittedParams::StraussInteraction { gamma: exp(psi), r: self.r },
            objective: self.value(psi),
            converged,
            iterations,
            boundary,
        })
    }
}

/// Maximiser of a concave function of `psi <= 0` from its nonincreasing
/// score. Returns `(psi, converged, iterations, boundary)`.
fn maximise_concave(score: impl Fn(f64) -> f64, t_sum: f64, any_positive: bool) -> (f64, bool, usize, bool) {
    if score(0.0) >= 0.0 {
        return (0.0, true, 0, true);
    }
    if t_sum == 0.0 && any_positive {
        // score < 0 everywhere: the objective increases as gamma -> 0
        return (f64::NEG_INFINITY, true, 0, true);
    }
    let mut lo = -1.0;
    while score(lo) <= 0.0 {
        lo *= 2.0;
        if lo < -1e3 {
            return (f64::NEG_INFINITY, true, 0, true);
        }
    }
    let s = decreasing_root(&score, lo, 0.0, 1e-12, 500);
    (s.x, s.converged, s.iterations, false)
}

/// Maximum pseudo-likelihood for `(beta, gamma)` of a Strauss process with
/// known `R`.
pub fn mple_strauss(x: &PointPattern, r: f64, resolution: usize) -> Result<FitResult> {
    PseudoLikelihood::new(x, r, resolution)?.maximise()
}

/// Maximum conditional pseudo-likelihood for `gamma` given the number of
/// interior points.
pub fn mple_strauss_conditional(x: &PointPattern, r: f64, resolution: usize) -> Result<FitResult> {
    ConditionalPseudoLikelihood::new(x, r, resolution)?.maximise()
}

/// Profile over `R`: the unconditional fit with the largest pseudo-likelihood,
/// smallest `R` on ties. Every candidate uses the domain `W ⊖ max(r_grid)` so
/// the pseudo-likelihoods are comparable.
pub fn profile_mple_r(x: &PointPattern, r_grid: &[f64], resolution: usize) -> Result<FitResult> {
    if r_grid.is_empty() {
        return Err(invalid("R grid must not be empty"));
    }
    let border = r_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<(f64, FitResult)> = None;
    for &r in r_grid {
        let fit = PseudoLikelihood::with_border(x, r, border, resolution)?.maximise()?;
        let better = match &best {
            None => true,
            Some((br, b)) => fit.objective > b.objective || (fit.objective == b.objective && r < *br),
        };
        if better {
            best = Some((r, fit));
        }
    }
    Ok(best.map(|b| b.1).expect("grid is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PoissonParams;
    use alloc::vec;
    use crate::samplers::{poisson, strauss, ChainConfig};
    use crate::seed::SeedSpec;
    use proptest::prelude::*;

    fn grid_pattern(spacing: f64) -> PointPattern {
        let k = (1.0 / spacing) as usize;
        let pts = (0..k * k)
            .map(|c| Point::new(spacing * ((c % k) as f64 + 0.5), spacing * ((c / k) as f64 + 0.5)))
            .collect();
        PointPattern::new(pts, Window::unit()).unwrap()
    }

    #[test]
    fn no_close_pairs_gives_hard_core() {
        // spacing 0.1 with R = 0.06: no data pair is R-close, yet lattice
        // points between data points have neighbours
        let x = grid_pattern(0.1);
        let u = mple_strauss(&x, 0.06, 64).unwrap();
        assert_eq!(u.gamma(), Some(0.0));
        assert!(u.boundary);
        let c = mple_strauss_conditional(&x, 0.06, 64).unwrap();
        assert_eq!(c.gamma(), Some(0.0));
    }

    #[test]
    fn tiny_radius_reduces_to_poisson() {
        let x = poisson::poisson(&PoissonParams::new(50.0).unwrap(), &Window::unit(), &mut SeedSpec::new(3, 3).rng());
        let r = 1e-9;
        let pl = PseudoLikelihood::new(&x, r, 64).unwrap();
        let fit = pl.maximise().unwrap();
        let FittedParams::Strauss(p) = fit.params else { panic!() };
        let d = Window::unit().erode(r).unwrap();
        let m = x.points().iter().filter(|q| d.contains(q)).count() as f64;
        assert_eq!(p.gamma(), 1.0);
        assert!((p.beta() - m / d.area()).abs() < 1e-12 * p.beta());
    }

    #[test]
    fn leave_one_out_moves_the_right_mass() {
        let x = grid_pattern(0.125);
        let q = Quadrature::new(&x, 0.05, 0.05, 100).unwrap();
        let (p, _) = q.interior[5];
        let h = q.leave_one_out(&p, 0.05);
        let total: f64 = h.counts.iter().sum();
        assert_eq!(total, 100.0 * 100.0);
        // brute force histogram of t(x \ {p}, u)
        let mut brute = vec![0.0; h.counts.len()];
        for c in 0..100 * 100 {
            let u = Quadrature::node(&q.domain, 100, c % 100, c / 100);
            let t = x.points().iter().filter(|y| **y != p && y.dist2(&u) <= 0.0025).count();
            brute[t] += 1.0;
        }
        assert_eq!(h.counts, brute);
    }

    #[test]
    fn rejects_patterns_without_interior_points() {
        let x = PointPattern::new(vec![Point::new(0.01, 0.5)], Window::unit()).unwrap();
        assert_eq!(mple_strauss(&x, 0.05, 32).err(), Some(Error::NoInteriorPoints));
        let y = PointPattern::new(vec![Point::new(0.5, 0.5)], Window::unit()).unwrap();
        assert_eq!(mple_strauss_conditional(&y, 0.05, 32).err(), Some(Error::NoInteriorPoints));
    }

    #[test]
    fn strauss_data_recovers_interaction() {
        let p = StraussParams::new(200.0, 0.3, 0.05).unwrap();
        let cfg = ChainConfig { burnin: 400, ..ChainConfig::unconditional() };
        let mut g = Vec::new();
        for rep in 0..20 {
            let x = strauss::unconditional(&p, &Window::unit(), &cfg, &mut SeedSpec::new(40, rep).rng()).unwrap();
            g.push(mple_strauss(&x, 0.05, 128).unwrap().gamma().unwrap());
        }
        let med = crate::stats::median(&g);
        assert!((0.15..=0.45).contains(&med), "median gamma {med}");
    }

    #[test]
    fn profile_over_single_radius_matches_direct_fit() {
        let x = poisson::poisson(&PoissonParams::new(100.0).unwrap(), &Window::unit(), &mut SeedSpec::new(8, 0).rng());
        assert_eq!(profile_mple_r(&x, &[0.05], 64).unwrap(), mple_strauss(&x, 0.05, 64).unwrap());
        assert!(profile_mple_r(&x, &[], 64).is_err());
        let g = default_r_grid();
        assert_eq!(g.len(), 41);
        assert!((g[0] - 0.03).abs() < 1e-15 && (g[40] - 0.07).abs() < 1e-12);
    }

    fn random_pattern(seed: u64, n: usize) -> PointPattern {
        crate::samplers::poisson::binomial(n, &Window::unit(), &mut SeedSpec::new(seed, 0).rng())
    }

    fn relative_gap(analytic: f64, numeric: f64) -> f64 {
        (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-300)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scores_match_central_differences(seed in 0u64..10_000, n in 40usize..160, psi in -3.0..-0.05f64) {
            let x = random_pattern(seed, n);
            let h = 1e-5;
            let pl = PseudoLikelihood::new(&x, 0.05, 64).unwrap();
            let fd = (pl.value(psi + h) - pl.value(psi - h)) / (2.0 * h);
            prop_assert!(relative_gap(pl.score(psi), fd) < 1e-5, "{} vs {}", pl.score(psi), fd);
            let cpl = ConditionalPseudoLikelihood::new(&x, 0.05, 64).unwrap();
            let fd = (cpl.value(psi + h) - cpl.value(psi - h)) / (2.0 * h);
            prop_assert!(relative_gap(cpl.score(psi), fd) < 1e-5, "{} vs {}", cpl.score(psi), fd);
        }

        #[test]
        fn both_objectives_are_concave(seed in 0u64..10_000, n in 40usize..160) {
            let x = random_pattern(seed, n);
            let pl = PseudoLikelihood::new(&x, 0.05, 64).unwrap();
            let cpl = ConditionalPseudoLikelihood::new(&x, 0.05, 64).unwrap();
            let h = 0.05;
            for k in 0..60 {
                let psi = -4.0 + 0.065 * k as f64;
                let d2 = pl.value(psi + h) - 2.0 * pl.value(psi) + pl.value(psi - h);
                prop_assert!(d2 <= 1e-9 * pl.value(psi).abs());
                let d2c = cpl.value(psi + h) - 2.0 * cpl.value(psi) + cpl.value(psi - h);
                prop_assert!(d2c <= 1e-9 * cpl.value(psi).abs());
                prop_assert!(pl.second_derivative(psi) <= 0.0 && cpl.second_derivative(psi) <= 0.0);
            }
        }
    }
}
