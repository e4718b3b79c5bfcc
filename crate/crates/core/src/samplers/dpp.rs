//! Determinantal point process simulation from a truncated spectrum.
//!
//! A draw picks a set of active eigenfunctions (independent Bernoulli
//! variables, or conditioned on their sum) and then samples the projection
//! process they span by sequential rejection with Gram–Schmidt updates.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::geom::{Point, PointPattern, Window};
use crate::math::{cos, sin, sqrt, PI};
use crate::models::DppSpectrum;

pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;

/// Exact sampler for the indices of `n` successes among independent
/// `Bernoulli(lambda_i)`, given exactly `n` successes.
///
/// Successive indices are proposed by inversion from
/// `p(k | l) ∝ lambda_k prod_{l<j<k} (1 - lambda_j)`, and the vector is kept
/// with probability `prod_{k > i_n} (1 - lambda_k)`. Each proposal step also
/// fails with probability `prod_{j > l} (1 - lambda_j)` (no further success),
/// which restarts the attempt.
#[derive(Debug, Clone)]
pub struct IndexSampler<'a> {
    lambdas: &'a [f64],
    /// `tail[k] = prod_{j >= k} (1 - lambda_j)`, `tail[len] = 1`.
    tail: Vec<f64>,
}

impl<'a> IndexSampler<'a> {
    pub fn new(lambdas: &'a [f64]) -> Self {
        let mut tail = alloc::vec![1.0; lambdas.len() + 1];
        for k in (0..lambdas.len()).rev() {
            tail[k] = tail[k + 1] * (1.0 - lambdas[k]);
        }
        IndexSampler { lambdas, tail }
    }

    /// Next success strictly after position `from` (0-based start), or `None`
    /// when there is none.
    fn propose<R: Rng + ?Sized>(&self, from: usize, rng: &mut R) -> Option<usize> {
        let reach = 1.0 - self.tail[from];
        let u = rng.random::<f64>();
        if !(u < reach) {
            return None;
        }
        let mut run = 1.0;
        let mut cum = 0.0;
        let mut last = None;
        for k in from..self.lambdas.len() {
            let l = self.lambdas[k];
            if l > 0.0 {
                cum += l * run;
                last = Some(k);
                if cum >= u {
                    return Some(k);
                }
            }
            run *= 1.0 - l;
            if run == 0.0 {
                break;
            }
        }
        // rounding left u just above the accumulated mass
        last
    }

    /// Sorted 0-based indices.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, max_attempts: usize, rng: &mut R) -> Result<Vec<usize>> {
        let available = self.lambdas.iter().filter(|&&l| l > 0.0).count();
        if n > available {
            return Err(Error::InfeasibleCount { requested: n, available });
        }
        if max_attempts == 0 {
            return Err(invalid("max_attempts must be at least 1"));
        }
        let mut idx = Vec::with_capacity(n);
        'attempt: for _ in 0..max_attempts {
            idx.clear();
            let mut from = 0;
            for _ in 0..n {
                match self.propose(from, rng) {
                    Some(k) => {
                        idx.push(k);
                        from = k + 1;
                    }
                    None => continue 'attempt,
                }
            }
            if rng.random::<f64>() < self.tail[from] {
                return Ok(idx);
            }
        }
        Err(Error::AttemptsExhausted { attempts: max_attempts })
    }
}

/// Values of the selected orthonormal Fourier basis functions at `u`.
fn basis_at(freqs: &[[i32; 2]], w: &Window, scale: f64, u: &Point, out: &mut [Complex64]) {
    let fx = (u.x - w.xmin()) / w.width();
    let fy = (u.y - w.ymin()) / w.height();
    for (o, k) in out.iter_mut().zip(freqs) {
        let a = 2.0 * PI * (k[0] as f64 * fx + k[1] as f64 * fy);
        *o = Complex64::new(scale * cos(a), scale * sin(a));
    }
}

/// Projection DPP with kernel `sum_k phi_k(u) conj(phi_k(v))` over `freqs`.
pub fn projection<R: Rng + ?Sized>(freqs: &[[i32; 2]], w: &Window, rng: &mut R) -> PointPattern {
    let n = freqs.len();
    let scale = 1.0 / sqrt(w.area());
    // squared norm of the basis vector at any location
    let full = n as f64 / w.area();
    let mut ortho: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut pts = Vec::with_capacity(n);
    let mut v = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut coef = Vec::with_capacity(n);
    while pts.len() < n {
        let u = w.point_at(rng.random(), rng.random());
        basis_at(freqs, w, scale, &u, &mut v);
        coef.clear();
        let mut proj = 0.0;
        for e in &ortho {
            let c: Complex64 = e.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            proj += c.norm_sqr();
            coef.push(c);
        }
        let resid = (full - proj).max(0.0);
        if rng.random::<f64>() * full >= resid {
            continue;
        }
        for (e, c) in ortho.iter().zip(&coef) {
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= c * ei;
            }
        }
        let norm = sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if !(norm > 0.0) {
            continue;
        }
        ortho.push(v.iter().map(|z| z / norm).collect());
        pts.push(u);
    }
    PointPattern::from_trusted(pts, *w)
}

fn check_window(s: &DppSpectrum, w: &Window) -> Result<()> {
    if s.window() != w {
        return Err(invalid("spectrum was computed for a different window"));
    }
    Ok(())
}

pub fn unconditional<R: Rng + ?Sized>(s: &DppSpectrum, w: &Window, rng: &mut R) -> Result<PointPattern> {
    check_window(s, w)?;
    let freqs: Vec<[i32; 2]> = s
        .eigenvalues()
        .iter()
        .zip(s.frequencies())
        .filter(|(l, _)| rng.random::<f64>() < **l)
        .map(|(_, k)| *k)
        .collect();
    Ok(projection(&freqs, w, rng))
}

pub fn conditional<R: Rng + ?Sized>(
    n: usize,
    s: &DppSpectrum,
    w: &Window,
    max_attempts: usize,
    rng: &mut R,
) -> Result<PointPattern> {
    check_window(s, w)?;
    let idx = IndexSampler::new(s.eigenvalues()).sample(n, max_attempts, rng)?;
    let freqs: Vec<[i32; 2]> = idx.iter().map(|&i| s.frequencies()[i]).collect();
    Ok(projection(&freqs, w, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{dpp_spectrum, DppGaussParams, DEFAULT_SPECTRUM_EPS};
    use crate::seed::SeedSpec;
    use alloc::vec;

    /// Conditional law of the success set by enumerating all `2^len` outcomes.
    fn enumerate(lam: &[f64], n: usize) -> Vec<(Vec<usize>, f64)> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << lam.len()) {
            if mask.count_ones() as usize != n {
                continue;
            }
            let mut p = 1.0;
            let mut set = Vec::new();
            for (i, l) in lam.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p *= l;
                    set.push(i);
                } else {
                    p *= 1.0 - l;
                }
            }
            out.push((set, p));
        }
        let z: f64 = out.iter().map(|x| x.1).sum();
        out.iter_mut().for_each(|x| x.1 /= z);
        out
    }

    #[test]
    fn single_success_frequencies() {
        let lam = [0.9, 0.5, 0.1];
        let exact = enumerate(&lam, 1);
        let s = IndexSampler::new(&lam);
        let mut rng = SeedSpec::new(1, 0).rng();
        let mut hits = [0usize; 3];
        let draws = 20_000;
        for _ in 0..draws {
            hits[s.sample(1, 1000, &mut rng).unwrap()[0]] += 1;
        }
        for (i, (set, p)) in exact.iter().enumerate() {
            assert_eq!(set, &vec![i]);
            let f = hits[i] as f64 / draws as f64;
            assert!((f - p).abs() < 4.0 * (p * (1.0 - p) / draws as f64).sqrt() + 1e-3, "{i}: {f} vs {p}");
        }
    }

    #[test]
    fn infeasible_and_forced_counts() {
        let lam = [1.0, 0.4, 0.0];
        let s = IndexSampler::new(&lam);
        let mut rng = SeedSpec::new(2, 0).rng();
        assert!(matches!(s.sample(3, 10, &mut rng), Err(Error::InfeasibleCount { requested: 3, available: 2 })));
        assert_eq!(s.sample(2, 1000, &mut rng).unwrap(), vec![0, 1]);
        assert_eq!(s.sample(1, 1000, &mut rng).unwrap(), vec![0]);
        assert!(matches!(s.sample(0, 5, &mut rng), Err(Error::AttemptsExhausted { attempts: 5 })));
        assert!(IndexSampler::new(&[0.3]).sample(0, 10, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn projection_count_and_repulsion() {
        let w = Window::unit();
        let p = DppGaussParams::new(100.0, DppGaussParams::kappa_max(100.0)).unwrap();
        let s = dpp_spectrum(&p, &w, DEFAULT_SPECTRUM_EPS).unwrap();
        let mut rng = SeedSpec::new(3, 0).rng();
        let x = conditional(100, &s, &w, DEFAULT_MAX_ATTEMPTS, &mut rng).unwrap();
        assert_eq!(x.len(), 100);
        // expected close pairs under complete randomness: C(100,2) * pi r^2
        let r = 0.02;
        let poisson_pairs = 4950.0 * PI * r * r;
        let mut total = 0;
        for k in 0..20 {
            let y = conditional(100, &s, &w, DEFAULT_MAX_ATTEMPTS, &mut SeedSpec::new(3, k).rng()).unwrap();
            total += y.close_pair_count(r);
        }
        assert!((total as f64 / 20.0) < 0.5 * poisson_pairs, "{total}");
    }

    #[test]
    fn unconditional_mean_count() {
        let w = Window::unit();
        let p = DppGaussParams::new(50.0, 0.04).unwrap();
        let s = dpp_spectrum(&p, &w, DEFAULT_SPECTRUM_EPS).unwrap();
        let reps = 200;
        let mean = (0..reps)
            .map(|k| unconditional(&s, &w, &mut SeedSpec::new(4, k).rng()).unwrap().len() as f64)
            .sum::<f64>()
            / reps as f64;
        let var: f64 = s.eigenvalues().iter().map(|l| l * (1.0 - l)).sum();
        assert!((mean - s.mass()).abs() < 4.0 * (var / reps as f64).sqrt(), "{mean}");
    }

    #[test]
    fn rejects_foreign_window() {
        let s = DppSpectrum::from_eigenvalues(Window::unit(), vec![0.5]).unwrap();
        let w = Window::new(0.0, 2.0, 0.0, 1.0).unwrap();
        assert!(unconditional(&s, &w, &mut SeedSpec::new(0, 0).rng()).is_err());
    }
}
