//! Markov chain samplers for the Strauss process on an extended region
//! `W_ext`, the observation window dilated by a margin.
//!
//! * Unconditional: birth–death Metropolis–Hastings on `W_ext`.
//! * Conditional on `N(W) = n`: Gibbs within Metropolis–Hastings, alternating
//!   fixed-count single-point replacement moves in `W` with birth–death
//!   updates of the boundary configuration on `A = W_ext \ W`.
//!
//! One unconditional iteration is `ceil(beta |W_ext|)` birth–death proposals.
//! One conditional iteration is `n` replacement proposals followed by
//! [`ChainConfig::boundary_proposals`] boundary proposals.

use alloc::vec::Vec;

use rand::Rng;

use crate::cells::CellIndex;
use crate::error::{invalid, Result};
use crate::geom::{Point, PointPattern, Window};
use crate::math::{ceil, powi, powu};
use crate::models::StraussParams;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ChainConfig {
    pub burnin: usize,
    /// Width of the extension beyond `W`; `None` means `2R`. `Some(0.0)`
    /// simulates the process on `W` itself (free boundary).
    pub margin: Option<f64>,
    /// Iterations between retained states in [`unconditional_run`].
    pub thinning: usize,
    /// Boundary birth–death proposals per conditional iteration.
    pub boundary_proposals: usize,
}

impl ChainConfig {
    /// Burn-in 4000.
    pub const fn unconditional() -> Self {
        ChainConfig { burnin: 4000, margin: None, thinning: 1, boundary_proposals: 10 }
    }

    /// Burn-in 1000.
    pub const fn conditional() -> Self {
        ChainConfig { burnin: 1000, margin: None, thinning: 1, boundary_proposals: 10 }
    }

    /// Unconditional defaults without an extension: the density
    /// `beta^n gamma^s` lives on `W`, as in the approximate count law.
    pub const fn free_boundary() -> Self {
        ChainConfig { burnin: 4000, margin: Some(0.0), thinning: 1, boundary_proposals: 10 }
    }

    pub fn margin_for(&self, r: f64) -> f64 {
        self.margin.unwrap_or(2.0 * r)
    }

    fn extended(&self, w: &Window, p: &StraussParams) -> Result<Window> {
        let m = self.margin_for(p.r());
        if !(m == 0.0 || m >= p.r()) {
            return Err(invalid("chain margin must be zero or at least the interaction radius"));
        }
        if self.thinning == 0 {
            return Err(invalid("thinning must be positive"));
        }
        w.dilate(m)
    }
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig::unconditional()
    }
}

/// Number of points in `W` after each iteration, for trace plots.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChainTrace {
    pub counts: Vec<usize>,
}

#[inline]
fn uniform_in<R: Rng + ?Sized>(w: &Window, rng: &mut R) -> Point {
    w.point_at(rng.random(), rng.random())
}

/// Birth–death chain on a bounded region with Strauss density
/// `beta^n gamma^s` (with respect to the unit Poisson process).
struct BirthDeath {
    region: Window,
    beta: f64,
    gamma: f64,
    r: f64,
    state: CellIndex,
}

impl BirthDeath {
    fn new(region: Window, p: &StraussParams) -> Self {
        BirthDeath { region, beta: p.beta(), gamma: p.gamma(), r: p.r(), state: CellIndex::new(&region, p.r()) }
    }

    fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let bz = self.beta * self.region.area();
        let n = self.state.len();
        if rng.random::<bool>() {
            let u = uniform_in(&self.region, rng);
            let t = self.state.count_within(&u, self.r, None);
            let ratio = bz * powu(self.gamma, t) / (n + 1) as f64;
            if ratio >= 1.0 || rng.random::<f64>() < ratio {
                self.state.insert(u);
            }
        } else if n > 0 {
            let i = rng.random_range(0..n);
            let t = self.state.count_within(&self.state.get(i), self.r, Some(i));
            let g = powu(self.gamma, t);
            // ratio n / (bz g); a zero-density state always accepts removal
            if g == 0.0 || rng.random::<f64>() * bz * g < n as f64 {
                self.state.remove(i);
            }
        }
    }
}

fn restricted(points: &[Point], w: &Window) -> PointPattern {
    PointPattern::from_trusted(points.iter().copied().filter(|p| w.contains(p)).collect(), *w)
}

fn sweep_len(p: &StraussParams, ext: &Window) -> usize {
    let v = p.beta() * ext.area();
    (ceil(v) as usize).max(1)
}

/// Run the birth–death chain from the empty configuration and return the
/// state restricted to `w` after `cfg.burnin` iterations.
pub fn unconditional<R: Rng + ?Sized>(
    p: &StraussParams,
    w: &Window,
    cfg: &ChainConfig,
    rng: &mut R,
) -> Result<PointPattern> {
    Ok(unconditional_traced(p, w, cfg, rng)?.0)
}

pub fn unconditional_traced<R: Rng + ?Sized>(
    p: &StraussParams,
    w: &Window,
    cfg: &ChainConfig,
    rng: &mut R,
) -> Result<(PointPattern, ChainTrace)> {
    let ext = cfg.extended(w, p)?;
    let mut chain = BirthDeath::new(ext, p);
    let sweep = sweep_len(p, &ext);
    let mut trace = ChainTrace { counts: Vec::with_capacity(cfg.burnin) };
    for _ in 0..cfg.burnin {
        for _ in 0..sweep {
            chain.step(rng);
        }
        trace.counts.push(chain.state.points().iter().filter(|q| w.contains(q)).count());
    }
    Ok((restricted(chain.state.points(), w), trace))
}

/// One chain, `n_samples` states spaced `cfg.thinning` iterations apart
/// after the burn-in.
pub fn unconditional_run<R: Rng + ?Sized>(
    p: &StraussParams,
    w: &Window,
    cfg: &ChainConfig,
    n_samples: usize,
    rng: &mut R,
) -> Result<Vec<PointPattern>> {
    let ext = cfg.extended(w, p)?;
    let mut chain = BirthDeath::new(ext, p);
    let sweep = sweep_len(p, &ext);
    let mut out = Vec::with_capacity(n_samples);
    for it in 0..cfg.burnin + n_samples * cfg.thinning {
        for _ in 0..sweep {
            chain.step(rng);
        }
        if it + 1 > cfg.burnin && (it + 1 - cfg.burnin) % cfg.thinning == 0 {
            out.push(restricted(chain.state.points(), w));
        }
    }
    Ok(out)
}

/// State of the conditional sampler: `n` points in `W` and a variable
/// boundary configuration in `A`.
pub(crate) struct Conditional {
    inner: Window,
    outer: Window,
    beta: f64,
    gamma: f64,
    r: f64,
    inside: CellIndex,
    boundary: CellIndex,
}

impl Conditional {
    pub(crate) fn new(inner: Window, outer: Window, p: &StraussParams, start: &[Point]) -> Self {
        Conditional {
            inner,
            outer,
            beta: p.beta(),
            gamma: p.gamma(),
            r: p.r(),
            inside: CellIndex::from_points(&outer, p.r(), start),
            boundary: CellIndex::new(&outer, p.r()),
        }
    }

    fn neighbours(&self, u: &Point, skip_inside: Option<usize>, skip_boundary: Option<usize>) -> i64 {
        (self.inside.count_within(u, self.r, skip_inside) + self.boundary.count_within(u, self.r, skip_boundary))
            as i64
    }

    /// Replace point `i` by `proposal` with probability
    /// `min(1, gamma^(t_new - t_old))`.
    pub(crate) fn replace(&mut self, i: usize, proposal: Point, u: f64) -> bool {
        let old = self.inside.get(i);
        let delta = self.neighbours(&proposal, Some(i), None) - self.neighbours(&old, Some(i), None);
        let ratio = powi(self.gamma, delta);
        if ratio >= 1.0 || u < ratio {
            self.inside.relocate(i, proposal);
            true
        } else {
            false
        }
    }

    fn move_step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.inside.len();
        if n == 0 {
            return;
        }
        let i = rng.random_range(0..n);
        let proposal = uniform_in(&self.inner, rng);
        let u = rng.random();
        self.replace(i, proposal, u);
    }

    fn uniform_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        loop {
            let u = uniform_in(&self.outer, rng);
            if !self.inner.contains(&u) {
                return u;
            }
        }
    }

    fn boundary_step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let bz = self.beta * (self.outer.area() - self.inner.area());
        let m = self.boundary.len();
        if rng.random::<bool>() {
            let u = self.uniform_boundary(rng);
            let t = self.neighbours(&u, None, None);
            let ratio = bz * powi(self.gamma, t) / (m + 1) as f64;
            if ratio >= 1.0 || rng.random::<f64>() < ratio {
                self.boundary.insert(u);
            }
        } else if m > 0 {
            let i = rng.random_range(0..m);
            let t = self.neighbours(&self.boundary.get(i), None, Some(i));
            let g = powi(self.gamma, t);
            if g == 0.0 || rng.random::<f64>() * bz * g < m as f64 {
                self.boundary.remove(i);
            }
        }
    }

    pub(crate) fn inside_points(&self) -> &[Point] {
        self.inside.points()
    }
}

/// Strauss process on `w` conditioned on exactly `n` points in `w`. Starts
/// from `n` uniform points and an empty boundary.
pub fn conditional<R: Rng + ?Sized>(
    n: usize,
    p: &StraussParams,
    w: &Window,
    cfg: &ChainConfig,
    rng: &mut R,
) -> Result<PointPattern> {
    let ext = cfg.extended(w, p)?;
    let start: Vec<Point> = (0..n).map(|_| uniform_in(w, rng)).collect();
    let boundary = if ext == *w { 0 } else { cfg.boundary_proposals };
    let mut state = Conditional::new(*w, ext, p, &start);
    for _ in 0..cfg.burnin {
        for _ in 0..n {
            state.move_step(rng);
        }
        for _ in 0..boundary {
            state.boundary_step(rng);
        }
    }
    Ok(PointPattern::from_trusted(state.inside_points().to_vec(), *w))
}
