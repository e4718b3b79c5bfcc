//! Gaussian random field on a cell-centre grid and the log-Gaussian Cox
//! process it drives.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use super::poisson::poisson_count;
use crate::error::{invalid, Error, Result};
use crate::geom::{Point, PointPattern, Window};
use crate::linalg::Cholesky;
use crate::math::{exp, ln, ln_poisson_pmf};
use crate::models::{lgcp_covariance, LgcpParams};

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;

const JITTERS: [f64; 5] = [0.0, 1e-10, 1e-9, 1e-8, 1e-6];

/// Piecewise-constant intensity `Z = exp(Y)` on an `nx x ny` grid; cell
/// `(i, j)` is stored at `j * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    nx: usize,
    ny: usize,
    values: Vec<f64>,
    window: Window,
}

impl GridField {
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn window(&self) -> &Window {
        &self.window
    }
    pub fn cell_area(&self) -> f64 {
        self.window.area() / (self.nx * self.ny) as f64
    }
    /// Cell-sum approximation of `∫_W Z(u) du`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }
    pub fn cell_centre(&self, i: usize, j: usize) -> Point {
        self.window.point_at((i as f64 + 0.5) / self.nx as f64, (j as f64 + 0.5) / self.ny as f64)
    }

    fn point_in_cell<R: Rng + ?Sized>(&self, cell: usize, rng: &mut R) -> Point {
        let (i, j) = (cell % self.nx, cell / self.nx);
        let fx = (i as f64 + rng.random::<f64>()) / self.nx as f64;
        let fy = (j as f64 + rng.random::<f64>()) / self.ny as f64;
        let p = self.window.point_at(fx, fy);
        // rounding can push the last cell's draw just past the far edge
        Point::new(p.x.min(self.window.xmax()), p.y.min(self.window.ymax()))
    }

    /// Poisson process with intensity `Z`: a Poisson count per cell, placed
    /// uniformly in the cell.
    pub fn sample_poisson<R: Rng + ?Sized>(&self, rng: &mut R) -> PointPattern {
        let a = self.cell_area();
        let mut pts = Vec::new();
        for (cell, &z) in self.values.iter().enumerate() {
            let k = poisson_count(z * a, rng);
            for _ in 0..k {
                pts.push(self.point_in_cell(cell, rng));
            }
        }
        PointPattern::from_trusted(pts, self.window)
    }

    /// `n` i.i.d. points with density proportional to `Z`.
    pub fn sample_points<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PointPattern {
        let mut cum = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        for &z in &self.values {
            acc += z;
            cum.push(acc);
        }
        let pts = (0..n)
            .map(|_| {
                let u = rng.random::<f64>() * acc;
                let cell = cum.partition_point(|&c| c <= u).min(cum.len() - 1);
                self.point_in_cell(cell, rng)
            })
            .collect();
        PointPattern::from_trusted(pts, self.window)
    }
}

/// Factorised covariance of the field at the cell centres, reusable across
/// draws.
#[derive(Debug, Clone)]
pub struct GaussField {
    params: LgcpParams,
    window: Window,
    nx: usize,
    ny: usize,
    factor: Cholesky,
    jitter: f64,
}

impl GaussField {
    /// Factor the `nx*ny` square covariance matrix, retrying with diagonal
    /// jitter `1e-10 .. 1e-6` (relative to `sigma2`) before giving up.
    pub fn new(p: &LgcpParams, w: &Window, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(invalid("field grid needs at least 2 cells per side"));
        }
        let n = nx * ny;
        let centres: Vec<Point> = (0..n)
            .map(|c| w.point_at(((c % nx) as f64 + 0.5) / nx as f64, ((c / nx) as f64 + 0.5) / ny as f64))
            .collect();
        let mut cov = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let c = lgcp_covariance(p, centres[i].dist(&centres[j]));
                cov[i * n + j] = c;
                cov[j * n + i] = c;
            }
        }
        for &jit in &JITTERS {
            if let Some(factor) = Cholesky::factor(n, cov.clone(), jit * p.sigma2()) {
                return Ok(GaussField { params: *p, window: *w, nx, ny, factor, jitter: jit });
            }
        }
        Err(Error::CovarianceNotPD { jitter: JITTERS[JITTERS.len() - 1] })
    }

    pub fn params(&self) -> &LgcpParams {
        &self.params
    }

    /// Relative diagonal jitter that made the factorisation succeed.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Gaussian field values `Y` at the cell centres.
    pub fn sample_log<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.factor.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let mu = self.params.mu();
        self.factor.mul_lower(&z).into_iter().map(|v| mu + v).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GridField {
        let values = self.sample_log(rng).into_iter().map(exp).collect();
        GridField { nx: self.nx, ny: self.ny, values, window: self.window }
    }

    pub fn sample_cox<R: Rng + ?Sized>(&self, rng: &mut R) -> PointPattern {
        self.sample(rng).sample_poisson(rng)
    }

    /// Rejection sampler for the Cox process given `N(W) = n`: draw a field
    /// `z` and accept it with probability `Λ^n e^{-Λ} / n!`, `Λ = ∫ z`.
    pub fn sample_cox_conditional<R: Rng + ?Sized>(
        &self,
        n: usize,
        max_attempts: usize,
        rng: &mut R,
    ) -> Result<PointPattern> {
        if max_attempts == 0 {
            return Err(invalid("max_attempts must be at least 1"));
        }
        for _ in 0..max_attempts {
            let field = self.sample(rng);
            let u: f64 = rng.random();
            if ln(u) <= ln_poisson_pmf(n, field.integral()) {
                return Ok(field.sample_points(n, rng));
            }
        }
        Err(Error::AttemptsExhausted { attempts: max_attempts })
    }
}
