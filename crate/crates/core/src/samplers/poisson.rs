use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::geom::{PointPattern, Window};
use crate::models::PoissonParams;

pub fn binomial<R: Rng + ?Sized>(n: usize, w: &Window, rng: &mut R) -> PointPattern {
    let pts: Vec<_> = (0..n).map(|_| w.point_at(rng.random(), rng.random())).collect();
    PointPattern::from_trusted(pts, *w)
}

pub fn poisson<R: Rng + ?Sized>(p: &PoissonParams, w: &Window, rng: &mut R) -> PointPattern {
    let n = poisson_count(p.rho() * w.area(), rng);
    binomial(n, w, rng)
}

pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if !(mean > 0.0) {
        return 0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng) as usize
}
