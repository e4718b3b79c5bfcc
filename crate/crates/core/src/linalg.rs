//! Dense Cholesky factor used by the Gaussian random field sampler.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;

/// Lower-triangular factor `L` with `A = L L^T`, stored row-major and full
/// width so each row is a contiguous slice.
#[derive(Debug, Clone)]
pub(crate) struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factor a symmetric matrix given row-major. Returns `None` if a pivot is
    /// not strictly positive.
    pub(crate) fn factor(n: usize, mut a: Vec<f64>, jitter: f64) -> Option<Cholesky> {
        debug_assert_eq!(a.len(), n * n);
        for i in 0..n {
            a[i * n + i] += jitter;
        }
        // row-oriented: row i needs rows j < i, all already final
        for i in 0..n {
            let (done, rest) = a.split_at_mut(i * n);
            let row_i = &mut rest[..n];
            for j in 0..i {
                let s = dot(&row_i[..j], &done[j * n..j * n + j]);
                row_i[j] = (row_i[j] - s) / done[j * n + j];
            }
            let d = row_i[i] - dot(&row_i[..i], &row_i[..i]);
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            row_i[i] = sqrt(d);
            for v in &mut row_i[i + 1..] {
                *v = 0.0;
            }
        }
        Some(Cholesky { n, l: a })
    }

    pub(crate) fn dim(&self) -> usize {
        self.n
    }

    /// `L z`.
    pub(crate) fn mul_lower(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.l[i * self.n..i * self.n + i + 1], &z[..=i]);
        }
        out
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the compiler vectorise
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for k in 0..4 {
            acc[k] += a[4 * c + k] * b[4 * c + k];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_spd_matrix() {
        let n = 7;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = (-((i as f64 - j as f64).abs()) / 3.0).exp();
            }
        }
        let c = Cholesky::factor(n, a.clone(), 0.0).unwrap();
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| c.l[i * n + k] * c.l[j * n + k]).sum();
                assert!((s - a[i * n + j]).abs() < 1e-12);
            }
        }
        let z = vec![1.0; n];
        let lz = c.mul_lower(&z);
        let row0: f64 = c.l[0];
        assert!((lz[0] - row0).abs() < 1e-15);
    }

    #[test]
    fn rejects_indefinite() {
        let a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(Cholesky::factor(2, a, 0.0).is_none());
    }
}
