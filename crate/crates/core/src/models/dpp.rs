use alloc::vec;
use alloc::vec::Vec;

use super::{CountPmf, DppGaussParams};
use crate::error::{invalid, Error, Result};
use crate::geom::Window;
use crate::math::{exp, PI};

/// Default fraction of the total eigenvalue mass that truncation may drop.
pub const DEFAULT_SPECTRUM_EPS: f64 = 1e-6;

/// Eigenvalues of a DPP kernel on a rectangle, paired with the Fourier
/// frequency `(k1, k2)` of the basis function `exp(2 pi i (k1 x/Lx + k2 y/Ly))`.
///
/// Stored sorted by nonincreasing eigenvalue; ties keep the enumeration order
/// (increasing `|k|`, then `k1`, then `k2`).
#[derive(Debug, Clone, PartialEq)]
pub struct DppSpectrum {
    eigenvalues: Vec<f64>,
    frequencies: Vec<[i32; 2]>,
    truncation: u32,
    window: Window,
}

impl DppSpectrum {
    /// Spectrum with arbitrary eigenvalues and the first `len` Fourier
    /// frequencies in order of increasing norm.
    pub fn from_eigenvalues(window: Window, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(invalid("eigenvalues must lie in [0, 1]"));
        }
        let mut m = 0i32;
        while ((2 * m + 1) * (2 * m + 1)) < eigenvalues.len() as i32 {
            m += 1;
        }
        let mut freqs = lattice(m);
        freqs.sort_by_key(|k| (k[0] * k[0] + k[1] * k[1], k[0], k[1]));
        freqs.truncate(eigenvalues.len());
        Ok(Self::sorted(eigenvalues, freqs, m as u32, window))
    }

    fn sorted(eigenvalues: Vec<f64>, frequencies: Vec<[i32; 2]>, truncation: u32, window: Window) -> Self {
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
        DppSpectrum {
            eigenvalues: order.iter().map(|&i| eigenvalues[i]).collect(),
            frequencies: order.iter().map(|&i| frequencies[i]).collect(),
            truncation,
            window,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
    pub fn frequencies(&self) -> &[[i32; 2]] {
        &self.frequencies
    }
    /// Largest `|k_i|` retained.
    pub fn truncation(&self) -> u32 {
        self.truncation
    }
    pub fn window(&self) -> &Window {
        &self.window
    }
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }
    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
    /// Expected number of points, `sum lambda`.
    pub fn mass(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
    pub fn nonzero(&self) -> usize {
        self.eigenvalues.iter().take_while(|&&l| l > 0.0).count()
    }

    /// Set eigenvalues below `threshold` to zero.
    pub fn snapped(&self, threshold: f64) -> Self {
        let mut s = self.clone();
        for l in &mut s.eigenvalues {
            if *l < threshold {
                *l = 0.0;
            }
        }
        s
    }
}

fn lattice(m: i32) -> Vec<[i32; 2]> {
    let mut v = Vec::with_capacity(((2 * m + 1) * (2 * m + 1)) as usize);
    for k1 in -m..=m {
        for k2 in -m..=m {
            v.push([k1, k2]);
        }
    }
    v
}

/// `sum_{|k| <= m} exp(-a k^2)`; `m = None` sums until terms vanish.
fn theta_sum(a: f64, m: Option<i64>) -> f64 {
    let mut s = 1.0;
    let mut k = 1i64;
    loop {
        if let Some(m) = m {
            if k > m {
                break;
            }
        }
        let t = exp(-a * (k * k) as f64);
        if t < 1e-300 {
            break;
        }
        s += 2.0 * t;
        k += 1;
    }
    s
}

/// Eigenvalues of the periodised Gaussian kernel on `w`:
/// `lambda_k = rho pi kappa^2 exp(-pi^2 kappa^2 |omega_k|^2)` with
/// `omega_k = (k1 / Lx, k2 / Ly)`, i.e. the kernel's Fourier transform at the
/// basis frequencies.
///
/// The square `|k1|, |k2| <= M` is grown until the dropped mass is below
/// `eps` times the total mass of the untruncated series.
pub fn dpp_spectrum(p: &DppGaussParams, w: &Window, eps: f64) -> Result<DppSpectrum> {
    let value = p.rho() * PI * p.kappa() * p.kappa();
    if value > 1.0 + 1e-10 {
        return Err(Error::ExistenceViolated { value });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid("eps must lie in (0, 1)"));
    }
    let pk2 = PI * PI * p.kappa() * p.kappa();
    let (ax, ay) = (pk2 / (w.width() * w.width()), pk2 / (w.height() * w.height()));
    let total = theta_sum(ax, None) * theta_sum(ay, None);
    let mut m = 0i64;
    while total - theta_sum(ax, Some(m)) * theta_sum(ay, Some(m)) >= eps * total {
        m += 1;
    }
    let lam0 = value.min(1.0);
    let freqs = lattice(m as i32);
    let eigen: Vec<f64> = freqs
        .iter()
        .map(|k| {
            let (k1, k2) = (k[0] as f64, k[1] as f64);
            lam0 * exp(-(ax * k1 * k1 + ay * k2 * k2))
        })
        .collect();
    // stable sort from norm-ordered input so ties are deterministic
    let mut order: Vec<usize> = (0..freqs.len()).collect();
    order.sort_by_key(|&i| (freqs[i][0] * freqs[i][0] + freqs[i][1] * freqs[i][1], freqs[i][0], freqs[i][1]));
    let eigen_o = order.iter().map(|&i| eigen[i]).collect();
    let freqs_o = order.iter().map(|&i| freqs[i]).collect();
    Ok(DppSpectrum::sorted(eigen_o, freqs_o, m as u32, *w))
}

/// Exact pmf of `sum B_i`, `B_i ~ Bernoulli(lambda_i)` independent, by
/// iterated convolution.
pub fn dpp_count_distribution(s: &DppSpectrum) -> CountPmf {
    let mut pmf = vec![1.0];
    for &l in s.eigenvalues() {
        if l == 0.0 {
            continue;
        }
        let mut next = vec![0.0; pmf.len() + 1];
        for (n, &p) in pmf.iter().enumerate() {
            next[n] += p * (1.0 - l);
            next[n + 1] += p * l;
        }
        // mass far in the upper tail underflows; keep the vector short
        while next.len() > 1 && next[next.len() - 1] < 1e-300 {
            next.pop();
        }
        pmf = next;
    }
    let total: f64 = pmf.iter().sum();
    CountPmf::new(pmf.into_iter().map(|v| v / total).collect()).expect("convolution of Bernoulli pmfs")
}
