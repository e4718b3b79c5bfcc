//! Global envelopes ordered by extreme rank length (ERL).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::geom::RGrid;
use crate::math::{ceil, floor};
use crate::summaries::{Curve, SummaryKind};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Observed curve (index 0) and simulated curves (1..=s) on one grid.
#[derive(Debug, Clone)]
pub struct CurveSet {
    curves: Vec<Curve>,
    mask: Vec<bool>,
}

impl CurveSet {
    pub fn new(data: Curve, sims: Vec<Curve>) -> Result<CurveSet> {
        if sims.is_empty() {
            return Err(Error::TooFewCurves { needed: 1, got: 0 });
        }
        let kind = data.kind();
        if sims.iter().any(|c| c.rgrid().values() != data.rgrid().values() || c.kind() != kind) {
            return Err(Error::MismatchedGrids);
        }
        let mut mask = data.defined().to_vec();
        for c in &sims {
            for (m, d) in mask.iter_mut().zip(c.defined()) {
                *m &= *d;
            }
        }
        let mut curves = Vec::with_capacity(sims.len() + 1);
        curves.push(data);
        curves.extend(sims);
        Ok(CurveSet { curves, mask })
    }

    pub fn data(&self) -> &Curve {
        &self.curves[0]
    }
    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }
    /// Number of simulated curves.
    pub fn sims(&self) -> usize {
        self.curves.len() - 1
    }
    /// Grid points where every curve is defined.
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
    pub fn rgrid(&self) -> &RGrid {
        self.curves[0].rgrid()
    }
    pub fn kind(&self) -> SummaryKind {
        self.curves[0].kind()
    }
}

/// Pointwise two-sided ranks of one curve, sorted ascending. Smaller in the
/// lexicographic order means more extreme.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ErlMeasure(pub Vec<u32>);

/// `R_i(r) = min(1 + #{j: T_j(r) < T_i(r)}, 1 + #{j: T_j(r) > T_i(r)})` at
/// each masked grid point, sorted per curve.
pub fn erl_measures(cs: &CurveSet) -> Vec<ErlMeasure> {
    let n = cs.curves.len();
    let mut ranks: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..n).collect();
    for (r, _) in cs.mask.iter().enumerate().filter(|(_, m)| **m) {
        let v = |i: usize| cs.curves[i].values()[r];
        order.sort_by(|&a, &b| v(a).total_cmp(&v(b)));
        let mut start = 0;
        while start < n {
            let mut end = start;
            while end < n && v(order[end]) == v(order[start]) {
                end += 1;
            }
            let below = start as u32 + 1;
            let above = (n - end) as u32 + 1;
            for &i in &order[start..end] {
                ranks[i].push(below.min(above));
            }
            start = end;
        }
    }
    ranks
        .into_iter()
        .map(|mut r| {
            r.sort_unstable();
            ErlMeasure(r)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Envelope {
    pub lower: Curve,
    pub upper: Curve,
    pub observed: Curve,
    pub alpha: f64,
    pub p_value: f64,
    /// Number of curves weakly more extreme than the data, itself included.
    pub rank_count: usize,
    /// Curves left after discarding the most extreme ones.
    pub retained: usize,
    pub rejected: bool,
    pub measures: Vec<ErlMeasure>,
}

impl Envelope {
    /// Whether the observed curve stays within `[lower, upper]` wherever the
    /// envelope is defined.
    pub fn contains_observed(&self) -> bool {
        (0..self.lower.values().len()).all(|i| match (self.lower.get(i), self.upper.get(i)) {
            (Some(lo), Some(hi)) => {
                let o = self.observed.values()[i];
                lo <= o && o <= hi
            }
            _ => true,
        })
    }

    pub fn area(&self) -> f64 {
        envelope_area(self)
    }
}

/// Largest number of curves that may be discarded at level `alpha`.
fn discard_budget(alpha: f64, total: usize) -> usize {
    // slack guards against alpha * total landing just under an integer
    floor(alpha * total as f64 + 1e-9) as usize
}

pub fn global_envelope(cs: &CurveSet, alpha: f64) -> Result<Envelope> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha must lie in (0, 1)"));
    }
    let total = cs.curves.len();
    let k = discard_budget(alpha, total);
    if k == 0 {
        let needed = ceil(1.0 / alpha - 1e-9) as usize - 1;
        return Err(Error::TooFewCurves { needed, got: cs.sims() });
    }
    let measures = erl_measures(cs);
    let rank_count = measures.iter().filter(|e| (*e).cmp(&measures[0]) != Ordering::Greater).count();

    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&a, &b| measures[a].cmp(&measures[b]));
    let mut keep = vec![true; total];
    let mut dropped = 0;
    let mut start = 0;
    while start < total {
        let mut end = start;
        while end < total && measures[order[end]] == measures[order[start]] {
            end += 1;
        }
        if dropped + (end - start) > k {
            break;
        }
        for &i in &order[start..end] {
            keep[i] = false;
        }
        dropped += end - start;
        start = end;
    }

    let m = cs.mask.len();
    let mut lo = vec![f64::NAN; m];
    let mut hi = vec![f64::NAN; m];
    for r in (0..m).filter(|&r| cs.mask[r]) {
        let vals = cs.curves.iter().zip(&keep).filter(|(_, k)| **k).map(|(c, _)| c.values()[r]);
        let (a, b) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        lo[r] = a;
        hi[r] = b;
    }
    let kind = cs.kind();
    let grid = cs.rgrid().clone();
    Ok(Envelope {
        lower: Curve::new(grid.clone(), lo, kind, cs.mask.clone())?,
        upper: Curve::new(grid, hi, kind, cs.mask.clone())?,
        observed: cs.data().clone(),
        alpha,
        p_value: rank_count as f64 / total as f64,
        rank_count,
        retained: total - dropped,
        rejected: rank_count <= k,
        measures,
    })
}

/// Trapezoidal integral of `upper - lower` over consecutive defined grid
/// points.
pub fn envelope_area(e: &Envelope) -> f64 {
    let r = e.lower.rgrid().values();
    let gap = |i: usize| match (e.lower.get(i), e.upper.get(i)) {
        (Some(a), Some(b)) => Some(b - a),
        _ => None,
    };
    (1..r.len())
        .filter_map(|i| match (gap(i - 1), gap(i)) {
            (Some(a), Some(b)) => Some((r[i] - r[i - 1]) * (a + b) / 2.0),
            _ => None,
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn curve(values: &[f64]) -> Curve {
        let grid = RGrid::linspace(0.0, 1.0, values.len()).unwrap();
        Curve::new(grid, values.to_vec(), SummaryKind::K, vec![true; values.len()]).unwrap()
    }

    fn set(rows: &[Vec<f64>]) -> CurveSet {
        CurveSet::new(curve(&rows[0]), rows[1..].iter().map(|r| curve(r)).collect()).unwrap()
    }

    #[test]
    fn identical_curves_tie() {
        let rows = vec![vec![1.0, 2.0, 3.0]; 20];
        let cs = set(&rows);
        let e = erl_measures(&cs);
        assert!(e.windows(2).all(|w| w[0] == w[1]));
        let env = global_envelope(&cs, 0.05).unwrap();
        assert_eq!(env.p_value, 1.0);
        assert!(env.contains_observed() && !env.rejected);
    }

    #[test]
    fn three_curve_example() {
        let cs = set(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        let e = erl_measures(&cs);
        assert_eq!(e[0], ErlMeasure(vec![1, 1]));
        assert_eq!(e[1], ErlMeasure(vec![2, 2]));
        assert_eq!(e[2], ErlMeasure(vec![1, 1]));
        assert!(e[0] < e[1] && e[2] < e[1]);
    }

    #[test]
    fn pointwise_maximum_is_most_extreme() {
        // no other curve is pointwise minimal everywhere
        let rows = vec![
            vec![10.0, 10.0, 10.0],
            vec![1.0, 2.0, 3.0],
            vec![2.0, 3.0, 1.0],
            vec![3.0, 1.0, 2.0],
            vec![2.0, 2.0, 2.0],
        ];
        let e = erl_measures(&set(&rows));
        assert!((1..5).all(|i| e[0] < e[i]));
    }

    #[test]
    fn data_above_everything() {
        let mut rows = vec![vec![10.0; 4]];
        let mut rng = crate::seed::SeedSpec::new(4, 0).rng();
        for _ in 0..99 {
            rows.push((0..4).map(|_| rng.random::<f64>()).collect());
        }
        let env = global_envelope(&set(&rows), 0.05).unwrap();
        assert!((env.p_value - 0.01).abs() < 1e-15);
        assert!(env.rejected && !env.contains_observed());
    }

    #[test]
    fn too_few_curves() {
        let rows = vec![vec![0.0]; 10];
        assert!(matches!(global_envelope(&set(&rows), 0.05), Err(Error::TooFewCurves { needed: 19, got: 9 })));
        assert!(CurveSet::new(curve(&[0.0]), vec![]).is_err());
        assert!(CurveSet::new(curve(&[0.0]), vec![curve(&[0.0, 1.0])]).is_err());
    }

    #[test]
    fn areas() {
        let rows = vec![vec![0.0; 5], vec![1.0; 5], vec![0.0; 5]];
        let grid = RGrid::linspace(0.0, 0.25, 5).unwrap();
        let mk = |v: Vec<f64>| Curve::new(grid.clone(), v, SummaryKind::F, vec![true; 5]).unwrap();
        let cs = CurveSet::new(mk(rows[0].clone()), vec![mk(rows[1].clone()), mk(rows[2].clone())]).unwrap();
        let env = global_envelope(&cs, 0.4).unwrap();
        assert_eq!(env.retained, 3);
        assert!((envelope_area(&env) - 0.25).abs() < 1e-15);

        let flat = global_envelope(&set(&vec![vec![2.0; 3]; 4]), 0.3).unwrap();
        assert_eq!(envelope_area(&flat), 0.0);

        let g = RGrid::new(vec![0.0, 0.5, 1.0]).unwrap();
        let lower = Curve::new(g.clone(), vec![0.0; 3], SummaryKind::K, vec![true; 3]).unwrap();
        let upper = Curve::new(g, vec![0.0, 1.0, 2.0], SummaryKind::K, vec![true; 3]).unwrap();
        let e = Envelope { lower: lower.clone(), upper, observed: lower, ..flat };
        assert!((envelope_area(&e) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn masked_points_are_skipped() {
        let g = RGrid::linspace(0.0, 1.0, 3).unwrap();
        let a = Curve::new(g.clone(), vec![0.0, 1.0, f64::NAN], SummaryKind::J, vec![true, true, false]).unwrap();
        let b = Curve::new(g, vec![1.0, 2.0, 5.0], SummaryKind::J, vec![true; 3]).unwrap();
        let cs = CurveSet::new(a.clone(), vec![b.clone(), b.clone(), b]).unwrap();
        assert_eq!(cs.mask(), &[true, true, false]);
        assert!(erl_measures(&cs).iter().all(|e| e.0.len() == 2));
    }

    #[test]
    fn exchangeable_null_is_exact() {
        let mut rng = crate::seed::SeedSpec::new(12, 0).rng();
        let trials = 10_000;
        let mut rejected = 0;
        for _ in 0..trials {
            let rows: Vec<Vec<f64>> = (0..100).map(|_| (0..8).map(|_| rng.random::<f64>()).collect()).collect();
            let env = global_envelope(&set(&rows), 0.05).unwrap();
            rejected += (env.p_value <= 0.05) as usize;
        }
        let rate = rejected as f64 / trials as f64;
        assert!((rate - 0.05).abs() < 0.01, "{rate}");
    }

    fn arb_rows() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..6, 19usize..60).prop_flat_map(|(m, s)| {
            // small integer values force pointwise and whole-vector ties
            prop::collection::vec(prop::collection::vec((0u8..6).prop_map(f64::from), m), s + 1)
        })
    }

    /// Distinct values at every grid point, plus one column where all
    /// curves agree.
    fn arb_tie_free() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..6, 19usize..60).prop_flat_map(|(m, s)| {
            prop::collection::vec(prop::collection::vec(0.0..1.0f64, m), s + 1).prop_map(|mut rows| {
                for r in &mut rows {
                    r.insert(0, 0.0);
                }
                rows
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn inside_iff_not_rejected(rows in arb_tie_free(), alpha in 0.01..0.5f64) {
            let cs = set(&rows);
            if let Ok(env) = global_envelope(&cs, alpha) {
                prop_assert_eq!(env.contains_observed(), !env.rejected);
            }
        }

        #[test]
        fn p_value_grid_and_ordering(rows in arb_rows(), alpha in 0.01..0.5f64) {
            let cs = set(&rows);
            if let Ok(env) = global_envelope(&cs, alpha) {
                prop_assert_eq!(env.rejected, env.p_value <= alpha + 1e-12);
                let total = rows.len() as f64;
                let k = (env.p_value * total).round();
                prop_assert!((env.p_value * total - k).abs() < 1e-9 && k >= 1.0);
                prop_assert!(env.lower.values().iter().zip(env.upper.values()).all(|(a, b)| a <= b));
                // the data is always retained when not rejected
                if !env.rejected {
                    prop_assert!(env.contains_observed());
                }
            }
        }

        #[test]
        fn monotone_transform_keeps_order(rows in arb_rows()) {
            let a = erl_measures(&set(&rows));
            let t: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| libm::exp(3.0 * v) - 7.0).collect()).collect();
            prop_assert_eq!(a, erl_measures(&set(&t)));
        }

        #[test]
        fn narrower_with_larger_alpha(rows in arb_rows(), a1 in 0.05..0.2f64, a2 in 0.2..0.5f64) {
            let cs = set(&rows);
            if let (Ok(e1), Ok(e2)) = (global_envelope(&cs, a1), global_envelope(&cs, a2)) {
                for i in 0..e1.lower.values().len() {
                    prop_assert!(e2.lower.values()[i] >= e1.lower.values()[i]);
                    prop_assert!(e2.upper.values()[i] <= e1.upper.values()[i]);
                }
            }
        }
    }
}
