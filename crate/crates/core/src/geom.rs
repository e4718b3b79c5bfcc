//! Rectangular windows, point patterns and the distance computations shared by
//! every estimator and sampler.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::sqrt;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        sqrt(self.dist2(other))
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// Axis-aligned rectangle `[xmin, xmax] x [ymin, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Window {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || xmax <= xmin || ymax <= ymin {
            return Err(invalid("window needs xmax > xmin and ymax > ymin"));
        }
        Ok(Window { xmin, xmax, ymin, ymax })
    }

    pub const fn unit() -> Self {
        Window { xmin: 0.0, xmax: 1.0, ymin: 0.0, ymax: 1.0 }
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }
    pub fn xmax(&self) -> f64 {
        self.xmax
    }
    pub fn ymin(&self) -> f64 {
        self.ymin
    }
    pub fn ymax(&self) -> f64 {
        self.ymax
    }
    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }
    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }
    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
    pub fn min_side(&self) -> f64 {
        self.width().min(self.height())
    }

    /// Closed-boundary membership.
    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    /// Distance from an interior point to the boundary; negative outside.
    #[inline]
    pub fn border_distance(&self, p: &Point) -> f64 {
        (p.x - self.xmin)
            .min(self.xmax - p.x)
            .min(p.y - self.ymin)
            .min(self.ymax - p.y)
    }

    /// The set of centres whose closed `r`-ball fits inside the window.
    ///
    /// Fails with [`Error::DegenerateWindow`] once `2r` reaches the shorter
    /// side, since the eroded set then has no area.
    pub fn erode(&self, r: f64) -> Result<Window> {
        if !(r >= 0.0) {
            return Err(invalid("erosion radius must be nonnegative"));
        }
        if 2.0 * r >= self.min_side() {
            return Err(Error::DegenerateWindow { r });
        }
        Ok(Window {
            xmin: self.xmin + r,
            xmax: self.xmax - r,
            ymin: self.ymin + r,
            ymax: self.ymax - r,
        })
    }

    /// Bounding rectangle of the `r`-dilation (the rounded corners are
    /// included, which is what a rectangular simulation region needs).
    pub fn dilate(&self, r: f64) -> Result<Window> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(invalid("dilation radius must be finite and nonnegative"));
        }
        Ok(Window {
            xmin: self.xmin - r,
            xmax: self.xmax + r,
            ymin: self.ymin - r,
            ymax: self.ymax + r,
        })
    }

    /// Translate the window by `(dx, dy)`.
    pub fn shifted(&self, dx: f64, dy: f64) -> Window {
        Window {
            xmin: self.xmin + dx,
            xmax: self.xmax + dx,
            ymin: self.ymin + dy,
            ymax: self.ymax + dy,
        }
    }

    #[inline]
    pub(crate) fn point_at(&self, fx: f64, fy: f64) -> Point {
        Point::new(self.xmin + fx * self.width(), self.ymin + fy * self.height())
    }
}

/// A finite set of points observed in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    points: Vec<Point>,
    window: Window,
}

impl PointPattern {
    pub fn new(points: Vec<Point>, window: Window) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !window.contains(p)) {
            return Err(Error::PointOutsideWindow { x: p.x, y: p.y });
        }
        Ok(PointPattern { points, window })
    }

    pub fn empty(window: Window) -> Self {
        PointPattern { points: Vec::new(), window }
    }

    /// Caller guarantees every point lies in `window`.
    pub(crate) fn from_trusted(points: Vec<Point>, window: Window) -> Self {
        debug_assert!(points.iter().all(|p| window.contains(p)));
        PointPattern { points, window }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
    pub fn window(&self) -> &Window {
        &self.window
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `x ∩ b`, carried on window `b`, keeping the original order.
    pub fn restrict(&self, b: &Window) -> PointPattern {
        let points = self.points.iter().copied().filter(|p| b.contains(p)).collect();
        PointPattern { points, window: *b }
    }

    /// Number of unordered pairs at distance `<= r`.
    pub fn close_pair_count(&self, r: f64) -> u64 {
        close_pair_count(&self.points, r)
    }

    /// Distance from each point to its nearest other point. Empty when the
    /// pattern has fewer than two points.
    pub fn nn_distances(&self) -> Vec<f64> {
        nn_distances(&self.points)
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

pub fn close_pair_count(points: &[Point], r: f64) -> u64 {
    let r2 = r * r;
    let mut count = 0u64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if p.dist2(q) <= r2 {
                count += 1;
            }
        }
    }
    count
}

pub fn nn_distances(points: &[Point]) -> Vec<f64> {
    if points.len() < 2 {
        return Vec::new();
    }
    let mut best = alloc::vec![f64::INFINITY; points.len()];
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2 = points[i].dist2(&points[j]);
            if d2 < best[i] {
                best[i] = d2;
            }
            if d2 < best[j] {
                best[j] = d2;
            }
        }
    }
    best.into_iter().map(sqrt).collect()
}

/// Strictly increasing grid of distances `r >= 0` shared by summary curves.
#[derive(Debug, Clone, PartialEq)]
pub struct RGrid(Arc<[f64]>);

impl RGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("r grid must be nonempty"));
        }
        if !(values[0] >= 0.0) || values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("r grid values must be finite and nonnegative"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("r grid must be strictly increasing"));
        }
        Ok(RGrid(values.into()))
    }

    /// `n` equally spaced values from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return RGrid::new(alloc::vec![lo]);
        }
        let step = (hi - lo) / (n - 1) as f64;
        RGrid::new((0..n).map(|i| lo + step * i as f64).collect())
    }

    /// 513 points on `[0, 0.25]`, sized for the unit square.
    pub fn default_unit_square() -> Self {
        RGrid::linspace(0.0, 0.25, 513).expect("static grid")
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn max(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn pat(pts: &[(f64, f64)]) -> PointPattern {
        PointPattern::new(pts.iter().map(|&p| p.into()).collect(), Window::unit()).unwrap()
    }

    #[test]
    fn erosion_examples() {
        let w = Window::unit();
        let e = w.erode(0.05).unwrap();
        assert!((e.xmin() - 0.05).abs() < 1e-15 && (e.xmax() - 0.95).abs() < 1e-15);
        assert!((e.ymin() - 0.05).abs() < 1e-15 && (e.ymax() - 0.95).abs() < 1e-15);
        assert_eq!(w.erode(0.0).unwrap(), w);
        assert_eq!(w.erode(0.5), Err(Error::DegenerateWindow { r: 0.5 }));
        assert!(w.erode(-1.0).is_err());
    }

    #[test]
    fn window_rejects_inverted_bounds() {
        assert!(Window::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Window::new(0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn pattern_rejects_outside_points() {
        let err = PointPattern::new(vec![Point::new(1.5, 0.5)], Window::unit());
        assert!(matches!(err, Err(Error::PointOutsideWindow { .. })));
        // closed boundary
        assert!(PointPattern::new(vec![Point::new(1.0, 0.0)], Window::unit()).is_ok());
    }

    #[test]
    fn restriction_examples() {
        let x = pat(&[(0.5, 0.5), (0.01, 0.01)]);
        let b = Window::unit().erode(0.05).unwrap();
        let xb = x.restrict(&b);
        assert_eq!(xb.points(), &[Point::new(0.5, 0.5)]);
        assert_eq!(xb.window(), &b);
        assert!(PointPattern::empty(Window::unit()).restrict(&b).is_empty());
        assert_eq!(x.restrict(x.window()), x);
    }

    #[test]
    fn close_pairs_examples() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let x = PointPattern::new(vec![Point::new(0.0, 0.0), Point::new(0.03, 0.0)], w).unwrap();
        assert_eq!(x.close_pair_count(0.05), 1);
        assert_eq!(pat(&[(0.2, 0.2)]).close_pair_count(10.0), 0);
        // closed inequality
        let y = pat(&[(0.0, 0.0), (0.5, 0.0)]);
        assert_eq!(y.close_pair_count(0.5), 1);
    }

    #[test]
    fn close_pairs_match_all_ordered_pairs() {
        // independent count over ordered pairs, halved
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|i| {
                let t = i as f64;
                ((t * 0.37).fract(), (t * 0.61 + 0.13).fract())
            })
            .collect();
        let x = pat(&pts);
        let mut ordered = 0;
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                if i != j && ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() <= 0.1 {
                    ordered += 1;
                }
            }
        }
        assert_eq!(x.close_pair_count(0.1), ordered / 2);
    }

    #[test]
    fn nn_examples() {
        let x = pat(&[(0.0, 0.0), (0.0, 0.2)]);
        let d = x.nn_distances();
        assert_eq!(d.len(), 2);
        assert!((d[0] - 0.2).abs() < 1e-15 && (d[1] - 0.2).abs() < 1e-15);
        assert!(pat(&[(0.3, 0.3)]).nn_distances().is_empty());
    }

    #[test]
    fn nn_matches_brute_force() {
        let pts: Vec<(f64, f64)> =
            (0..8).map(|i| (((i * 7 + 3) % 11) as f64 / 11.0, ((i * 5 + 1) % 13) as f64 / 13.0)).collect();
        let x = pat(&pts);
        let d = x.nn_distances();
        for (i, a) in pts.iter().enumerate() {
            let brute = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(d[i], brute);
        }
    }

    #[test]
    fn rgrid_validation() {
        assert!(RGrid::new(vec![0.0, 0.1, 0.1]).is_err());
        assert!(RGrid::new(vec![-0.1, 0.1]).is_err());
        let g = RGrid::default_unit_square();
        assert_eq!(g.len(), 513);
        assert!((g.max() - 0.25).abs() < 1e-15);
    }

    fn arb_points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 0..max)
    }

    proptest! {
        #[test]
        fn erosion_composes(a in 0.0..0.2f64, b in 0.0..0.2f64) {
            let w = Window::unit();
            let lhs = w.erode(a).unwrap().erode(b).unwrap();
            let rhs = w.erode(a + b).unwrap();
            prop_assert!((lhs.xmin() - rhs.xmin()).abs() < 1e-12);
            prop_assert!((lhs.xmax() - rhs.xmax()).abs() < 1e-12);
            prop_assert!(lhs.area() >= 0.0);
        }

        #[test]
        fn close_pairs_invariant_under_relabel_and_translation(
            pts in arb_points(25), r in 0.01..0.4f64, dx in -3.0..3.0f64, dy in -3.0..3.0f64
        ) {
            let base: Vec<Point> = pts.iter().map(|&p| p.into()).collect();
            let c = close_pair_count(&base, r);
            let mut rev = base.clone();
            rev.reverse();
            prop_assert_eq!(close_pair_count(&rev, r), c);
            // translations by dyadic offsets keep differences exact
            let (dx, dy) = ((dx * 64.0).round() / 64.0, (dy * 64.0).round() / 64.0);
            let moved: Vec<Point> = base.iter().map(|p| Point::new(p.x + dx, p.y + dy)).collect();
            prop_assert_eq!(close_pair_count(&moved, r), c);
        }

        #[test]
        fn close_pairs_monotone_in_r(pts in arb_points(25), r1 in 0.0..0.5f64, r2 in 0.0..0.5f64) {
            let base: Vec<Point> = pts.iter().map(|&p| p.into()).collect();
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            prop_assert!(close_pair_count(&base, lo) <= close_pair_count(&base, hi));
        }

        #[test]
        fn nn_length_matches_count(pts in arb_points(30)) {
            let x = pat(&pts);
            let d = x.nn_distances();
            if x.len() >= 2 { prop_assert_eq!(d.len(), x.len()); } else { prop_assert!(d.is_empty()); }
        }
    }
}
