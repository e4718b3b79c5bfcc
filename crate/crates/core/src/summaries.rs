//! Border-corrected (minus-sampling) estimators of the `K`, `F`, `G` and `J`
//! functions on a shared grid of distances.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::geom::{nn_distances, Point, PointPattern, RGrid, Window};
use crate::math::sqrt;

/// Side length of the default `F` evaluation lattice.
pub const DEFAULT_F_RESOLUTION: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SummaryKind {
    K,
    F,
    G,
    J,
}

impl SummaryKind {
    pub const ALL: [SummaryKind; 4] = [SummaryKind::K, SummaryKind::F, SummaryKind::G, SummaryKind::J];

    pub fn name(self) -> &'static str {
        match self {
            SummaryKind::K => "K",
            SummaryKind::F => "F",
            SummaryKind::G => "G",
            SummaryKind::J => "J",
        }
    }

    pub fn parse(s: &str) -> Option<SummaryKind> {
        match s {
            "K" | "k" => Some(SummaryKind::K),
            "F" | "f" => Some(SummaryKind::F),
            "G" | "g" => Some(SummaryKind::G),
            "J" | "j" => Some(SummaryKind::J),
            _ => None,
        }
    }
}

/// An estimated function on an [`RGrid`]. Values are `NaN` where
/// `defined` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    rgrid: RGrid,
    values: Vec<f64>,
    kind: SummaryKind,
    defined: Vec<bool>,
}

impl Curve {
    pub fn new(rgrid: RGrid, values: Vec<f64>, kind: SummaryKind, defined: Vec<bool>) -> Result<Curve> {
        if values.len() != rgrid.len() || defined.len() != rgrid.len() {
            return Err(Error::MismatchedGrids);
        }
        if values.iter().zip(&defined).any(|(v, &d)| d && !v.is_finite()) {
            return Err(invalid("curve value not finite where defined"));
        }
        let values = values.into_iter().zip(&defined).map(|(v, &d)| if d { v } else { f64::NAN }).collect();
        Ok(Curve { rgrid, values, kind, defined })
    }

    fn full(rgrid: &RGrid, values: Vec<f64>, kind: SummaryKind) -> Curve {
        Curve { rgrid: rgrid.clone(), defined: vec![true; values.len()], values, kind }
    }

    pub fn rgrid(&self) -> &RGrid {
        &self.rgrid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn kind(&self) -> SummaryKind {
        self.kind
    }
    pub fn defined(&self) -> &[bool] {
        &self.defined
    }
    pub fn get(&self, i: usize) -> Option<f64> {
        if self.defined[i] {
            Some(self.values[i])
        } else {
            None
        }
    }
}

fn check_grid(rgrid: &RGrid, w: &Window) -> Result<()> {
    if !(rgrid.max() < w.min_side() / 2.0) {
        return Err(invalid("largest r must be below half the shortest window side"));
    }
    Ok(())
}

/// Grid indices `[first r >= lo, last r <= hi]` as a half-open range.
fn index_range(r: &[f64], lo: f64, hi: f64) -> (usize, usize) {
    (r.partition_point(|&v| v < lo), r.partition_point(|&v| v <= hi))
}

/// First grid index with `r >= d`, starting from a guess based on the mean
/// spacing. Exact for any grid; fast for near-uniform ones.
struct GridIndex<'a> {
    r: &'a [f64],
    inv_step: f64,
}

impl<'a> GridIndex<'a> {
    fn new(r: &'a [f64]) -> Self {
        let m = r.len();
        let inv_step = if m > 1 { (m - 1) as f64 / (r[m - 1] - r[0]) } else { 0.0 };
        GridIndex { r, inv_step }
    }

    fn first_at_least(&self, d: f64) -> usize {
        let (r, m) = (self.r, self.r.len());
        if !(d <= r[m - 1]) {
            return m;
        }
        let mut i = (((d - r[0]) * self.inv_step).max(0.0) as usize).min(m - 1);
        while i > 0 && r[i - 1] >= d {
            i -= 1;
        }
        while r[i] < d {
            i += 1;
        }
        i
    }
}

/// Difference-array accumulator over grid indices.
struct Counter(Vec<i64>);

impl Counter {
    fn new(m: usize) -> Self {
        Counter(vec![0; m + 1])
    }
    fn add(&mut self, (a, b): (usize, usize)) {
        if a < b {
            self.0[a] += 1;
            self.0[b] -= 1;
        }
    }
    fn totals(self) -> Vec<f64> {
        let mut acc = 0i64;
        let m = self.0.len() - 1;
        self.0[..m]
            .iter()
            .map(|d| {
                acc += d;
                acc as f64
            })
            .collect()
    }
}

fn ratio(num: &[f64], den: &[f64]) -> Vec<f64> {
    num.iter().zip(den).map(|(a, b)| if *b > 0.0 { a / b } else { 0.0 }).collect()
}

/// `K(r) = (|W| / n) sum_{b_i >= r} #{j != i: d_ij <= r} / #{i: b_i >= r}`
/// with `b_i` the distance from `x_i` to the window boundary.
pub fn estimate_k(x: &PointPattern, rgrid: &RGrid) -> Result<Curve> {
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let w = x.window();
    check_grid(rgrid, w)?;
    let r = rgrid.values();
    let pts = x.points();
    let idx = GridIndex::new(r);
    let mut num = Counter::new(r.len());
    let mut den = Counter::new(r.len());
    for (i, p) in pts.iter().enumerate() {
        let hi = r.partition_point(|&v| v <= w.border_distance(p));
        if hi == 0 {
            continue;
        }
        den.add((0, hi));
        let reach = r[hi - 1] * r[hi - 1] * (1.0 + 1e-12);
        for (j, q) in pts.iter().enumerate() {
            if i != j && p.dist2(q) <= reach {
                num.add((idx.first_at_least(p.dist(q)), hi));
            }
        }
    }
    let scale = w.area() / pts.len() as f64;
    let values = ratio(&num.totals(), &den.totals()).into_iter().map(|v| v * scale).collect();
    Ok(Curve::full(rgrid, values, SummaryKind::K))
}

/// Squared nearest distances from a row of nodes sharing `y` to the points,
/// via the lower envelope of the parabolas `(x - p.x)^2 + (y - p.y)^2`.
/// `pts` must be sorted by `x`; `xs` must be increasing.
fn row_nearest2(pts: &[Point], y: f64, xs: &[f64], out: &mut Vec<f64>, env: &mut Vec<(f64, f64, f64)>) {
    out.clear();
    if pts.is_empty() {
        out.resize(xs.len(), f64::INFINITY);
        return;
    }
    // (centre, offset, left end of the stretch where this parabola is lowest)
    env.clear();
    for p in pts {
        let (a, g) = (p.x, (y - p.y) * (y - p.y));
        loop {
            let Some(&(a0, g0, z0)) = env.last() else {
                env.push((a, g, f64::NEG_INFINITY));
                break;
            };
            if a == a0 {
                if g < g0 {
                    env.pop();
                    continue;
                }
                break;
            }
            let s = ((g + a * a) - (g0 + a0 * a0)) / (2.0 * (a - a0));
            if s <= z0 {
                env.pop();
                continue;
            }
            env.push((a, g, s));
            break;
        }
    }
    let mut k = 0;
    for &x in xs {
        while k + 1 < env.len() && env[k + 1].2 < x {
            k += 1;
        }
        let mut best = f64::INFINITY;
        // neighbours absorb rounding in the breakpoints
        for &(a, g, _) in &env[k.saturating_sub(1)..(k + 2).min(env.len())] {
            let dx = x - a;
            best = best.min(dx * dx + g);
        }
        out.push(best);
    }
}

/// Ratio `#{d <= r <= b} / #{b >= r}` over reference locations with event
/// distance `d` and border distance `b`.
fn border_ratio(r: &[f64], pairs: impl Iterator<Item = (f64, f64)>) -> Vec<f64> {
    let mut num = Counter::new(r.len());
    let mut den = Counter::new(r.len());
    for (d, b) in pairs {
        den.add(index_range(r, f64::NEG_INFINITY, b));
        num.add(index_range(r, d, b));
    }
    ratio(&num.totals(), &den.totals())
}

/// Pattern-independent part of the `F` estimator: lattice nodes, their
/// border distances and the denominator counts. Reusable across patterns on
/// the same window and grid.
#[derive(Debug, Clone)]
pub struct FLattice {
    window: Window,
    rgrid: RGrid,
    resolution: usize,
    nodes: Vec<Point>,
    /// End of the grid range with `r <= b(u)` per node.
    hi: Vec<u32>,
    den: Vec<f64>,
}

impl FLattice {
    pub fn new(window: &Window, rgrid: &RGrid, resolution: usize) -> Result<Self> {
        if resolution < 32 {
            return Err(invalid("F lattice resolution must be at least 32"));
        }
        check_grid(rgrid, window)?;
        let r = rgrid.values();
        let step = 1.0 / resolution as f64;
        let nodes: Vec<Point> = (0..resolution * resolution)
            .map(|c| window.point_at(((c % resolution) as f64 + 0.5) * step, ((c / resolution) as f64 + 0.5) * step))
            .collect();
        let mut den = Counter::new(r.len());
        let hi = nodes
            .iter()
            .map(|u| {
                let range = index_range(r, f64::NEG_INFINITY, window.border_distance(u));
                den.add(range);
                range.1 as u32
            })
            .collect();
        Ok(FLattice { window: *window, rgrid: rgrid.clone(), resolution, nodes, hi, den: den.totals() })
    }

    pub fn estimate(&self, x: &PointPattern) -> Result<Curve> {
        if x.window() != &self.window {
            return Err(invalid("pattern window differs from the lattice window"));
        }
        let r = self.rgrid.values();
        let mut pts = x.points().to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        let res = self.resolution;
        let xs: Vec<f64> = self.nodes[..res].iter().map(|u| u.x).collect();
        let (mut d2, mut env) = (Vec::with_capacity(res), Vec::new());
        let idx = GridIndex::new(r);
        let mut num = Counter::new(r.len());
        for (row, hi) in self.nodes.chunks(res).zip(self.hi.chunks(res)) {
            row_nearest2(&pts, row[0].y, &xs, &mut d2, &mut env);
            for (&e, &h) in d2.iter().zip(hi) {
                let lo = idx.first_at_least(sqrt(e));
                if lo < h as usize {
                    num.add((lo, h as usize));
                }
            }
        }
        Ok(Curve::full(&self.rgrid, ratio(&num.totals(), &self.den), SummaryKind::F))
    }
}

/// Empty space function over a `resolution x resolution` lattice of cell
/// centres.
pub fn estimate_f(x: &PointPattern, rgrid: &RGrid, resolution: usize) -> Result<Curve> {
    FLattice::new(x.window(), rgrid, resolution)?.estimate(x)
}

pub fn estimate_g(x: &PointPattern, rgrid: &RGrid) -> Result<Curve> {
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let w = x.window();
    check_grid(rgrid, w)?;
    let nn = nn_distances(x.points());
    let pairs = x.points().iter().zip(nn).map(|(p, d)| (d, w.border_distance(p)));
    Ok(Curve::full(rgrid, border_ratio(rgrid.values(), pairs), SummaryKind::G))
}

/// `J = (1 - G) / (1 - F)`, undefined where `F = 1`.
pub fn estimate_j(x: &PointPattern, rgrid: &RGrid, resolution: usize) -> Result<Curve> {
    let g = estimate_g(x, rgrid)?;
    let f = estimate_f(x, rgrid, resolution)?;
    j_from(&f, &g)
}

/// `J = (1 - G) / (1 - F)` from curves on the same grid; undefined where
/// `F = 1`.
pub fn j_from(f: &Curve, g: &Curve) -> Result<Curve> {
    if f.kind != SummaryKind::F || g.kind != SummaryKind::G {
        return Err(invalid("J needs an F curve and a G curve"));
    }
    if f.rgrid != g.rgrid {
        return Err(Error::MismatchedGrids);
    }
    let defined: Vec<bool> = f.values.iter().map(|&v| v < 1.0).collect();
    let values = f
        .values
        .iter()
        .zip(&g.values)
        .zip(&defined)
        .map(|((fv, gv), &d)| if d { (1.0 - gv) / (1.0 - fv) } else { f64::NAN })
        .collect();
    Ok(Curve { rgrid: f.rgrid.clone(), values, kind: SummaryKind::J, defined })
}

/// All four estimates, sharing the `F` and `G` work behind `J`.
pub fn estimate_all(x: &PointPattern, rgrid: &RGrid, resolution: usize) -> Result<[Curve; 4]> {
    estimate_all_with(x, &FLattice::new(x.window(), rgrid, resolution)?)
}

/// [`estimate_all`] with a prepared `F` lattice.
pub fn estimate_all_with(x: &PointPattern, lattice: &FLattice) -> Result<[Curve; 4]> {
    let k = estimate_k(x, &lattice.rgrid)?;
    let f = lattice.estimate(x)?;
    let g = estimate_g(x, &lattice.rgrid)?;
    let j = j_from(&f, &g)?;
    Ok([k, f, g, j])
}

pub fn estimate(kind: SummaryKind, x: &PointPattern, rgrid: &RGrid, resolution: usize) -> Result<Curve> {
    match kind {
        SummaryKind::K => estimate_k(x, rgrid),
        SummaryKind::F => estimate_f(x, rgrid, resolution),
        SummaryKind::G => estimate_g(x, rgrid),
        SummaryKind::J => estimate_j(x, rgrid, resolution),
    }
}
