//! Uniform-cell bucketing for fixed-radius neighbour counts in the chain
//! samplers and pseudo-likelihood quadrature.

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::{Point, Window};
use crate::math::floor;

/// Mutable point set with `O(1)` insert/remove and local neighbour counts.
/// Removal is `swap_remove`: the last point takes the freed index.
#[derive(Debug, Clone)]
pub(crate) struct CellIndex {
    x0: f64,
    y0: f64,
    inv_cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
    points: Vec<Point>,
    loc: Vec<(u32, u32)>,
}

impl CellIndex {
    /// Cells are at least `radius` wide so a query touches at most 3x3 cells.
    pub(crate) fn new(bounds: &Window, radius: f64) -> Self {
        let cell = radius.max(bounds.min_side() / 256.0).max(1e-12);
        let nx = ((bounds.width() / cell) as usize).clamp(1, 1024);
        let ny = ((bounds.height() / cell) as usize).clamp(1, 1024);
        // rounding the count down keeps cells >= radius
        let inv_cell = (nx as f64 / bounds.width()).min(ny as f64 / bounds.height());
        CellIndex {
            x0: bounds.xmin(),
            y0: bounds.ymin(),
            inv_cell,
            nx,
            ny,
            cells: vec![Vec::new(); nx * ny],
            points: Vec::new(),
            loc: Vec::new(),
        }
    }

    pub(crate) fn from_points(bounds: &Window, radius: f64, pts: &[Point]) -> Self {
        let mut idx = CellIndex::new(bounds, radius);
        for p in pts {
            idx.insert(*p);
        }
        idx
    }

    #[inline]
    fn coord(&self, v: f64, origin: f64, n: usize) -> usize {
        let c = floor((v - origin) * self.inv_cell);
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(n - 1)
        }
    }

    #[inline]
    fn cell_of(&self, p: &Point) -> usize {
        self.coord(p.y, self.y0, self.ny) * self.nx + self.coord(p.x, self.x0, self.nx)
    }

    pub(crate) fn len(&self) -> usize {
        self.points.len()
    }

    pub(crate) fn points(&self) -> &[Point] {
        &self.points
    }

    pub(crate) fn get(&self, i: usize) -> Point {
        self.points[i]
    }

    pub(crate) fn insert(&mut self, p: Point) -> usize {
        let c = self.cell_of(&p);
        let id = self.points.len();
        self.loc.push((c as u32, self.cells[c].len() as u32));
        self.cells[c].push(id as u32);
        self.points.push(p);
        id
    }

    pub(crate) fn remove(&mut self, i: usize) -> Point {
        let (c, slot) = self.loc[i];
        let bucket = &mut self.cells[c as usize];
        bucket.swap_remove(slot as usize);
        if let Some(&moved) = bucket.get(slot as usize) {
            self.loc[moved as usize].1 = slot;
        }
        let last = self.points.len() - 1;
        if i != last {
            let (lc, lslot) = self.loc[last];
            self.cells[lc as usize][lslot as usize] = i as u32;
        }
        self.loc.swap_remove(i);
        self.points.swap_remove(i)
    }

    /// Replace point `i` in place.
    pub(crate) fn relocate(&mut self, i: usize, p: Point) {
        let (c, slot) = self.loc[i];
        let nc = self.cell_of(&p);
        if nc != c as usize {
            let bucket = &mut self.cells[c as usize];
            bucket.swap_remove(slot as usize);
            if let Some(&moved) = bucket.get(slot as usize) {
                self.loc[moved as usize].1 = slot;
            }
            self.loc[i] = (nc as u32, self.cells[nc].len() as u32);
            self.cells[nc].push(i as u32);
        }
        self.points[i] = p;
    }

    /// Points within closed distance `r` of `u`, skipping index `skip`.
    pub(crate) fn count_within(&self, u: &Point, r: f64, skip: Option<usize>) -> u32 {
        let mut n = 0;
        self.for_each_within(u, r, |j| {
            if Some(j) != skip {
                n += 1;
            }
        });
        n
    }

    pub(crate) fn for_each_within(&self, u: &Point, r: f64, mut f: impl FnMut(usize)) {
        let r2 = r * r;
        let cx0 = self.coord(u.x - r, self.x0, self.nx);
        let cx1 = self.coord(u.x + r, self.x0, self.nx);
        let cy0 = self.coord(u.y - r, self.y0, self.ny);
        let cy1 = self.coord(u.y + r, self.y0, self.ny);
        for cy in cy0..=cy1 {
            for cx in cx0..=cx1 {
                for &j in &self.cells[cy * self.nx + cx] {
                    if self.points[j as usize].dist2(u) <= r2 {
                        f(j as usize);
                    }
                }
            }
        }
    }
}
