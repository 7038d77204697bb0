//! Dense uniform grid over a point set, stored in compressed rows.
//!
//! Supports radius queries, nearest-neighbour search and collection of the
//! points lying in a tube around a line.

use crate::cloud::PointCloud;
use crate::geom::{dist2, Line};

const MAX_CELLS: usize = 1 << 24;

#[derive(Clone, Debug)]
pub struct UniformGrid {
    dim: usize,
    cell: f64,
    origin: Vec<f64>,
    shape: Vec<usize>,
    strides: Vec<usize>,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl UniformGrid {
    /// Grid over all points of `cloud` with cells of at least `cell` side.
    pub fn new(cloud: &PointCloud, cell: f64) -> Self {
        let all: Vec<u32> = (0..cloud.len() as u32).collect();
        Self::with_subset(cloud, &all, cell)
    }

    /// Grid holding only the listed point indices.
    pub fn with_subset(cloud: &PointCloud, subset: &[u32], cell: f64) -> Self {
        let dim = cloud.dim();
        let (lo, hi) = cloud.bounds();
        let mut cell = if cell.is_finite() && cell > 0.0 { cell } else { 1.0 };
        let extent: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
        let count = |c: f64| -> f64 {
            extent
                .iter()
                .map(|e| (e / c).floor() + 1.0)
                .product::<f64>()
        };
        while count(cell) > MAX_CELLS.max(4 * subset.len()) as f64 {
            cell *= 1.5;
        }
        let shape: Vec<usize> = extent.iter().map(|e| (e / cell).floor() as usize + 1).collect();
        let mut strides = vec![1usize; dim];
        for k in 1..dim {
            strides[k] = strides[k - 1] * shape[k - 1];
        }
        let ncell = strides[dim - 1] * shape[dim - 1];

        let mut grid = UniformGrid {
            dim,
            cell,
            origin: lo,
            shape,
            strides,
            starts: Vec::new(),
            items: Vec::new(),
        };
        let keys: Vec<usize> = subset
            .iter()
            .map(|&i| grid.linear(&grid.coords_of(cloud.point(i as usize))))
            .collect();
        let mut counts = vec![0u32; ncell + 1];
        for &k in &keys {
            counts[k + 1] += 1;
        }
        for k in 0..ncell {
            counts[k + 1] += counts[k];
        }
        let mut fill = counts.clone();
        let mut items = vec![0u32; subset.len()];
        for (&i, &k) in subset.iter().zip(&keys) {
            items[fill[k] as usize] = i;
            fill[k] += 1;
        }
        grid.starts = counts;
        grid.items = items;
        grid
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    fn coords_of(&self, x: &[f64]) -> Vec<i64> {
        x.iter()
            .zip(&self.origin)
            .map(|(xi, oi)| ((xi - oi) / self.cell).floor() as i64)
            .collect()
    }

    fn linear(&self, c: &[i64]) -> usize {
        c.iter()
            .zip(&self.strides)
            .zip(&self.shape)
            .map(|((&ci, s), &n)| (ci.clamp(0, n as i64 - 1) as usize) * s)
            .sum()
    }

    fn cell_items(&self, k: usize) -> &[u32] {
        &self.items[self.starts[k] as usize..self.starts[k + 1] as usize]
    }

    /// Calls `f` on every cell index in the box `lo..=hi` (clipped).
    fn for_box(&self, lo: &[i64], hi: &[i64], mut f: impl FnMut(usize)) {
        let d = self.dim;
        let lo: Vec<i64> = lo.iter().map(|&v| v.max(0)).collect();
        let hi: Vec<i64> = hi
            .iter()
            .zip(&self.shape)
            .map(|(&v, &n)| v.min(n as i64 - 1))
            .collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return;
        }
        let mut cur = lo.clone();
        loop {
            f(cur
                .iter()
                .zip(&self.strides)
                .map(|(&c, s)| c as usize * s)
                .sum());
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                cur[k] += 1;
                if cur[k] <= hi[k] {
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }

    /// Calls `f` on every stored index whose cell meets the ball `B(x, r)`;
    /// the caller filters by exact distance.
    pub fn for_each_near(&self, x: &[f64], r: f64, mut f: impl FnMut(u32)) {
        let lo: Vec<i64> = x
            .iter()
            .zip(&self.origin)
            .map(|(xi, oi)| ((xi - r - oi) / self.cell).floor() as i64)
            .collect();
        let hi: Vec<i64> = x
            .iter()
            .zip(&self.origin)
            .map(|(xi, oi)| ((xi + r - oi) / self.cell).floor() as i64)
            .collect();
        self.for_box(&lo, &hi, |k| {
            for &i in self.cell_items(k) {
                f(i)
            }
        });
    }

    /// True when some stored point lies strictly closer than `r` to `x`.
    pub fn any_within(&self, cloud: &PointCloud, x: &[f64], r: f64) -> bool {
        let r2 = r * r;
        let mut found = false;
        self.for_each_near(x, r, |i| {
            if !found && dist2(cloud.point(i as usize), x) < r2 {
                found = true;
            }
        });
        found
    }

    /// Calls `f` on the cells at Chebyshev distance exactly `s` from cell `c`.
    fn for_shell(&self, c: &[i64], s: i64, mut f: impl FnMut(usize)) {
        let lo: Vec<i64> = c.iter().map(|v| v - s).collect();
        let hi: Vec<i64> = c.iter().map(|v| v + s).collect();
        self.for_box(&lo, &hi, |k| {
            let mut rem = k;
            let mut on_shell = false;
            for axis in (0..self.dim).rev() {
                let ck = (rem / self.strides[axis]) as i64;
                rem %= self.strides[axis];
                if (ck - c[axis]).abs() == s {
                    on_shell = true;
                }
            }
            if on_shell {
                f(k)
            }
        });
    }

    /// Distance from stored point `i` to its nearest other stored point.
    pub fn nearest_other(&self, cloud: &PointCloud, i: usize) -> f64 {
        let x = cloud.point(i);
        let c = self.coords_of(x);
        let mut best = f64::INFINITY;
        let max_shell = *self.shape.iter().max().unwrap_or(&1) as i64;
        for s in 0..=max_shell {
            self.for_shell(&c, s, |k| {
                for &j in self.cell_items(k) {
                    if j as usize != i {
                        let d2 = dist2(cloud.point(j as usize), x);
                        if d2 < best {
                            best = d2;
                        }
                    }
                }
            });
            if best.is_finite() && best.sqrt() <= s as f64 * self.cell {
                break;
            }
        }
        best.sqrt()
    }

    /// Same answer as [`any_within`](Self::any_within), scanning outward
    /// from the cell of `x` and stopping at the first hit.
    pub fn any_within_nearest_first(&self, cloud: &PointCloud, x: &[f64], r: f64) -> bool {
        let c = self.coords_of(x);
        let r2 = r * r;
        // a point in shell s is farther than (s - 1) cells from x
        let reach = (r / self.cell).ceil() as i64 + 1;
        for s in 0..=reach {
            let mut found = false;
            self.for_shell(&c, s, |k| {
                if !found {
                    found = self.cell_items(k).iter().any(|&j| dist2(cloud.point(j as usize), x) < r2);
                }
            });
            if found {
                return true;
            }
        }
        false
    }

    /// Indices of stored points within distance `r` of `line`, ascending.
    pub fn near_line(&self, cloud: &PointCloud, line: &Line, r: f64, out: &mut Vec<u32>) {
        self.near_segment(cloud, line, f64::NEG_INFINITY, f64::INFINITY, r, out);
    }

    /// Like [`near_line`](Self::near_line) restricted to points whose
    /// projection on the line falls in `[lo - r, hi + r]`.
    pub fn near_segment(&self, cloud: &PointCloud, line: &Line, lo: f64, hi: f64, r: f64, out: &mut Vec<u32>) {
        out.clear();
        let Some((t0, t1)) = self.clip(line, r) else {
            return;
        };
        let (t0, t1) = (t0.max(lo - r), t1.min(hi + r));
        if t0 > t1 {
            return;
        }
        let step = self.cell;
        let reach = r + 0.5 * step;
        let mut cells: Vec<usize> = Vec::new();
        let n = ((t1 - t0) / step).ceil().max(0.0) as usize;
        for s in 0..=n {
            let p = line.point_at(t0 + s as f64 * step);
            let lo: Vec<i64> = p
                .iter()
                .zip(&self.origin)
                .map(|(xi, oi)| ((xi - reach - oi) / self.cell).floor() as i64)
                .collect();
            let hi: Vec<i64> = p
                .iter()
                .zip(&self.origin)
                .map(|(xi, oi)| ((xi + reach - oi) / self.cell).floor() as i64)
                .collect();
            self.for_box(&lo, &hi, |k| cells.push(k));
        }
        cells.sort_unstable();
        cells.dedup();
        let r2 = r * r;
        for k in cells {
            for &i in self.cell_items(k) {
                let x = cloud.point(i as usize);
                if line.dist2_to(x) <= r2 && (t0..=t1).contains(&line.param_of(x)) {
                    out.push(i);
                }
            }
        }
        out.sort_unstable();
    }

    /// Parameter range of `line` inside the grid box grown by `pad`.
    fn clip(&self, line: &Line, pad: f64) -> Option<(f64, f64)> {
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for k in 0..self.dim {
            let lo = self.origin[k] - pad;
            let hi = self.origin[k] + self.shape[k] as f64 * self.cell + pad;
            let o = line.origin()[k];
            let t = line.theta()[k];
            if t.abs() < 1e-300 {
                if o < lo || o > hi {
                    return None;
                }
                continue;
            }
            let (a, b) = ((lo - o) / t, (hi - o) / t);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t0 <= t1).then_some((t0, t1))
    }
}
