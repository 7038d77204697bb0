//! Line counter based on the union of balls `U = ∪ B(X_i, eps)`.
//!
//! A line meets `U` in a few intervals. Two neighbouring intervals are
//! grouped when the gap between them is covered by the union of the balls
//! of radius `4 eps`; the count is twice the number of groups.
//!
//! Only balls whose Voronoi cell reaches distance `eps` from their center
//! can carry boundary points of `U`. In the plane those centers are found
//! through the Delaunay triangulation and the line is cut with them first;
//! the remaining balls are consulted only inside the gaps this leaves.

use crate::alphahull::delaunay2;
use crate::cloud::PointCloud;
use crate::error::{param, Error, Result};
use crate::geom::{intersect_ball, union_intervals, Ball, Interval, IntervalSet, Line};
use crate::grid::UniformGrid;

/// Radius multiplier of the balls used to merge gaps.
pub const MERGE_FACTOR: f64 = 4.0;

/// `2 * max_i min_{j != i} |X_i - X_j|`.
pub fn auto_epsilon(points: &PointCloud) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let grid = UniformGrid::new(points, typical_spacing(points));
    let worst = (0..points.len())
        .map(|i| grid.nearest_other(points, i))
        .fold(0.0, f64::max);
    Ok(2.0 * worst)
}

/// Side of a cube holding one point on average, measured over the axes
/// along which the cloud actually extends.
fn typical_spacing(points: &PointCloud) -> f64 {
    let (lo, hi) = points.bounds();
    let extents: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| b - a).filter(|e| *e > 0.0).collect();
    if extents.is_empty() {
        return 1.0;
    }
    let vol: f64 = extents.iter().product();
    let s = (vol / points.len() as f64).powf(1.0 / extents.len() as f64);
    let longest = extents.iter().copied().fold(0.0, f64::max);
    if s.is_finite() && s > 0.0 {
        s.max(longest * 1e-6)
    } else {
        longest / points.len() as f64
    }
}

/// Indices of the balls used to cut lines.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCenters {
    pub indices: Vec<u32>,
    /// False when every point was kept because no Voronoi structure was
    /// available (dimension above two, or a degenerate planar cloud).
    pub filtered: bool,
}

/// Points whose Voronoi cell is unbounded or has a vertex at distance at
/// least `epsilon`. Outside the plane all points are returned.
pub fn boundary_centers(points: &PointCloud, epsilon: f64) -> Result<BoundaryCenters> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(param("epsilon", format!("{epsilon} must be positive")));
    }
    let all = || BoundaryCenters {
        indices: (0..points.len() as u32).collect(),
        filtered: false,
    };
    if points.dim() != 2 {
        return Ok(all());
    }
    let tri = match delaunay2(points) {
        Ok(t) => t,
        Err(Error::Degenerate(_) | Error::TooFewPoints { .. }) => return Ok(all()),
        Err(e) => return Err(e),
    };
    let mut keep = vec![false; points.len()];
    for v in tri.hull_vertices() {
        keep[v as usize] = true;
    }
    for (t, tr) in tri.triangles().iter().enumerate() {
        if tri.circumradius(t) >= epsilon {
            for &v in tr {
                keep[v as usize] = true;
            }
        }
    }
    Ok(BoundaryCenters {
        indices: (0..points.len() as u32).filter(|&i| keep[i as usize]).collect(),
        filtered: true,
    })
}

/// A cloud prepared for union-of-balls line queries at a fixed radius.
#[derive(Clone, Debug)]
pub struct DwIndex {
    points: PointCloud,
    epsilon: f64,
    centers: BoundaryCenters,
    center_grid: UniformGrid,
    // every point; only needed when some were filtered out
    full_grid: Option<UniformGrid>,
}

impl DwIndex {
    pub fn new(points: PointCloud, epsilon: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        let centers = boundary_centers(&points, epsilon)?;
        let center_grid = UniformGrid::with_subset(&points, &centers.indices, epsilon);
        let full_grid = (centers.indices.len() < points.len()).then(|| UniformGrid::new(&points, epsilon));
        Ok(DwIndex {
            points,
            epsilon,
            centers,
            center_grid,
            full_grid,
        })
    }

    /// Index without Voronoi filtering: every point is a center.
    pub fn unfiltered(points: PointCloud, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(param("epsilon", format!("{epsilon} must be positive")));
        }
        if points.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        let centers = BoundaryCenters {
            indices: (0..points.len() as u32).collect(),
            filtered: false,
        };
        let center_grid = UniformGrid::new(&points, epsilon);
        Ok(DwIndex {
            points,
            epsilon,
            centers,
            center_grid,
            full_grid: None,
        })
    }

    pub fn points(&self) -> &PointCloud {
        &self.points
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn centers(&self) -> &BoundaryCenters {
        &self.centers
    }

    fn ball_intervals(&self, line: &Line, ids: &[u32], radius: f64, out: &mut Vec<Interval>) {
        for &i in ids {
            let ball = Ball {
                center: self.points.point(i as usize).to_vec(),
                radius,
            };
            if let Some(iv) = intersect_ball(line, &ball) {
                out.push(iv);
            }
        }
    }
}

/// Reusable buffers for repeated queries.
#[derive(Default)]
pub struct Scratch {
    ids: Vec<u32>,
    items: Vec<Interval>,
}

/// Intervals of `line` inside the union of the center balls of the given
/// radius.
pub fn line_components(line: &Line, index: &DwIndex, radius: f64) -> IntervalSet {
    let mut s = Scratch::default();
    center_components(line, index, radius, &mut s)
}

fn center_components(line: &Line, index: &DwIndex, radius: f64, s: &mut Scratch) -> IntervalSet {
    index.center_grid.near_line(&index.points, line, radius, &mut s.ids);
    s.items.clear();
    index.ball_intervals(line, &s.ids, radius, &mut s.items);
    union_intervals(std::mem::take(&mut s.items))
}

/// Intervals of `line` inside the union of all balls of radius epsilon.
///
/// Cut with the center balls first; a filtered-out ball can only show up
/// inside a gap between those intervals, so only the gaps are searched.
pub fn union_components(line: &Line, index: &DwIndex, s: &mut Scratch) -> IntervalSet {
    let eps = index.epsilon;
    let base = center_components(line, index, eps, s);
    let Some(full) = &index.full_grid else {
        return base;
    };
    if base.len() < 2 {
        return base;
    }
    let mut items: Vec<Interval> = base.intervals().to_vec();
    for w in base.intervals().windows(2) {
        let (lo, hi) = (w[0].hi, w[1].lo);
        let t = cover_walk(line, full, &index.points, lo, hi, eps);
        if t >= hi {
            items.push(Interval { lo, hi });
            continue;
        }
        if t > lo {
            items.push(Interval { lo, hi: t });
        }
        full.near_segment(&index.points, line, t, hi, eps, &mut s.ids);
        index.ball_intervals(line, &s.ids, eps, &mut items);
    }
    union_intervals(items)
}

/// Walks `[lo, hi]` from the left through balls of radius `r` found near the
/// current position. Returns how far the walk got; everything before that is
/// covered.
fn cover_walk(line: &Line, grid: &UniformGrid, points: &PointCloud, lo: f64, hi: f64, r: f64) -> f64 {
    let r2 = r * r;
    let mut t = lo;
    while t < hi {
        let x = line.point_at(t);
        let reach = |rad: f64| {
            let mut best = t;
            grid.for_each_near(&x, rad, |i| {
                let p = points.point(i as usize);
                let h2 = r2 - line.dist2_to(p);
                if h2 > 0.0 {
                    let (s, h) = (line.param_of(p), h2.sqrt());
                    if s - h <= t && s + h > best {
                        best = s + h;
                    }
                }
            });
            best
        };
        let mut best = reach(0.0);
        if best <= t {
            best = reach(r);
        }
        if best <= t {
            break;
        }
        t = best;
    }
    t
}

/// The union-of-balls estimate of the number of boundary crossings.
pub fn hat_n(line: &Line, index: &DwIndex) -> usize {
    hat_n_with(line, index, &mut Scratch::default())
}

pub fn hat_n_with(line: &Line, index: &DwIndex, s: &mut Scratch) -> usize {
    let comps = union_components(line, index, s);
    if comps.is_empty() {
        return 0;
    }
    let wide = MERGE_FACTOR * index.epsilon;
    let mut groups = comps.len();
    for w in comps.intervals().windows(2) {
        let (lo, hi) = (w[0].hi, w[1].lo);
        // gap points are nearer to a center than to any filtered point, so
        // the wide balls of the centers decide coverage
        index.center_grid.near_segment(&index.points, line, lo, hi, wide, &mut s.ids);
        s.items.clear();
        index.ball_intervals(line, &s.ids, wide, &mut s.items);
        let cover = union_intervals(std::mem::take(&mut s.items));
        if cover.covering(lo, hi).is_some() {
            groups -= 1;
        }
    }
    2 * groups
}

/// `min(hat_n, n0)`.
pub fn hat_n_capped(line: &Line, index: &DwIndex, n0: usize) -> Result<usize> {
    if n0 < 2 {
        return Err(param("cap", format!("{n0} is below 2")));
    }
    Ok(hat_n(line, index).min(n0))
}
