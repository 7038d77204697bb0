//! The alpha-convex hull of a planar sample and its line-crossing counter.
//!
//! The complement of the hull is covered by finitely many open pieces: a
//! half-plane beyond every convex-hull edge and the empty disks of radius
//! alpha anchored at the endpoints of Delaunay edges. The boundary of the
//! hull is made of the arcs of those disks running between their two
//! anchors on the side facing the sample, which is what [`check_n`] counts.

pub mod delaunay;
pub mod hull;

pub use delaunay::{delaunay2, Triangulation2};
pub use hull::{convex_hull2, hull_indices};

use crate::cloud::PointCloud;
use crate::error::{param, Error, Result};
use crate::geom::{dist, dot, intersect_ball, Ball, HalfSpace, Line};
use crate::grid::UniformGrid;

use delaunay::NONE;

/// Strictness margin for membership and for merging crossings, relative
/// to alpha.
pub const STRICT_TOL: f64 = 1e-9;

/// Open sets whose union is the complement of the alpha-convex hull.
///
/// Each ball and each half-space is sample-free in its interior. A half-space
/// `{<n, x> <= c}` here stands for its interior `{<n, x> < c}`, the outer side
/// of a hull edge.
#[derive(Clone, Debug)]
pub struct ComplementElements {
    alpha: f64,
    balls: Vec<Ball>,
    anchors: Vec<Option<[[f64; 2]; 2]>>,
    halfspaces: Vec<HalfSpace>,
    centers: PointCloud,
    grid: UniformGrid,
    samples: PointCloud,
    sample_grid: UniformGrid,
    // samples whose alpha-circle carries part of the boundary of the set of
    // empty-disk centers
    site_grid: UniformGrid,
}

impl ComplementElements {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    /// True when `z` lies outside the alpha-convex hull by more than `tol`:
    /// in the interior of some element, or of an empty disk of radius alpha
    /// touching a single sample.
    pub fn contains_strictly(&self, z: &[f64], tol: f64) -> bool {
        self.in_some_halfspace(z, tol) || self.in_some_ball(z, tol, usize::MAX) || self.in_touching_disk(z, tol)
    }

    /// Empty disks touching one sample `x` that reach `z` are best placed on
    /// the ray from `x` through `z`.
    fn in_touching_disk(&self, z: &[f64], tol: f64) -> bool {
        let a = self.alpha;
        if !self.sample_grid.any_within_nearest_first(&self.samples, z, a) {
            return true;
        }
        let mut hit = false;
        self.site_grid.for_each_near(z, 2.0 * a, |k| {
            if hit {
                return;
            }
            let x = self.samples.point(k as usize);
            let r = dist(x, z);
            if r == 0.0 || (r - a).abs() >= a - tol {
                return;
            }
            let c = [x[0] + a * (z[0] - x[0]) / r, x[1] + a * (z[1] - x[1]) / r];
            hit = !self.sample_grid.any_within_nearest_first(&self.samples, &c, a * (1.0 - 1e-12));
        });
        hit
    }

    fn in_some_ball(&self, z: &[f64], tol: f64, skip: usize) -> bool {
        let mut hit = false;
        self.grid.for_each_near(z, self.alpha, |i| {
            let i = i as usize;
            if !hit && i != skip && self.balls[i].contains_strictly(z, tol) {
                hit = true;
            }
        });
        hit
    }

    fn in_some_halfspace(&self, z: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().any(|h| dot(&h.normal, z) < h.offset - tol)
    }
}

/// Builds the complement of the alpha-convex hull of a planar cloud.
pub fn alpha_complement2(points: &PointCloud, alpha: f64) -> Result<ComplementElements> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(param("alpha", format!("{alpha} must be positive")));
    }
    if points.dim() != 2 {
        return Err(Error::InvalidDimension {
            got: points.dim(),
            expected: "2",
        });
    }
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    let mut b = ElementBuilder::default();
    if pts.len() < 3 || delaunay::all_collinear(&pts) {
        collinear_elements(&pts, alpha, &mut b);
        b.sites = (0..pts.len() as u32).collect();
    } else {
        let tri = delaunay2(points)?;
        let mut short = vec![false; pts.len()];
        for (t, i) in tri.edges() {
            let (p, q) = tri.edge_vertices(t, i);
            if dist(&pts[p as usize], &pts[q as usize]) <= 2.0 * alpha {
                short[p as usize] = true;
                short[q as usize] = true;
            }
            anchored_disks(&tri, t, i, alpha, &mut b);
        }
        // a point with no neighbour within 2 alpha keeps its whole circle
        b.sites.extend((0..pts.len() as u32).filter(|&v| !short[v as usize] && tri.skipped().binary_search(&v).is_err()));
        let hull = hull_indices(points)?;
        let m = hull.len();
        for k in 0..m {
            let a = pts[hull[k] as usize];
            let c = pts[hull[(k + 1) % m] as usize];
            let inner = hull::edge_halfspace(&a, &c);
            b.halfspace(outer(&inner));
        }
    }
    b.finish(points, alpha)
}

#[derive(Default)]
struct ElementBuilder {
    sites: Vec<u32>,
    balls: Vec<Ball>,
    anchors: Vec<Option<[[f64; 2]; 2]>>,
    halfspaces: Vec<HalfSpace>,
}

impl ElementBuilder {
    fn ball(&mut self, center: [f64; 2], alpha: f64, anchors: Option<[[f64; 2]; 2]>) {
        self.balls.push(Ball {
            center: center.to_vec(),
            radius: alpha,
        });
        self.anchors.push(anchors);
    }

    fn halfspace(&mut self, h: HalfSpace) {
        self.halfspaces.push(h);
    }

    fn finish(mut self, samples: &PointCloud, alpha: f64) -> Result<ComplementElements> {
        let flat: Vec<f64> = self.balls.iter().flat_map(|b| b.center.iter().copied()).collect();
        let centers = PointCloud::from_flat(2, flat)?;
        let grid = UniformGrid::new(&centers, alpha);
        self.sites.sort_unstable();
        self.sites.dedup();
        let samples = samples.clone();
        let sample_grid = UniformGrid::new(&samples, 0.5 * alpha);
        let site_grid = UniformGrid::with_subset(&samples, &self.sites, alpha);
        Ok(ComplementElements {
            samples,
            sample_grid,
            site_grid,
            alpha,
            balls: self.balls,
            anchors: self.anchors,
            halfspaces: self.halfspaces,
            centers,
            grid,
        })
    }
}

fn outer(inner: &HalfSpace) -> HalfSpace {
    HalfSpace {
        normal: inner.normal.iter().map(|v| -v).collect(),
        offset: -inner.offset,
    }
}

/// Disks of radius `alpha` through the endpoints of a Delaunay edge whose
/// centers lie on the edge's Voronoi segment, hence sample-free.
fn anchored_disks(tri: &Triangulation2, t: usize, i: usize, alpha: f64, b: &mut ElementBuilder) {
    let (ia, ib) = tri.edge_vertices(t, i);
    let p = tri.points()[ia as usize];
    let q = tri.points()[ib as usize];
    let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
    let len = dx.hypot(dy);
    if len > 2.0 * alpha || len == 0.0 {
        return;
    }
    let mid = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    // unit normal pointing into triangle t
    let n = [-dy / len, dx / len];
    let along = |c: [f64; 2]| (c[0] - mid[0]) * n[0] + (c[1] - mid[1]) * n[1];
    let hi = along(tri.circumcenter(t));
    let nb = tri.neighbors()[t][i];
    let lo = if nb == NONE {
        f64::NEG_INFINITY
    } else {
        along(tri.circumcenter(nb as usize))
    };
    let h = (alpha * alpha - 0.25 * len * len).max(0.0).sqrt();
    let slack = STRICT_TOL * alpha;
    for s in [-h, h] {
        if s >= lo - slack && s <= hi + slack {
            b.ball([mid[0] + s * n[0], mid[1] + s * n[1]], alpha, Some([p, q]));
            b.sites.extend([ia, ib]);
        }
        if h == 0.0 {
            break;
        }
    }
}

/// Elements for a sample on a single line: the two open sides of the line,
/// the two caps beyond the extreme points, and disks covering the open gaps
/// between consecutive points. None of their boundaries is counted.
fn collinear_elements(pts: &[[f64; 2]], alpha: f64, b: &mut ElementBuilder) {
    let a = pts[0];
    let Some(&far) = pts.iter().max_by(|p, q| {
        let dp = (p[0] - a[0]).hypot(p[1] - a[1]);
        let dq = (q[0] - a[0]).hypot(q[1] - a[1]);
        dp.total_cmp(&dq)
    }) else {
        return;
    };
    let len = (far[0] - a[0]).hypot(far[1] - a[1]);
    let u = if len > 0.0 {
        [(far[0] - a[0]) / len, (far[1] - a[1]) / len]
    } else {
        [1.0, 0.0]
    };
    let n = [-u[1], u[0]];
    let c = n[0] * a[0] + n[1] * a[1];
    b.halfspace(HalfSpace { normal: n.to_vec(), offset: c });
    b.halfspace(HalfSpace { normal: vec![-n[0], -n[1]], offset: -c });
    let mut ts: Vec<f64> = pts.iter().map(|p| (p[0] - a[0]) * u[0] + (p[1] - a[1]) * u[1]).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let at = |t: f64| [a[0] + t * u[0], a[1] + t * u[1]];
    let first = at(ts[0]);
    let last = at(ts[ts.len() - 1]);
    b.halfspace(HalfSpace { normal: u.to_vec(), offset: u[0] * first[0] + u[1] * first[1] });
    b.halfspace(HalfSpace { normal: vec![-u[0], -u[1]], offset: -(u[0] * last[0] + u[1] * last[1]) });
    for w in ts.windows(2) {
        let gap = w[1] - w[0];
        let m = at(0.5 * (w[0] + w[1]));
        if gap > 2.0 * alpha {
            let mut t = w[0] + alpha;
            while t < w[1] - alpha {
                b.ball(at(t), alpha, None);
                t += alpha;
            }
            b.ball(at(w[1] - alpha), alpha, None);
        } else {
            let h = (alpha * alpha - 0.25 * gap * gap).max(0.0).sqrt();
            for s in [-h, h] {
                b.ball([m[0] + s * n[0], m[1] + s * n[1]], alpha, None);
            }
        }
    }
}

/// Number of points where `line` crosses the boundary of the alpha-convex
/// hull described by `comp`.
pub fn check_n(line: &Line, comp: &ComplementElements) -> usize {
    let mut cand = Vec::new();
    check_n_with(line, comp, &mut cand)
}

pub(crate) fn check_n_with(line: &Line, comp: &ComplementElements, cand: &mut Vec<u32>) -> usize {
    let tol = STRICT_TOL * comp.alpha;
    let mut crossings: Vec<f64> = Vec::new();
    comp.grid.near_line(&comp.centers, line, comp.alpha, cand);
    for &i in cand.iter() {
        let i = i as usize;
        let Some([p, q]) = comp.anchors[i] else {
            continue;
        };
        let Some(iv) = intersect_ball(line, &comp.balls[i]) else {
            continue;
        };
        let c = &comp.balls[i].center;
        let side_c = side(p, q, c);
        for lam in [iv.lo, iv.hi] {
            let z = line.point_at(lam);
            // only the arc between the anchors on the far side from the center
            if side(p, q, &z) * side_c >= 0.0 {
                continue;
            }
            if !comp.in_some_ball(&z, tol, i) && !comp.in_some_halfspace(&z, tol) && !comp.in_touching_disk(&z, tol)
            {
                crossings.push(lam);
            }
        }
    }
    crossings.sort_by(f64::total_cmp);
    crossings.dedup_by(|a, b| (*a - *b).abs() <= tol);
    crossings.len()
}

fn side(p: [f64; 2], q: [f64; 2], z: &[f64]) -> f64 {
    (q[0] - p[0]) * (z[1] - p[1]) - (q[1] - p[1]) * (z[0] - p[0])
}

/// Exact membership of `z` in the complement of the alpha-convex hull, by
/// brute force. With `F` the set of centers at distance at least `alpha`
/// from every sample, `z` is outside the hull iff `dist(z, F) < alpha`; the
/// nearest point of `F` is `z` itself, a radial point on one sample circle,
/// or an intersection of two sample circles.
#[cfg(test)]
pub(crate) struct HullOracle {
    pts: Vec<[f64; 2]>,
    alpha: f64,
    corners: Vec<[f64; 2]>,
}

#[cfg(test)]
impl HullOracle {
    pub(crate) fn new(points: &PointCloud, alpha: f64) -> Self {
        let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
        let mut o = HullOracle { pts, alpha, corners: Vec::new() };
        let n = o.pts.len();
        for i in 0..n {
            for j in i + 1..n {
                let (p, q) = (o.pts[i], o.pts[j]);
                let len = (q[0] - p[0]).hypot(q[1] - p[1]);
                if len == 0.0 || len > 2.0 * alpha {
                    continue;
                }
                let h = (alpha * alpha - 0.25 * len * len).max(0.0).sqrt();
                let m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
                let nrm = [-(q[1] - p[1]) / len, (q[0] - p[0]) / len];
                for s in [-h, h] {
                    let c = [m[0] + s * nrm[0], m[1] + s * nrm[1]];
                    if o.in_f(c, 1e-9) {
                        o.corners.push(c);
                    }
                }
            }
        }
        o
    }

    fn in_f(&self, c: [f64; 2], tol: f64) -> bool {
        self.pts.iter().all(|x| (x[0] - c[0]).hypot(x[1] - c[1]) >= self.alpha - tol * self.alpha)
    }

    pub(crate) fn outside(&self, z: &[f64]) -> bool {
        let z = [z[0], z[1]];
        let a = self.alpha;
        let d = |u: [f64; 2]| (u[0] - z[0]).hypot(u[1] - z[1]);
        if self.in_f(z, 0.0) {
            return true;
        }
        if self.corners.iter().any(|&c| d(c) < a) {
            return true;
        }
        self.pts.iter().any(|&x| {
            let r = d(x);
            if r == 0.0 || r >= 2.0 * a {
                return false;
            }
            let c = [x[0] + a * (z[0] - x[0]) / r, x[1] + a * (z[1] - x[1]) / r];
            (r - a).abs() < a && self.in_f(c, 1e-12)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{dist, sample_direction, Direction};
    use crate::shapes::{sample_iid, Shape};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_line(rng: &mut ChaCha8Rng, half: f64) -> Line {
        let theta = sample_direction(rng, 2).unwrap();
        Line::new(theta, vec![rng.random_range(-half..half)]).unwrap()
    }

    #[test]
    fn rejects_bad_alpha() {
        let tri = PointCloud::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(alpha_complement2(&tri, 0.0), Err(Error::InvalidParameter { .. })));
        assert!(matches!(alpha_complement2(&tri, -1.0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn equilateral_triangle_matches_oracle() {
        let h = 3f64.sqrt() / 2.0;
        let pts = PointCloud::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.5, h]).unwrap();
        let alpha = 10.0;
        let comp = alpha_complement2(&pts, alpha).unwrap();
        assert_eq!(comp.halfspaces().len(), 3);
        let oracle = HullOracle::new(&pts, alpha);
        let m = 200;
        let mut agree = 0;
        let mut total = 0;
        for i in 0..m {
            for j in 0..m {
                let z = [-0.25 + 1.5 * (i as f64 + 0.5) / m as f64, -0.25 + 1.4 * (j as f64 + 0.5) / m as f64];
                let ours = comp.contains_strictly(&z, 0.0);
                // cheap exact shortcut: outside the triangle means outside the hull
                let inside_tri = z[1] >= 0.0 && h * z[0] - 0.5 * z[1] >= 0.0 && h * (1.0 - z[0]) - 0.5 * z[1] >= 0.0;
                let truth = !inside_tri || oracle.outside(&z);
                agree += (ours == truth) as usize;
                total += 1;
            }
        }
        assert!(agree as f64 >= 0.999 * total as f64, "{agree}/{total}");
    }

    #[test]
    fn two_far_points_leave_only_the_points() {
        let pts = PointCloud::from_flat(2, vec![0.0, 0.0, 3.0, 0.0]).unwrap();
        let comp = alpha_complement2(&pts, 1.0).unwrap();
        for k in 1..300 {
            let x = 3.0 * k as f64 / 300.0;
            for y in [0.0, 0.3, -0.7] {
                assert!(comp.contains_strictly(&[x, y], 0.0), "({x},{y})");
            }
        }
        assert!(!comp.contains_strictly(&[0.0, 0.0], 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            assert_eq!(check_n(&random_line(&mut rng, 3.0), &comp), 0);
        }
    }

    #[test]
    fn elements_are_sample_free() {
        let disk = Shape::disk(1.0).unwrap();
        let pts = sample_iid(&disk, 500, 9).unwrap();
        let comp = alpha_complement2(&pts, 0.5).unwrap();
        assert!(!comp.balls().is_empty());
        for x in pts.iter() {
            for b in comp.balls() {
                assert!(dist(&b.center, x) >= b.radius - 1e-9);
            }
            for h in comp.halfspaces() {
                assert!(dot(&h.normal, x) >= h.offset - 1e-9);
            }
        }
    }

    #[test]
    fn sample_points_are_not_in_the_complement() {
        let shape = Shape::annulus(1.0, 2.0).unwrap();
        let pts = sample_iid(&shape, 2000, 4).unwrap();
        let comp = alpha_complement2(&pts, 0.4).unwrap();
        assert!(pts.iter().all(|x| !comp.contains_strictly(x, 1e-9)));
    }

    #[test]
    fn pointwise_membership_matches_oracle() {
        let shape = Shape::annulus(1.0, 2.0).unwrap();
        let pts = sample_iid(&shape, 400, 8).unwrap();
        let alpha = 0.4;
        let comp = alpha_complement2(&pts, alpha).unwrap();
        let oracle = HullOracle::new(&pts, alpha);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trials = 3000;
        let mut agree = 0;
        for _ in 0..trials {
            let z = [rng.random_range(-2.2..2.2), rng.random_range(-2.2..2.2)];
            let truth = oracle.outside(&z);
            agree += (comp.contains_strictly(&z, 0.0) == truth) as usize;
        }
        assert!(agree as f64 >= 0.999 * trials as f64, "{agree}/{trials}");
    }

    #[test]
    fn dense_disk_and_annulus_counts() {
        let disk = Shape::disk(1.0).unwrap();
        let pts = sample_iid(&disk, 20_000, 5).unwrap();
        let comp = alpha_complement2(&pts, 0.5).unwrap();
        let through = Line::new(Direction::new(vec![0.3, 1.0]).unwrap(), vec![0.1]).unwrap();
        assert_eq!(check_n(&through, &comp), 2);

        let ann = Shape::annulus(1.0, 2.0).unwrap();
        let pts = sample_iid(&ann, 40_000, 6).unwrap();
        let comp = alpha_complement2(&pts, 0.4).unwrap();
        let center = Line::new(Direction::new(vec![0.6, 0.8]).unwrap(), vec![0.0]).unwrap();
        assert_eq!(check_n(&center, &comp), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let l = random_line(&mut rng, 2.0);
            assert_eq!(check_n(&l, &comp) % 2, 0);
        }
    }

    #[test]
    fn counts_are_even_on_sparse_clouds() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let coords = (0..120).map(|_| rng.random_range(-1.0..1.0)).collect();
            let pts = PointCloud::from_flat(2, coords).unwrap();
            let comp = alpha_complement2(&pts, 0.3).unwrap();
            for _ in 0..500 {
                let l = random_line(&mut rng, 1.5);
                assert_eq!(check_n(&l, &comp) % 2, 0);
            }
        }
    }
}
