//! Incremental Bowyer-Watson Delaunay triangulation in the plane.
//!
//! Points are inserted in Hilbert-curve order into a large enclosing
//! triangle; each insertion locates the containing triangle by walking from
//! the previous one, carves the cavity of triangles whose circumcircle holds
//! the new point, and fans it from that point. Orientation and in-circle
//! signs come from adaptive exact predicates. Exact duplicates are skipped.

use robust::Coord;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};

pub const NONE: u32 = u32::MAX;

#[inline]
fn c(p: [f64; 2]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

#[inline]
pub(crate) fn orient(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    robust::orient2d(c(a), c(b), c(p))
}

#[inline]
pub(crate) fn incircle(a: [f64; 2], b: [f64; 2], cc: [f64; 2], p: [f64; 2]) -> f64 {
    robust::incircle(c(a), c(b), c(cc), c(p))
}

pub(crate) fn circumcircle(a: [f64; 2], b: [f64; 2], cc: [f64; 2]) -> ([f64; 2], f64) {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (cc[0] - a[0], cc[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    ([a[0] + ux, a[1] + uy], ux.hypot(uy))
}

/// A Delaunay triangulation of planar points.
///
/// Triangles are counter-clockwise vertex triples; `neighbors[t][i]` is the
/// triangle across the edge opposite vertex `i`, or [`NONE`] on the hull.
#[derive(Clone, Debug)]
pub struct Triangulation2 {
    points: Vec<[f64; 2]>,
    triangles: Vec<[u32; 3]>,
    neighbors: Vec<[u32; 3]>,
    circumcenters: Vec<[f64; 2]>,
    circumradii: Vec<f64>,
    skipped: Vec<u32>,
}

impl Triangulation2 {
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn neighbors(&self) -> &[[u32; 3]] {
        &self.neighbors
    }

    pub fn circumcenter(&self, t: usize) -> [f64; 2] {
        self.circumcenters[t]
    }

    pub fn circumradius(&self, t: usize) -> f64 {
        self.circumradii[t]
    }

    /// Input indices left out because they duplicate an inserted point.
    pub fn skipped(&self) -> &[u32] {
        &self.skipped
    }

    /// Each undirected edge once, as `(triangle, local index of the
    /// opposite vertex)`; the edge runs counter-clockwise in that triangle.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(t, nb)| {
            (0..3).filter_map(move |i| (nb[i] == NONE || (nb[i] as usize) > t).then_some((t, i)))
        })
    }

    /// Endpoints `(a, b)` of the edge opposite local vertex `i` of `t`.
    pub fn edge_vertices(&self, t: usize, i: usize) -> (u32, u32) {
        let tri = self.triangles[t];
        (tri[(i + 1) % 3], tri[(i + 2) % 3])
    }

    /// Vertices on hull edges (their Voronoi cells are unbounded).
    pub fn hull_vertices(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .edges()
            .filter(|&(t, i)| self.neighbors[t][i] == NONE)
            .flat_map(|(t, i)| {
                let (a, b) = self.edge_vertices(t, i);
                [a, b]
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Delaunay triangulation of a planar cloud.
pub fn delaunay2(points: &PointCloud) -> Result<Triangulation2> {
    if points.dim() != 2 {
        return Err(Error::InvalidDimension {
            got: points.dim(),
            expected: "2",
        });
    }
    let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: pts.len(),
        });
    }
    if all_collinear(&pts) {
        return Err(Error::Degenerate("all points are collinear".into()));
    }
    let mut b = Builder::new(&pts);
    for i in hilbert_order(&pts) {
        b.insert(i);
    }
    Ok(b.finish())
}

pub(crate) fn all_collinear(pts: &[[f64; 2]]) -> bool {
    let a = pts[0];
    let Some(&b) = pts.iter().find(|p| **p != a) else {
        return true;
    };
    pts.iter().all(|&p| orient(a, b, p) == 0.0)
}

fn hilbert_order(pts: &[[f64; 2]]) -> Vec<u32> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let side = (1u32 << 16) - 1;
    let mut keyed: Vec<(u64, u32)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = ((p[0] - lo[0]) / span * side as f64) as u32;
            let y = ((p[1] - lo[1]) / span * side as f64) as u32;
            (hilbert_index(x, y, 16), i as u32)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn hilbert_index(mut x: u32, mut y: u32, order: u32) -> u64 {
    let n = 1u32 << order;
    let mut d = 0u64;
    let mut s = n >> 1;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

struct Builder {
    pts: Vec<[f64; 2]>,
    n_real: u32,
    tris: Vec<[u32; 3]>,
    nbrs: Vec<[u32; 3]>,
    alive: Vec<bool>,
    stamp: Vec<u32>,
    free: Vec<u32>,
    last: u32,
    round: u32,
    skipped: Vec<u32>,
    // scratch
    cavity: Vec<u32>,
    boundary: Vec<(u32, u32, u32, u32)>,
}

impl Builder {
    fn new(input: &[[f64; 2]]) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in input {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let m = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
        let cx = 0.5 * (lo[0] + hi[0]);
        let cy = 0.5 * (lo[1] + hi[1]);
        let s = 1e5 * m;
        let mut pts = input.to_vec();
        let n = pts.len() as u32;
        pts.push([cx - 2.0 * s, cy - s]);
        pts.push([cx + 2.0 * s, cy - s]);
        pts.push([cx, cy + 2.0 * s]);
        Builder {
            pts,
            n_real: n,
            tris: vec![[n, n + 1, n + 2]],
            nbrs: vec![[NONE; 3]],
            alive: vec![true],
            stamp: vec![0],
            free: Vec::new(),
            last: 0,
            round: 0,
            skipped: Vec::new(),
            cavity: Vec::new(),
            boundary: Vec::new(),
        }
    }

    fn locate(&self, p: [f64; 2]) -> u32 {
        let mut t = self.last;
        let mut rot = 0usize;
        'walk: loop {
            let tri = self.tris[t as usize];
            for k in 0..3 {
                let e = (k + rot) % 3;
                let a = self.pts[tri[(e + 1) % 3] as usize];
                let b = self.pts[tri[(e + 2) % 3] as usize];
                if orient(a, b, p) < 0.0 {
                    let next = self.nbrs[t as usize][e];
                    debug_assert_ne!(next, NONE, "walk left the enclosing triangle");
                    t = next;
                    rot = (rot + 1) % 3;
                    continue 'walk;
                }
            }
            return t;
        }
    }

    fn new_slot(&mut self) -> u32 {
        if let Some(t) = self.free.pop() {
            self.alive[t as usize] = true;
            t
        } else {
            self.tris.push([0; 3]);
            self.nbrs.push([NONE; 3]);
            self.alive.push(true);
            self.stamp.push(0);
            (self.tris.len() - 1) as u32
        }
    }

    fn insert(&mut self, i: u32) {
        let p = self.pts[i as usize];
        let t0 = self.locate(p);
        if self.tris[t0 as usize]
            .iter()
            .any(|&v| self.pts[v as usize] == p)
        {
            self.skipped.push(i);
            return;
        }
        self.round += 1;
        let round = self.round;

        self.cavity.clear();
        self.boundary.clear();
        self.cavity.push(t0);
        self.stamp[t0 as usize] = round;
        let mut head = 0;
        while head < self.cavity.len() {
            let t = self.cavity[head];
            head += 1;
            let tri = self.tris[t as usize];
            for e in 0..3 {
                let nb = self.nbrs[t as usize][e];
                let a = tri[(e + 1) % 3];
                let b = tri[(e + 2) % 3];
                if nb == NONE {
                    self.boundary.push((a, b, NONE, t));
                    continue;
                }
                if self.stamp[nb as usize] == round {
                    continue;
                }
                let nt = self.tris[nb as usize];
                let inside = incircle(
                    self.pts[nt[0] as usize],
                    self.pts[nt[1] as usize],
                    self.pts[nt[2] as usize],
                    p,
                ) > 0.0;
                if inside {
                    self.stamp[nb as usize] = round;
                    self.cavity.push(nb);
                } else {
                    self.boundary.push((a, b, nb, t));
                }
            }
        }
        // a neighbour rejected early may have joined the cavity later
        let stamp = &self.stamp;
        self.boundary
            .retain(|&(_, _, nb, _)| nb == NONE || stamp[nb as usize] != round);

        for k in 0..self.cavity.len() {
            let t = self.cavity[k];
            self.alive[t as usize] = false;
            self.free.push(t);
        }
        let boundary = std::mem::take(&mut self.boundary);
        let mut made: Vec<(u32, u32, u32)> = Vec::with_capacity(boundary.len());
        for &(a, b, outside, _) in &boundary {
            let t = self.new_slot();
            self.tris[t as usize] = [a, b, i];
            self.nbrs[t as usize] = [NONE, NONE, outside];
            if outside != NONE {
                // slots are recycled, so find the shared edge by its vertices
                let ot = self.tris[outside as usize];
                let k = (0..3).find(|&k| ot[k] != a && ot[k] != b).expect("shared edge");
                self.nbrs[outside as usize][k] = t;
            }
            made.push((a, b, t));
        }
        for &(a, b, t) in &made {
            // edge (b, p) is shared with the fan triangle starting at b,
            // edge (p, a) with the one ending at a
            let next = made.iter().find(|m| m.0 == b).map(|m| m.2).unwrap_or(NONE);
            let prev = made.iter().find(|m| m.1 == a).map(|m| m.2).unwrap_or(NONE);
            debug_assert!(next != NONE && prev != NONE, "cavity boundary is not a cycle");
            self.nbrs[t as usize][0] = next;
            self.nbrs[t as usize][1] = prev;
        }
        self.boundary = boundary;
        self.last = made[0].2;
    }

    fn finish(mut self) -> Triangulation2 {
        self.break_cocircular_ties();
        let n = self.n_real;
        let mut remap = vec![NONE; self.tris.len()];
        let mut triangles = Vec::new();
        for (t, tri) in self.tris.iter().enumerate() {
            if self.alive[t] && tri.iter().all(|&v| v < n) {
                remap[t] = triangles.len() as u32;
                triangles.push(*tri);
            }
        }
        let mut neighbors = Vec::with_capacity(triangles.len());
        for (t, nb) in self.nbrs.iter().enumerate() {
            if remap[t] != NONE {
                neighbors.push(nb.map(|x| if x == NONE { NONE } else { remap[x as usize] }));
            }
        }
        let pts: Vec<[f64; 2]> = self.pts[..n as usize].to_vec();
        let (circumcenters, circumradii) = triangles
            .iter()
            .map(|t| circumcircle(pts[t[0] as usize], pts[t[1] as usize], pts[t[2] as usize]))
            .unzip();
        let mut skipped = self.skipped;
        skipped.sort_unstable();
        Triangulation2 {
            points: pts,
            triangles,
            neighbors,
            circumcenters,
            circumradii,
            skipped,
        }
    }

    /// Where four real vertices are exactly co-circular, prefer the diagonal
    /// whose lower endpoint index is smaller.
    fn break_cocircular_ties(&mut self) {
        let n = self.n_real;
        let limit = 4 * self.tris.len();
        let mut flips = 0;
        let mut changed = true;
        while changed && flips < limit {
            changed = false;
            for t in 0..self.tris.len() {
                if !self.alive[t] {
                    continue;
                }
                for e in 0..3 {
                    let u = self.nbrs[t][e];
                    if u == NONE || (u as usize) < t {
                        continue;
                    }
                    let tri = self.tris[t];
                    let (a, b, cc) = (tri[(e + 1) % 3], tri[(e + 2) % 3], tri[e]);
                    let ut = self.tris[u as usize];
                    let f = (0..3).find(|&k| self.nbrs[u as usize][k] == t as u32).unwrap();
                    let d = ut[f];
                    if [a, b, cc, d].iter().any(|&v| v >= n) {
                        continue;
                    }
                    let (pa, pb, pc, pd) = (
                        self.pts[a as usize],
                        self.pts[b as usize],
                        self.pts[cc as usize],
                        self.pts[d as usize],
                    );
                    if incircle(pc, pa, pb, pd) != 0.0 || a.min(b) <= cc.min(d) {
                        continue;
                    }
                    if orient(pc, pa, pd) <= 0.0 || orient(pd, pb, pc) <= 0.0 {
                        continue;
                    }
                    self.flip(t, e, u as usize, f);
                    flips += 1;
                    changed = true;
                    break;
                }
            }
        }
    }

    /// Replaces diagonal `a-b` shared by `t = (c, a, b)` and `u = (d, b, a)`
    /// with `c-d`.
    fn flip(&mut self, t: usize, e: usize, u: usize, f: usize) {
        let tri = self.tris[t];
        let (cc, a, b) = (tri[e], tri[(e + 1) % 3], tri[(e + 2) % 3]);
        let d = self.tris[u][f];
        let ut = self.tris[u];
        let nt = self.nbrs[t];
        let nu = self.nbrs[u];
        // outer neighbours: across (a, c) / (c, b) in t, across (b, d) / (d, a) in u
        let n_ca = nt[(e + 2) % 3];
        let n_bc = nt[(e + 1) % 3];
        let fb = (0..3).find(|&k| ut[k] == b).unwrap();
        let fa = (0..3).find(|&k| ut[k] == a).unwrap();
        let n_da = nu[fb];
        let n_bd = nu[fa];
        self.tris[t] = [cc, a, d];
        self.tris[u] = [d, b, cc];
        self.nbrs[t] = [n_da, u as u32, n_ca];
        self.nbrs[u] = [n_bc, t as u32, n_bd];
        for (outer, old, new) in [(n_da, u, t), (n_bc, t, u)] {
            if outer != NONE {
                for s in self.nbrs[outer as usize].iter_mut() {
                    if *s == old as u32 {
                        *s = new as u32;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(pts: &[[f64; 2]]) -> PointCloud {
        PointCloud::from_flat(2, pts.concat()).unwrap()
    }

    fn check_topology(tr: &Triangulation2) {
        let p = tr.points();
        for (t, tri) in tr.triangles().iter().enumerate() {
            assert!(orient(p[tri[0] as usize], p[tri[1] as usize], p[tri[2] as usize]) > 0.0);
            for i in 0..3 {
                let nb = tr.neighbors()[t][i];
                if nb == NONE {
                    continue;
                }
                let (a, b) = tr.edge_vertices(t, i);
                let other = tr.triangles()[nb as usize];
                assert!(other.contains(&a) && other.contains(&b));
                assert!(tr.neighbors()[nb as usize].contains(&(t as u32)));
            }
        }
    }

    fn brute_empty_circle(tr: &Triangulation2) {
        let p = tr.points();
        for tri in tr.triangles() {
            let (a, b, c) = (p[tri[0] as usize], p[tri[1] as usize], p[tri[2] as usize]);
            for (v, &q) in p.iter().enumerate() {
                if tri.contains(&(v as u32)) {
                    continue;
                }
                assert!(incircle(a, b, c, q) <= 0.0, "vertex {v} inside circumcircle");
            }
        }
    }

    #[test]
    fn three_points_one_triangle() {
        let tr = delaunay2(&cloud(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])).unwrap();
        assert_eq!(tr.triangles().len(), 1);
        assert_eq!(tr.hull_vertices(), vec![0, 1, 2]);
    }

    #[test]
    fn square_tie_uses_lowest_index_diagonal() {
        let tr = delaunay2(&cloud(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])).unwrap();
        assert_eq!(tr.triangles().len(), 2);
        for tri in tr.triangles() {
            assert!(tri.contains(&0) && tri.contains(&2), "{tri:?}");
        }
        // same answer for a different input order of the same corners
        let tr = delaunay2(&cloud(&[[1.0, 1.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0]])).unwrap();
        for tri in tr.triangles() {
            assert!(tri.contains(&0) && tri.contains(&2), "{tri:?}");
        }
    }

    #[test]
    fn collinear_and_small_inputs_fail() {
        assert!(matches!(
            delaunay2(&cloud(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            delaunay2(&cloud(&[[0.0, 0.0], [1.0, 1.0]])),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn random_clouds_are_delaunay() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let pts: Vec<[f64; 2]> = (0..200)
                .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            let tr = delaunay2(&cloud(&pts)).unwrap();
            check_topology(&tr);
            brute_empty_circle(&tr);
            // Euler: T = 2n - 2 - h for points in general position
            let h = tr.hull_vertices().len();
            assert_eq!(tr.triangles().len(), 2 * 200 - 2 - h);
        }
    }

    #[test]
    fn lattice_and_duplicates() {
        let mut pts = Vec::new();
        for i in 0..15 {
            for j in 0..15 {
                pts.push([i as f64 * 0.1, j as f64 * 0.1]);
            }
        }
        pts.push([0.5, 0.5]);
        let tr = delaunay2(&cloud(&pts)).unwrap();
        assert_eq!(tr.skipped(), &[225]);
        check_topology(&tr);
        brute_empty_circle(&tr);
        assert_eq!(tr.triangles().len(), 2 * 14 * 14);
    }
}
