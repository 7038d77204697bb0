//! Test bodies with closed-form boundary measure.
//!
//! Planar shapes are described by their boundary as a counter-clockwise
//! chain of circular arcs and segments (holes clockwise); line counts,
//! projections, lengths and areas all come from that description. The
//! three-dimensional bodies use their implicit equations directly.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use crate::cloud::{PointCloud, Provenance};
use crate::error::{param, Error, Result};
use crate::geom::{dist, dot, norm, Line, Point};

/// Line-to-tangency tolerance used by [`Shape::true_line_count`].
pub const TANGENCY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Disk { r: f64 },
    Annulus { r1: f64, r2: f64 },
    /// Square of side `side` centered at the origin, grown by a disk of radius `rho`.
    RoundedSquare { side: f64, rho: f64 },
    /// Unit disks at `(±c, 0)` joined by concave arcs of radius `alpha_b`.
    Peanut { c: f64, alpha_b: f64 },
    Ball3 { r: f64 },
    Shell3 { r1: f64, r2: f64 },
    Torus { big_r: f64, r: f64 },
}

/// Default peanut parameters: disks 2.4 apart, bridge radius 0.5.
pub const PEANUT_C: f64 = 1.2;
pub const PEANUT_ALPHA_B: f64 = 0.5;

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(param(name, format!("{v} must be positive and finite")))
    }
}

impl Shape {
    pub fn disk(r: f64) -> Result<Self> {
        positive("r", r)?;
        Ok(Shape::Disk { r })
    }

    pub fn annulus(r1: f64, r2: f64) -> Result<Self> {
        positive("r1", r1)?;
        positive("r2", r2)?;
        if r1 >= r2 {
            return Err(param("r1", "inner radius must be below outer radius"));
        }
        Ok(Shape::Annulus { r1, r2 })
    }

    pub fn rounded_square(side: f64, rho: f64) -> Result<Self> {
        positive("side", side)?;
        positive("rho", rho)?;
        Ok(Shape::RoundedSquare { side, rho })
    }

    pub fn peanut(c: f64, alpha_b: f64) -> Result<Self> {
        positive("c", c)?;
        positive("alpha_b", alpha_b)?;
        if c < 1.0 {
            return Err(param("c", "disks must not overlap (c >= 1)"));
        }
        if c * c >= 1.0 + 2.0 * alpha_b {
            return Err(param("c", "bridge arcs leave no neck (need c^2 < 1 + 2 alpha_b)"));
        }
        Ok(Shape::Peanut { c, alpha_b })
    }

    pub fn ball3(r: f64) -> Result<Self> {
        positive("r", r)?;
        Ok(Shape::Ball3 { r })
    }

    pub fn shell3(r1: f64, r2: f64) -> Result<Self> {
        positive("r1", r1)?;
        positive("r2", r2)?;
        if r1 >= r2 {
            return Err(param("r1", "inner radius must be below outer radius"));
        }
        Ok(Shape::Shell3 { r1, r2 })
    }

    pub fn torus(big_r: f64, r: f64) -> Result<Self> {
        positive("R", big_r)?;
        positive("r", r)?;
        if r >= big_r {
            return Err(param("r", "tube radius must be below the core radius"));
        }
        Ok(Shape::Torus { big_r, r })
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Disk { .. }
            | Shape::Annulus { .. }
            | Shape::RoundedSquare { .. }
            | Shape::Peanut { .. } => 2,
            _ => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Disk { .. } => "disk",
            Shape::Annulus { .. } => "annulus",
            Shape::RoundedSquare { .. } => "rounded-square",
            Shape::Peanut { .. } => "peanut",
            Shape::Ball3 { .. } => "ball",
            Shape::Shell3 { .. } => "shell",
            Shape::Torus { .. } => "torus",
        }
    }

    /// Largest radius for which both inside and outside rolling hold.
    pub fn rolling_radius(&self) -> f64 {
        match *self {
            Shape::Disk { r } | Shape::Ball3 { r } => r,
            Shape::Annulus { r1, r2 } | Shape::Shell3 { r1, r2 } => r1.min(0.5 * (r2 - r1)),
            Shape::RoundedSquare { rho, .. } => rho,
            Shape::Peanut { c, alpha_b } => {
                let h = peanut_height(c, alpha_b);
                alpha_b.min(h - alpha_b).min(1.0)
            }
            Shape::Torus { big_r, r } => r.min(big_r - r),
        }
    }

    /// `max ||x||` over the shape.
    pub fn bounding_radius(&self) -> f64 {
        match *self {
            Shape::Disk { r } | Shape::Ball3 { r } => r,
            Shape::Annulus { r2, .. } | Shape::Shell3 { r2, .. } => r2,
            Shape::RoundedSquare { side, rho } => 0.5 * side * 2f64.sqrt() + rho,
            Shape::Peanut { c, .. } => c + 1.0,
            Shape::Torus { big_r, r } => big_r + r,
        }
    }

    /// Upper bound on the number of times a line crosses the boundary.
    pub fn max_crossings(&self) -> usize {
        match self {
            Shape::Disk { .. } | Shape::RoundedSquare { .. } | Shape::Ball3 { .. } => 2,
            _ => 4,
        }
    }

    /// Area (d = 2) or volume (d = 3).
    pub fn volume(&self) -> f64 {
        match *self {
            Shape::Ball3 { r } => 4.0 / 3.0 * PI * r.powi(3),
            Shape::Shell3 { r1, r2 } => 4.0 / 3.0 * PI * (r2.powi(3) - r1.powi(3)),
            Shape::Torus { big_r, r } => 2.0 * PI * PI * big_r * r * r,
            _ => self.pieces().iter().map(Piece::green_area).sum(),
        }
    }

    /// `(d-1)`-dimensional measure of the boundary.
    pub fn boundary_measure(&self) -> f64 {
        match *self {
            Shape::Ball3 { r } => 4.0 * PI * r * r,
            Shape::Shell3 { r1, r2 } => 4.0 * PI * (r1 * r1 + r2 * r2),
            Shape::Torus { big_r, r } => 4.0 * PI * PI * big_r * r,
            _ => self.pieces().iter().map(Piece::length).sum(),
        }
    }

    /// Axis-aligned box containing the shape.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match *self {
            Shape::Disk { r } => (vec![-r; 2], vec![r; 2]),
            Shape::Annulus { r2, .. } => (vec![-r2; 2], vec![r2; 2]),
            Shape::RoundedSquare { side, rho } => {
                let e = 0.5 * side + rho;
                (vec![-e; 2], vec![e; 2])
            }
            Shape::Peanut { c, .. } => (vec![-c - 1.0, -1.0], vec![c + 1.0, 1.0]),
            Shape::Ball3 { r } => (vec![-r; 3], vec![r; 3]),
            Shape::Shell3 { r2, .. } => (vec![-r2; 3], vec![r2; 3]),
            Shape::Torus { big_r, r } => {
                let e = big_r + r;
                (vec![-e, -e, -r], vec![e, e, r])
            }
        }
    }

    /// Closed membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.dim());
        match *self {
            Shape::Disk { r } | Shape::Ball3 { r } => norm(x) <= r,
            Shape::Annulus { r1, r2 } | Shape::Shell3 { r1, r2 } => {
                let n = norm(x);
                r1 <= n && n <= r2
            }
            Shape::RoundedSquare { side, rho } => {
                let h = 0.5 * side;
                let dx = (x[0].abs() - h).max(0.0);
                let dy = (x[1].abs() - h).max(0.0);
                dx.hypot(dy) <= rho
            }
            Shape::Peanut { c, alpha_b } => {
                if (x[0] - c).hypot(x[1]) <= 1.0 || (x[0] + c).hypot(x[1]) <= 1.0 {
                    return true;
                }
                let h = peanut_height(c, alpha_b);
                let tx = c * alpha_b / (1.0 + alpha_b);
                x[0].abs() <= tx && x[1].abs() <= h - (alpha_b * alpha_b - x[0] * x[0]).sqrt()
            }
            Shape::Torus { big_r, r } => {
                let rho = x[0].hypot(x[1]);
                (rho - big_r).hypot(x[2]) <= r
            }
        }
    }

    /// Planar boundary as a positively oriented chain of pieces.
    fn pieces(&self) -> Vec<Piece> {
        match *self {
            Shape::Disk { r } => vec![Piece::circle([0.0, 0.0], r, TAU)],
            Shape::Annulus { r1, r2 } => vec![
                Piece::circle([0.0, 0.0], r2, TAU),
                Piece::circle([0.0, 0.0], r1, -TAU),
            ],
            Shape::RoundedSquare { side, rho } => {
                let h = 0.5 * side;
                let e = h + rho;
                let q = 0.5 * PI;
                vec![
                    Piece::Segment { a: [-h, -e], b: [h, -e] },
                    Piece::arc([h, -h], rho, -q, q),
                    Piece::Segment { a: [e, -h], b: [e, h] },
                    Piece::arc([h, h], rho, 0.0, q),
                    Piece::Segment { a: [h, e], b: [-h, e] },
                    Piece::arc([-h, h], rho, q, q),
                    Piece::Segment { a: [-e, h], b: [-e, -h] },
                    Piece::arc([-h, -h], rho, PI, q),
                ]
            }
            Shape::Peanut { c, alpha_b } => {
                let h = peanut_height(c, alpha_b);
                let a = h.atan2(c);
                vec![
                    Piece::arc([c, 0.0], 1.0, -(PI - a), 2.0 * (PI - a)),
                    Piece::arc([0.0, h], alpha_b, -a, -(PI - 2.0 * a)),
                    Piece::arc([-c, 0.0], 1.0, a, 2.0 * (PI - a)),
                    Piece::arc([0.0, -h], alpha_b, PI - a, -(PI - 2.0 * a)),
                ]
            }
            _ => Vec::new(),
        }
    }

    /// Points on the boundary spaced at most `spacing` apart along each
    /// piece. Only planar shapes.
    pub fn boundary_points(&self, spacing: f64) -> Result<Vec<Point>> {
        if self.dim() != 2 {
            return Err(Error::InvalidDimension {
                got: self.dim(),
                expected: "2",
            });
        }
        positive("spacing", spacing)?;
        let mut out = Vec::new();
        for p in self.pieces() {
            let m = (p.length() / spacing).ceil().max(1.0) as usize;
            for i in 0..m {
                out.push(p.at(i as f64 / m as f64));
            }
        }
        Ok(out)
    }

    /// Number of points where `line` meets the boundary.
    ///
    /// Fails with [`Error::Tangent`] when the line is within
    /// [`TANGENCY_TOL`] of a tangency or passes through a piece junction.
    pub fn true_line_count(&self, line: &Line) -> Result<usize> {
        if line.dim() != self.dim() {
            return Err(Error::InvalidDimension {
                got: line.dim(),
                expected: "line of the shape's dimension",
            });
        }
        match *self {
            Shape::Ball3 { r } => sphere_count(line, r),
            Shape::Shell3 { r1, r2 } => Ok(sphere_count(line, r1)? + sphere_count(line, r2)?),
            Shape::Torus { big_r, r } => torus_count(line, big_r, r),
            _ => {
                let mut total = 0;
                for p in self.pieces() {
                    total += p.crossings(line)?;
                }
                Ok(total)
            }
        }
    }

    /// Unique nearest boundary point of `x`.
    pub fn project_to_boundary(&self, x: &[f64]) -> Result<Point> {
        if x.len() != self.dim() {
            return Err(Error::InvalidDimension {
                got: x.len(),
                expected: "point of the shape's dimension",
            });
        }
        let radial = |radius: f64| -> Result<Point> {
            let n = norm(x);
            if n < 1e-12 {
                return Err(Error::NoUniqueProjection {
                    distance: radius,
                    limit: 0.0,
                });
            }
            Ok(x.iter().map(|v| v * radius / n).collect())
        };
        match *self {
            Shape::Ball3 { r } => radial(r),
            Shape::Shell3 { r1, r2 } => {
                let n = norm(x);
                let (d1, d2) = ((n - r1).abs(), (n - r2).abs());
                if (d1 - d2).abs() < 1e-12 {
                    return Err(Error::NoUniqueProjection {
                        distance: d1,
                        limit: d1,
                    });
                }
                radial(if d1 < d2 { r1 } else { r2 })
            }
            Shape::Torus { big_r, r } => {
                let rho = x[0].hypot(x[1]);
                if rho < 1e-12 {
                    return Err(Error::NoUniqueProjection {
                        distance: big_r.hypot(x[2]) - r,
                        limit: big_r - r,
                    });
                }
                let core = [x[0] * big_r / rho, x[1] * big_r / rho, 0.0];
                let off = dist(x, &core);
                if off < 1e-12 {
                    return Err(Error::NoUniqueProjection {
                        distance: r,
                        limit: r,
                    });
                }
                Ok((0..3).map(|k| core[k] + (x[k] - core[k]) * r / off).collect())
            }
            _ => {
                let q = [x[0], x[1]];
                let mut cands: Vec<([f64; 2], f64)> = Vec::new();
                for p in self.pieces() {
                    cands.extend(p.nearest(q));
                }
                cands.sort_by(|a, b| a.1.total_cmp(&b.1));
                let (best, d) = cands[0];
                let scale = 1e-12 * (1.0 + d);
                let tie = cands[1..]
                    .iter()
                    .take_while(|c| c.1 - d <= scale)
                    .any(|c| (c.0[0] - best[0]).hypot(c.0[1] - best[1]) > 1e-9);
                if tie {
                    return Err(Error::NoUniqueProjection {
                        distance: d,
                        limit: self.rolling_radius(),
                    });
                }
                Ok(best.to_vec())
            }
        }
    }
}

fn peanut_height(c: f64, alpha_b: f64) -> f64 {
    ((1.0 + alpha_b).powi(2) - c * c).sqrt()
}

/// Boundary piece of a planar shape. Arcs run from `start` through the
/// signed angle `sweep`; full circles have `|sweep| = 2 pi`.
#[derive(Clone, Copy, Debug)]
enum Piece {
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        sweep: f64,
    },
    Segment {
        a: [f64; 2],
        b: [f64; 2],
    },
}

impl Piece {
    fn circle(center: [f64; 2], radius: f64, sweep: f64) -> Self {
        Piece::Arc {
            center,
            radius,
            start: 0.0,
            sweep,
        }
    }

    fn arc(center: [f64; 2], radius: f64, start: f64, sweep: f64) -> Self {
        Piece::Arc {
            center,
            radius,
            start,
            sweep,
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
            Piece::Segment { a, b } => (b[0] - a[0]).hypot(b[1] - a[1]),
        }
    }

    /// Contribution `1/2 * integral of (x dy - y dx)` along the piece.
    fn green_area(&self) -> f64 {
        match *self {
            Piece::Arc {
                center: [cx, cy],
                radius: r,
                start,
                sweep,
            } => {
                let end = start + sweep;
                0.5 * (r * r * sweep
                    + r * cx * (end.sin() - start.sin())
                    - r * cy * (end.cos() - start.cos()))
            }
            Piece::Segment { a, b } => 0.5 * (a[0] * b[1] - b[0] * a[1]),
        }
    }

    fn at(&self, t: f64) -> Point {
        match *self {
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let ang = start + t * sweep;
                vec![center[0] + radius * ang.cos(), center[1] + radius * ang.sin()]
            }
            Piece::Segment { a, b } => vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
        }
    }

    /// Fraction along the arc of the point at angle `ang`, or `None` when
    /// the angle is outside the arc.
    fn arc_fraction(start: f64, sweep: f64, ang: f64) -> Option<f64> {
        if sweep.abs() >= TAU {
            return Some((ang - start).rem_euclid(TAU) / TAU);
        }
        let u = if sweep > 0.0 {
            (ang - start).rem_euclid(TAU)
        } else {
            (start - ang).rem_euclid(TAU)
        };
        (u <= sweep.abs()).then(|| u / sweep.abs())
    }

    fn crossings(&self, line: &Line) -> Result<usize> {
        let th = line.theta();
        match *self {
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let d = line.dist2_to(&center).sqrt();
                if (d - radius).abs() < TANGENCY_TOL {
                    return Err(Error::Tangent);
                }
                if d > radius {
                    return Ok(0);
                }
                let mid = line.param_of(&center);
                let half = (radius * radius - d * d).sqrt();
                let mut n = 0;
                for lam in [mid - half, mid + half] {
                    let p = line.point_at(lam);
                    let ang = (p[1] - center[1]).atan2(p[0] - center[0]);
                    if sweep.abs() < TAU {
                        // reject crossings at an arc end: the junction is shared
                        for end in [start, start + sweep] {
                            let e = [center[0] + radius * end.cos(), center[1] + radius * end.sin()];
                            if (p[0] - e[0]).hypot(p[1] - e[1]) < TANGENCY_TOL {
                                return Err(Error::Tangent);
                            }
                        }
                    }
                    if Self::arc_fraction(start, sweep, ang).is_some() {
                        n += 1;
                    }
                }
                Ok(n)
            }
            Piece::Segment { a, b } => {
                let u = [b[0] - a[0], b[1] - a[1]];
                let len = u[0].hypot(u[1]);
                // signed distances of the endpoints from the line
                let nrm = [-th[1], th[0]];
                let o = line.origin();
                let sa = (a[0] - o[0]) * nrm[0] + (a[1] - o[1]) * nrm[1];
                let sb = (b[0] - o[0]) * nrm[0] + (b[1] - o[1]) * nrm[1];
                if sa.abs() < TANGENCY_TOL || sb.abs() < TANGENCY_TOL {
                    return Err(Error::Tangent);
                }
                if (sa > 0.0) == (sb > 0.0) {
                    return Ok(0);
                }
                let cross = (u[0] * th[1] - u[1] * th[0]).abs() / len;
                if cross < 1e-15 {
                    return Err(Error::Tangent);
                }
                Ok(1)
            }
        }
    }

    /// Nearest point candidates on the piece with their distances.
    fn nearest(&self, q: [f64; 2]) -> Vec<([f64; 2], f64)> {
        match *self {
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let v = [q[0] - center[0], q[1] - center[1]];
                let n = v[0].hypot(v[1]);
                let mut out = Vec::with_capacity(2);
                if n < 1e-12 {
                    // every point of the arc is equidistant
                    let a = self.at(0.0);
                    let b = self.at(0.5);
                    out.push(([a[0], a[1]], radius));
                    out.push(([b[0], b[1]], radius));
                    return out;
                }
                let ang = v[1].atan2(v[0]);
                if Self::arc_fraction(start, sweep, ang).is_some() {
                    let p = [center[0] + radius * v[0] / n, center[1] + radius * v[1] / n];
                    out.push((p, (n - radius).abs()));
                }
                if sweep.abs() < TAU {
                    for t in [0.0, 1.0] {
                        let p = self.at(t);
                        out.push(([p[0], p[1]], (p[0] - q[0]).hypot(p[1] - q[1])));
                    }
                }
                out
            }
            Piece::Segment { a, b } => {
                let u = [b[0] - a[0], b[1] - a[1]];
                let t = (((q[0] - a[0]) * u[0] + (q[1] - a[1]) * u[1]) / (u[0] * u[0] + u[1] * u[1]))
                    .clamp(0.0, 1.0);
                let p = [a[0] + t * u[0], a[1] + t * u[1]];
                vec![(p, (p[0] - q[0]).hypot(p[1] - q[1]))]
            }
        }
    }
}

fn sphere_count(line: &Line, r: f64) -> Result<usize> {
    let d = line.dist2_to(&[0.0, 0.0, 0.0]).sqrt();
    if (d - r).abs() < TANGENCY_TOL {
        Err(Error::Tangent)
    } else if d < r {
        Ok(2)
    } else {
        Ok(0)
    }
}

/// Crossings of a line with the torus `(sqrt(x^2+y^2) - R)^2 + z^2 = r^2`.
///
/// The implicit quartic is restricted to the line and its real roots are
/// isolated between the critical points found recursively from derivatives.
fn torus_count(line: &Line, big_r: f64, r: f64) -> Result<usize> {
    let o = line.origin();
    let t = line.theta();
    let k = big_r * big_r - r * r;
    let b = dot(o, t);
    let c0 = dot(o, o) + k;
    let p = t[0] * t[0] + t[1] * t[1];
    let q = o[0] * t[0] + o[1] * t[1];
    let s = o[0] * o[0] + o[1] * o[1];
    let rr4 = 4.0 * big_r * big_r;
    let coeffs = [
        c0 * c0 - rr4 * s,
        4.0 * b * c0 - 2.0 * rr4 * q,
        4.0 * b * b + 2.0 * c0 - rr4 * p,
        4.0 * b,
        1.0,
    ];
    let reach = norm(o) + big_r + r + 1.0;
    let surface_gap = |lam: f64| {
        let x = line.point_at(lam);
        ((x[0].hypot(x[1]) - big_r).hypot(x[2]) - r).abs()
    };
    let crit = poly_real_roots(&poly_derivative(&coeffs), -reach, reach);
    if crit.iter().any(|&c| surface_gap(c) < TANGENCY_TOL) {
        return Err(Error::Tangent);
    }
    let roots = poly_real_roots(&coeffs, -reach, reach);
    Ok(roots.len())
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &a)| i as f64 * a)
        .collect()
}

/// Simple real roots of `c` (ascending coefficients) inside `[lo, hi]`.
fn poly_real_roots(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let x = -c[0] / c[1];
        return if (lo..=hi).contains(&x) { vec![x] } else { Vec::new() };
    }
    let mut knots = vec![lo];
    knots.extend(poly_real_roots(&poly_derivative(c), lo, hi));
    knots.push(hi);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (fa, fb) = (poly_eval(c, a), poly_eval(c, b));
        if fa == 0.0 {
            continue;
        }
        if (fa > 0.0) == (fb > 0.0) {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if (poly_eval(c, m) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

/// `n` independent uniform draws from `shape`, by rejection from its
/// bounding box.
pub fn sample_iid(shape: &Shape, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(param("n", "need at least one point"));
    }
    let volume = shape.volume();
    if volume.is_nan() || volume <= 0.0 {
        return Err(Error::Degenerate("shape has no volume".into()));
    }
    let (lo, hi) = shape.bounding_box();
    let d = shape.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(n * d);
    let mut x = vec![0.0; d];
    while coords.len() < n * d {
        for k in 0..d {
            x[k] = rng.random_range(lo[k]..=hi[k]);
        }
        if shape.contains(&x) {
            coords.extend_from_slice(&x);
        }
    }
    Ok(PointCloud::from_flat(d, coords)?.with_provenance(Provenance::Iid))
}
