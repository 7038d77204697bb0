//! Dimension-generic vectors, lines and exact line/primitive intersections.
//!
//! Points are plain coordinate slices. A [`Line`] carries its direction, an
//! orthonormal basis of the orthogonal complement and the offset of its
//! foot point in that basis, so offsets can be sampled directly in the
//! `(d-1)`-dimensional window.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Owned point in `R^d`.
pub type Point = Vec<f64>;

/// Relative discriminant tolerance below which a line is treated as tangent.
pub const TANGENT_TOL: f64 = 1e-12;

/// Tolerance for `<n, theta> = 0` in half-space intersection.
pub const PARALLEL_TOL: f64 = 1e-12;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

/// Unit vector on the half-sphere: last coordinate is non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalizes `v` and flips it onto the upper half-sphere.
    pub fn new(mut v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::InvalidDimension {
                got: v.len(),
                expected: ">= 2",
            });
        }
        let n = norm(&v);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Degenerate("zero or non-finite direction".into()));
        }
        let flip = if v[v.len() - 1] < 0.0 { -1.0 } else { 1.0 };
        for x in &mut v {
            *x *= flip / n;
        }
        Ok(Direction(v))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Uniform direction on the unit half-sphere of `R^d`.
pub fn sample_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<Direction> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            got: d,
            expected: ">= 2",
        });
    }
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-300 {
            return Direction::new(v);
        }
    }
}

/// Deterministic orthonormal basis of the complement of `theta`.
///
/// Gram-Schmidt over the standard basis, skipping the coordinate where
/// `theta` is largest in magnitude. Each vector is orthogonalized twice.
pub fn orthonormal_basis(theta: &Direction) -> Vec<Vec<f64>> {
    let t = theta.as_slice();
    let d = t.len();
    let skip = (0..d)
        .max_by(|&a, &b| t[a].abs().total_cmp(&t[b].abs()))
        .unwrap_or(0);
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
    frame.push(t.to_vec());
    for j in (0..d).filter(|&j| j != skip) {
        let mut v = vec![0.0; d];
        v[j] = 1.0;
        for _ in 0..2 {
            for u in &frame {
                let c = dot(&v, u);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let n = norm(&v);
        for vi in &mut v {
            *vi /= n;
        }
        frame.push(v);
    }
    frame.remove(0);
    frame
}

/// The line `{ y + lambda * theta }` with `y` given in basis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    theta: Direction,
    basis: Vec<Vec<f64>>,
    offset: Vec<f64>,
    origin: Point,
}

impl Line {
    pub fn new(theta: Direction, offset: Vec<f64>) -> Result<Self> {
        let basis = orthonormal_basis(&theta);
        Self::with_basis(theta, basis, offset)
    }

    /// Builds a line reusing an already computed basis for `theta`.
    pub fn with_basis(theta: Direction, basis: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        let d = theta.dim();
        if offset.len() + 1 != d || basis.len() + 1 != d {
            return Err(Error::InvalidDimension {
                got: offset.len() + 1,
                expected: "offset of length d-1",
            });
        }
        let mut origin = vec![0.0; d];
        for (c, b) in offset.iter().zip(&basis) {
            for (o, bi) in origin.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        Ok(Line {
            theta,
            basis,
            offset,
            origin,
        })
    }

    /// The line with direction `theta` passing through `p`.
    pub fn through(p: &[f64], theta: Direction) -> Result<Self> {
        if p.len() != theta.dim() {
            return Err(Error::InvalidDimension {
                got: p.len(),
                expected: "point of the line's dimension",
            });
        }
        let basis = orthonormal_basis(&theta);
        let offset = basis.iter().map(|b| dot(p, b)).collect();
        Self::with_basis(theta, basis, offset)
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn theta(&self) -> &[f64] {
        self.theta.as_slice()
    }

    pub fn direction(&self) -> &Direction {
        &self.theta
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// Foot point `y`, the point of the line at `lambda = 0`.
    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn point_at(&self, lambda: f64) -> Point {
        self.origin
            .iter()
            .zip(self.theta())
            .map(|(o, t)| o + lambda * t)
            .collect()
    }

    /// Parameter of the orthogonal projection of `x` onto the line.
    pub fn param_of(&self, x: &[f64]) -> f64 {
        self.theta()
            .iter()
            .zip(x.iter().zip(&self.origin))
            .map(|(t, (xi, oi))| t * (xi - oi))
            .sum()
    }

    /// Squared distance from `x` to the line.
    pub fn dist2_to(&self, x: &[f64]) -> f64 {
        let lam = self.param_of(x);
        self.origin
            .iter()
            .zip(self.theta())
            .zip(x)
            .map(|((o, t), xi)| {
                let w = xi - o - lam * t;
                w * w
            })
            .sum()
    }
}

/// Closed parameter range `[lo, hi]`; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}] is inverted");
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Sorted, pairwise disjoint closed intervals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet(Vec<Interval>);

impl IntervalSet {
    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.0.partition_point(|iv| iv.hi < x);
        self.0.get(i).is_some_and(|iv| iv.lo <= x)
    }

    /// Index of the interval that contains all of `[lo, hi]`, if any.
    pub fn covering(&self, lo: f64, hi: f64) -> Option<usize> {
        let i = self.0.partition_point(|iv| iv.hi < hi);
        self.0.get(i).filter(|iv| iv.lo <= lo).map(|_| i)
    }
}

/// Merges arbitrary intervals into their minimal sorted disjoint cover.
/// Touching intervals merge.
pub fn union_intervals(mut items: Vec<Interval>) -> IntervalSet {
    items.sort_unstable_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(items.len());
    for iv in items {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    IntervalSet(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(crate::error::param("radius", format!("{radius} is not positive")));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains_strictly(&self, x: &[f64], tol: f64) -> bool {
        dist(&self.center, x) < self.radius - tol
    }
}

/// `{ x : <normal, x> <= offset }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let n = norm(&normal);
        if (n - 1.0).abs() > 1e-12 {
            return Err(crate::error::param("normal", format!("norm {n} is not 1")));
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dot(&self.normal, x) <= self.offset
    }
}

/// Result of cutting a line with a half-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineCut {
    Empty,
    Full,
    Part(Interval),
}

/// Chord of `ball` on `line`. Tangent and missing lines give `None`.
pub fn intersect_ball(line: &Line, ball: &Ball) -> Option<Interval> {
    let mid = line.param_of(&ball.center);
    let d2 = line.dist2_to(&ball.center);
    let r2 = ball.radius * ball.radius;
    let disc = r2 - d2;
    if disc <= TANGENT_TOL * r2 {
        return None;
    }
    let half = disc.sqrt();
    Some(Interval::new(mid - half, mid + half))
}

/// Parameters of `line` inside `hs`.
pub fn intersect_halfspace(line: &Line, hs: &HalfSpace) -> LineCut {
    let slope = dot(&hs.normal, line.theta());
    let at0 = dot(&hs.normal, line.origin()) - hs.offset;
    if slope.abs() <= PARALLEL_TOL {
        return if at0 <= 0.0 { LineCut::Full } else { LineCut::Empty };
    }
    let root = -at0 / slope;
    if slope > 0.0 {
        LineCut::Part(Interval::new(f64::NEG_INFINITY, root))
    } else {
        LineCut::Part(Interval::new(root, f64::INFINITY))
    }
}
