//! Reflected Brownian motion inside a shape, discretized with an Euler
//! scheme and mirror reflection across the boundary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cloud::{PointCloud, Provenance};
use crate::error::{param, Error, Result};
use crate::geom::{norm, Point};
use crate::shapes::Shape;

/// Inward nudge applied when a reflected proposal still lands outside.
const NUDGE: f64 = 1e-9;

/// Drift field of the diffusion. Only the driftless process is provided;
/// the enum is the extension point for others.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Drift {
    #[default]
    Zero,
}

impl Drift {
    fn at(&self, _x: &[f64], out: &mut [f64]) {
        match self {
            Drift::Zero => out.iter_mut().for_each(|v| *v = 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RbmConfig {
    pub shape: Shape,
    pub x0: Point,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub drift: Drift,
}

impl RbmConfig {
    /// Driftless motion started at `x0`.
    pub fn new(shape: Shape, x0: Point, dt: f64, t_end: f64, seed: u64) -> Self {
        RbmConfig {
            shape,
            x0,
            dt,
            t_end,
            seed,
            drift: Drift::Zero,
        }
    }

    /// A start point inside `shape`: the origin when it belongs to the
    /// shape, otherwise the midpoint of the shape's radial extent along
    /// the first axis.
    pub fn default_start(shape: &Shape) -> Point {
        let d = shape.dim();
        let origin = vec![0.0; d];
        if shape.contains(&origin) {
            return origin;
        }
        let mut x = vec![0.0; d];
        let (lo, hi) = (0.0, shape.bounding_radius());
        let (mut a, mut b) = (lo, hi);
        // first interior point along the x-axis
        for i in 1..=1000 {
            x[0] = lo + (hi - lo) * i as f64 / 1000.0;
            if shape.contains(&x) {
                a = x[0];
                break;
            }
        }
        for i in 1..=1000 {
            x[0] = a + (hi - a) * i as f64 / 1000.0;
            if !shape.contains(&x) {
                b = x[0];
                break;
            }
        }
        x[0] = 0.5 * (a + b);
        x
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(param("dt", format!("{} must be positive", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(param("t_end", format!("{} must be positive", self.t_end)));
        }
        let alpha = self.shape.rolling_radius();
        if self.dt > alpha * alpha / 100.0 {
            return Err(param(
                "dt",
                format!("{} exceeds alpha^2/100 = {}", self.dt, alpha * alpha / 100.0),
            ));
        }
        if self.x0.len() != self.shape.dim() {
            return Err(Error::InvalidDimension {
                got: self.x0.len(),
                expected: "start point of the shape's dimension",
            });
        }
        if !self.shape.contains(&self.x0) {
            return Err(Error::OutsideShape);
        }
        Ok(())
    }
}

/// Simulates the trajectory and returns its `floor(t_end / dt)` positions
/// after each step.
pub fn simulate_rbm(cfg: &RbmConfig) -> Result<PointCloud> {
    cfg.validate()?;
    let shape = &cfg.shape;
    let d = shape.dim();
    let steps = (cfg.t_end / cfg.dt).floor() as usize;
    let sd = cfg.dt.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = cfg.x0.clone();
    let mut drift = vec![0.0; d];
    let mut prop = vec![0.0; d];
    let mut coords = Vec::with_capacity(steps * d);
    for _ in 0..steps {
        cfg.drift.at(&x, &mut drift);
        for k in 0..d {
            let g: f64 = rng.sample(StandardNormal);
            prop[k] = x[k] + sd * g + drift[k] * cfg.dt;
        }
        if !shape.contains(&prop) {
            if let Some(next) = reflect(shape, &prop) {
                x = next;
            }
        } else {
            x.copy_from_slice(&prop);
        }
        debug_assert!(shape.contains(&x));
        coords.extend_from_slice(&x);
    }
    Ok(PointCloud::from_flat(d, coords)?.with_provenance(Provenance::Rbm))
}

/// Mirror image of an outside proposal, falling back to the nudged
/// boundary projection. `None` keeps the walker where it was.
fn reflect(shape: &Shape, outside: &[f64]) -> Option<Point> {
    let p = shape.project_to_boundary(outside).ok()?;
    let mirrored: Point = p.iter().zip(outside).map(|(pi, xi)| 2.0 * pi - xi).collect();
    if shape.contains(&mirrored) {
        return Some(mirrored);
    }
    let inward: Point = p.iter().zip(outside).map(|(pi, xi)| pi - xi).collect();
    let n = norm(&inward);
    if n == 0.0 {
        return None;
    }
    let nudged: Point = p.iter().zip(&inward).map(|(pi, v)| pi + NUDGE * v / n).collect();
    shape.contains(&nudged).then_some(nudged)
}
