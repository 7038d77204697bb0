//! Monte Carlo evaluation of the Crofton formula.
//!
//! `k` directions are drawn uniformly on the half-sphere; along each, `l`
//! offsets are drawn uniformly on the cube `[-L, L]^(d-1)` of the orthogonal
//! complement, with `L` the largest norm in the sample. The estimate is
//! `(2L)^(d-1) / beta(d)` times the mean count.
//!
//! Every direction draws from its own ChaCha stream, and counts are summed
//! as integers, so results do not depend on the number of worker threads.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphahull::{alpha_complement2, check_n_with, ComplementElements};
use crate::cloud::PointCloud;
use crate::dw::{auto_epsilon, hat_n_with, DwIndex, Scratch};
use crate::error::{param, Error, Result};
use crate::geom::{orthonormal_basis, sample_direction, Line};
use crate::shapes::Shape;

/// `Gamma(d/2) / Gamma((d+1)/2) / sqrt(pi)`.
pub fn beta(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            got: d,
            expected: ">= 2",
        });
    }
    let d = d as f64;
    Ok((libm::lgamma(d / 2.0) - libm::lgamma((d + 1.0) / 2.0)).exp() / std::f64::consts::PI.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinePlan {
    pub dim: usize,
    /// Number of directions.
    pub k: usize,
    /// Lines per direction.
    pub l: usize,
    /// Half-width `L` of the offset window.
    pub half_width: f64,
    pub seed: u64,
}

impl LinePlan {
    pub fn new(dim: usize, k: usize, l: usize, half_width: f64, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension {
                got: dim,
                expected: ">= 2",
            });
        }
        if k == 0 {
            return Err(param("k", "at least one direction is needed"));
        }
        if l == 0 {
            return Err(param("l", "at least one line per direction is needed"));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(param("L", format!("{half_width} must be positive")));
        }
        Ok(LinePlan {
            dim,
            k,
            l,
            half_width,
            seed,
        })
    }

    /// Plan whose window half-width is the largest norm in `cloud`.
    pub fn for_cloud(cloud: &PointCloud, k: usize, l: usize, seed: u64) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        Self::new(cloud.dim(), k, l, cloud.max_norm(), seed)
    }

    /// `(2L)^(d-1) / beta(d)`.
    pub fn scale_factor(&self) -> Result<f64> {
        Ok((2.0 * self.half_width).powi(self.dim as i32 - 1) / beta(self.dim)?)
    }

    /// The `l` lines of direction `i`.
    pub fn direction_lines(&self, i: usize) -> Vec<Line> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        let theta = sample_direction(&mut rng, self.dim).expect("dimension checked by the plan");
        let basis = orthonormal_basis(&theta);
        (0..self.l)
            .map(|_| {
                let offset = (0..self.dim - 1)
                    .map(|_| self.half_width * rng.random_range(-1.0..=1.0))
                    .collect();
                Line::with_basis(theta.clone(), basis.clone(), offset).expect("orthonormal basis")
            })
            .collect()
    }
}

/// One sampled line with its direction index.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedLine {
    pub direction: usize,
    pub line: Line,
}

/// All `k * l` lines of the plan, direction by direction.
pub fn sample_lines(plan: &LinePlan) -> Vec<PlannedLine> {
    (0..plan.k)
        .flat_map(|i| {
            plan.direction_lines(i)
                .into_iter()
                .map(move |line| PlannedLine { direction: i, line })
        })
        .collect()
}

/// Counts boundary crossings of a line.
pub trait LineCounter: Sync {
    type Scratch: Default + Send;
    fn count(&self, line: &Line, scratch: &mut Self::Scratch) -> Result<usize>;
}

impl<F> LineCounter for F
where
    F: Fn(&Line) -> Result<usize> + Sync,
{
    type Scratch = ();
    fn count(&self, line: &Line, _: &mut ()) -> Result<usize> {
        self(line)
    }
}

/// The exact count of a known shape.
pub struct ShapeCounter<'a>(pub &'a Shape);

impl LineCounter for ShapeCounter<'_> {
    type Scratch = ();
    fn count(&self, line: &Line, _: &mut ()) -> Result<usize> {
        self.0.true_line_count(line)
    }
}

/// Union-of-balls counter, optionally capped.
pub struct DwCounter<'a> {
    pub index: &'a DwIndex,
    pub cap: Option<usize>,
}

impl LineCounter for DwCounter<'_> {
    type Scratch = Scratch;
    fn count(&self, line: &Line, s: &mut Scratch) -> Result<usize> {
        let n = hat_n_with(line, self.index, s);
        Ok(self.cap.map_or(n, |c| n.min(c)))
    }
}

/// Alpha-convex hull counter.
pub struct AlphaCounter<'a>(pub &'a ComplementElements);

impl LineCounter for AlphaCounter<'_> {
    type Scratch = Vec<u32>;
    fn count(&self, line: &Line, s: &mut Vec<u32>) -> Result<usize> {
        Ok(check_n_with(line, self.0, s))
    }
}

/// Mean and block standard error of a Monte Carlo run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McResult {
    pub value: f64,
    pub stderr: f64,
    /// Sum of all counts.
    pub total: u64,
}

/// Averages `counter` over the lines of `plan` and scales to a surface
/// measure. The standard error is taken over the per-direction means; it is
/// zero when there is a single direction.
pub fn mc_estimate<C: LineCounter>(counter: &C, plan: &LinePlan) -> Result<McResult> {
    let factor = plan.scale_factor()?;
    let sums: Vec<Result<u64>> = (0..plan.k)
        .into_par_iter()
        .map_init(C::Scratch::default, |scratch, i| {
            let mut sum = 0u64;
            for (j, line) in plan.direction_lines(i).iter().enumerate() {
                let c = counter.count(line, scratch).map_err(|e| Error::Counter {
                    direction: i,
                    line: j,
                    seed: plan.seed,
                    theta: line.theta().to_vec(),
                    offset: line.offset().to_vec(),
                    source: Box::new(e),
                })?;
                sum += c as u64;
            }
            Ok(sum)
        })
        .collect();
    let sums = sums.into_iter().collect::<Result<Vec<u64>>>()?;
    let total: u64 = sums.iter().sum();
    let l = plan.l as f64;
    let k = plan.k as f64;
    let mean = total as f64 / (k * l);
    let stderr = if plan.k > 1 {
        let var = sums
            .iter()
            .map(|&s| {
                let m = s as f64 / l - mean;
                m * m
            })
            .sum::<f64>()
            / (k - 1.0);
        factor * (var / k).sqrt()
    } else {
        0.0
    };
    Ok(McResult {
        value: factor * mean,
        stderr,
        total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterKind {
    Dw,
    DwCapped,
    Alpha,
}

/// How the ball radius is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Epsilon {
    /// Twice the largest nearest-neighbour distance.
    Auto,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Dw { epsilon: Epsilon },
    DwCapped { epsilon: Epsilon, cap: usize },
    Alpha { alpha: f64 },
}

impl Method {
    pub fn kind(&self) -> CounterKind {
        match self {
            Method::Dw { .. } => CounterKind::Dw,
            Method::DwCapped { .. } => CounterKind::DwCapped,
            Method::Alpha { .. } => CounterKind::Alpha,
        }
    }
}

/// A surface measure estimate with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub counter_kind: CounterKind,
    pub plan: LinePlan,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Whether interior balls were pruned before cutting lines (ball
    /// methods only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centers_filtered: Option<bool>,
    pub n_points: usize,
    pub runtime_ms: f64,
}

/// Estimates the boundary measure of the set sampled by `cloud`.
pub fn estimate(cloud: &PointCloud, method: Method, k: usize, l: usize, seed: u64) -> Result<Estimate> {
    let start = Instant::now();
    let plan = LinePlan::for_cloud(cloud, k, l, seed)?;
    let mut out = Estimate {
        value: 0.0,
        stderr: 0.0,
        counter_kind: method.kind(),
        plan: plan.clone(),
        epsilon: None,
        alpha: None,
        cap: None,
        centers_filtered: None,
        n_points: cloud.len(),
        runtime_ms: 0.0,
    };
    let mc = match method {
        Method::Dw { epsilon } | Method::DwCapped { epsilon, .. } => {
            let cap = match method {
                Method::DwCapped { cap, .. } => {
                    if cap < 2 {
                        return Err(param("cap", format!("{cap} is below 2")));
                    }
                    Some(cap)
                }
                _ => None,
            };
            let eps = match epsilon {
                Epsilon::Auto => auto_epsilon(cloud)?,
                Epsilon::Fixed(e) => e,
            };
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(param("epsilon", format!("{eps} must be positive")));
            }
            let index = DwIndex::new(cloud.clone(), eps)?;
            out.epsilon = Some(eps);
            out.cap = cap;
            out.centers_filtered = Some(index.centers().filtered);
            mc_estimate(&DwCounter { index: &index, cap }, &plan)?
        }
        Method::Alpha { alpha } => {
            if cloud.dim() != 2 {
                return Err(Error::InvalidDimension {
                    got: cloud.dim(),
                    expected: "2 for the alpha-hull counter",
                });
            }
            let comp = alpha_complement2(cloud, alpha)?;
            out.alpha = Some(alpha);
            mc_estimate(&AlphaCounter(&comp), &plan)?
        }
    };
    out.value = mc.value;
    out.stderr = mc.stderr;
    out.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::sample_iid;
    use std::f64::consts::PI;

    #[test]
    fn beta_closed_forms() {
        assert!((beta(2).unwrap() - 2.0 / PI).abs() < 1e-14);
        assert!((beta(3).unwrap() - 0.5).abs() < 1e-14);
        assert!((beta(4).unwrap() - 4.0 / (3.0 * PI)).abs() < 1e-14);
        assert!(beta(1).is_err());
    }

    #[test]
    fn plan_validation() {
        assert!(LinePlan::new(2, 0, 1, 1.0, 0).is_err());
        assert!(LinePlan::new(2, 1, 0, 1.0, 0).is_err());
        assert!(LinePlan::new(2, 1, 1, 0.0, 0).is_err());
        assert!(LinePlan::new(1, 1, 1, 1.0, 0).is_err());
    }

    #[test]
    fn line_sampling_shape_and_determinism() {
        let plan = LinePlan::new(3, 1, 1, 2.5, 4).unwrap();
        let lines = sample_lines(&plan);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].line.offset().iter().all(|o| o.abs() <= 2.5));

        let plan = LinePlan::new(2, 3, 5, 1.0, 9).unwrap();
        let lines = sample_lines(&plan);
        assert_eq!(lines.len(), 15);
        let mut thetas: Vec<Vec<f64>> = lines.iter().map(|p| p.line.theta().to_vec()).collect();
        thetas.dedup();
        assert_eq!(thetas.len(), 3);
        assert_eq!(lines, sample_lines(&plan));
        assert_ne!(lines, sample_lines(&LinePlan { seed: 10, ..plan }));
    }

    #[test]
    fn zero_counter_gives_zero() {
        let plan = LinePlan::new(2, 20, 20, 1.0, 1).unwrap();
        let r = mc_estimate(&|_: &Line| Ok(0), &plan).unwrap();
        assert_eq!((r.value, r.stderr), (0.0, 0.0));
    }

    #[test]
    fn counter_errors_carry_the_line() {
        let plan = LinePlan::new(2, 4, 4, 1.0, 77).unwrap();
        let err = mc_estimate(&|_: &Line| Err(Error::Tangent), &plan).unwrap_err();
        match err {
            Error::Counter { direction, line, seed, source, .. } => {
                assert_eq!((direction, line, seed), (0, 0, 77));
                assert_eq!(*source, Error::Tangent);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_counter_on_disk() {
        let disk = Shape::disk(1.0).unwrap();
        let plan = LinePlan::new(2, 200, 200, 1.0, 5).unwrap();
        let r = mc_estimate(&ShapeCounter(&disk), &plan).unwrap();
        assert!((r.value - 2.0 * PI).abs() <= 3.0 * r.stderr, "{r:?}");
        assert!(r.stderr < 0.05 * 2.0 * PI);
    }

    #[test]
    fn exact_counter_on_ball_matches_quadrature() {
        // the window fraction covered by the unit disk, by midpoint rule
        let m = 2000;
        let mut inside = 0usize;
        for i in 0..m {
            for j in 0..m {
                let x = -1.0 + 2.0 * (i as f64 + 0.5) / m as f64;
                let y = -1.0 + 2.0 * (j as f64 + 0.5) / m as f64;
                inside += (x * x + y * y < 1.0) as usize;
            }
        }
        let mean_count = 2.0 * inside as f64 / (m * m) as f64;
        let truth = 4.0 / beta(3).unwrap() * mean_count;
        assert!((truth - 4.0 * PI).abs() < 1e-3);

        let ball = Shape::ball3(1.0).unwrap();
        let plan = LinePlan::new(3, 200, 400, 1.0, 6).unwrap();
        let r = mc_estimate(&ShapeCounter(&ball), &plan).unwrap();
        assert!((r.value - truth).abs() <= 3.0 * r.stderr, "{r:?} vs {truth}");
    }

    #[test]
    fn stderr_halves_with_four_times_the_directions() {
        let disk = Shape::annulus(1.0, 2.0).unwrap();
        let small = mc_estimate(&ShapeCounter(&disk), &LinePlan::new(2, 400, 50, 2.0, 1).unwrap()).unwrap();
        let big = mc_estimate(&ShapeCounter(&disk), &LinePlan::new(2, 1600, 50, 2.0, 2).unwrap()).unwrap();
        let ratio = small.stderr / big.stderr;
        assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
    }

    fn rotate(cloud: &PointCloud, a: f64) -> PointCloud {
        let (s, c) = a.sin_cos();
        PointCloud::from_flat(2, cloud.iter().flat_map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]]).collect()).unwrap()
    }

    #[test]
    fn scale_equivariance_is_exact() {
        let shape = Shape::annulus(1.0, 2.0).unwrap();
        let cloud = sample_iid(&shape, 4000, 3).unwrap();
        let eps = auto_epsilon(&cloud).unwrap();
        for s in [0.5, 2.0, 8.0] {
            let scaled = cloud.scaled(s);
            let a = estimate(&cloud, Method::Dw { epsilon: Epsilon::Fixed(eps) }, 20, 50, 1).unwrap();
            let b = estimate(&scaled, Method::Dw { epsilon: Epsilon::Fixed(eps * s) }, 20, 50, 1).unwrap();
            assert!((b.value - s * a.value).abs() <= 1e-9 * b.value, "{} vs {}", b.value, s * a.value);
            let a = estimate(&cloud, Method::Alpha { alpha: 0.4 }, 20, 50, 1).unwrap();
            let b = estimate(&scaled, Method::Alpha { alpha: 0.4 * s }, 20, 50, 1).unwrap();
            assert!((b.value - s * a.value).abs() <= 1e-9 * b.value);
        }
        let ball = Shape::ball3(1.0).unwrap();
        let cloud = sample_iid(&ball, 3000, 3).unwrap();
        let a = estimate(&cloud, Method::Dw { epsilon: Epsilon::Fixed(0.2) }, 10, 30, 2).unwrap();
        let b = estimate(&cloud.scaled(4.0), Method::Dw { epsilon: Epsilon::Fixed(0.8) }, 10, 30, 2).unwrap();
        assert!((b.value - 16.0 * a.value).abs() <= 1e-9 * b.value);
    }

    #[test]
    fn rotation_changes_estimates_only_within_noise() {
        let disk = Shape::disk(1.0).unwrap();
        let cloud = sample_iid(&disk, 5000, 12).unwrap();
        let m = Method::Alpha { alpha: 0.5 };
        let a = estimate(&cloud, m, 40, 100, 1).unwrap();
        let b = estimate(&rotate(&cloud, 0.7), m, 40, 100, 1).unwrap();
        let tol = 3.0 * a.stderr.hypot(b.stderr);
        assert!((a.value - b.value).abs() <= tol, "{} vs {} (tol {tol})", a.value, b.value);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let shape = Shape::disk(1.0).unwrap();
        let cloud = sample_iid(&shape, 3000, 1).unwrap();
        let run = |threads: usize, m: Method| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let e = pool.install(|| estimate(&cloud, m, 16, 40, 99).unwrap());
            (e.value, e.stderr)
        };
        for m in [Method::Dw { epsilon: Epsilon::Auto }, Method::Alpha { alpha: 0.5 }] {
            let one = run(1, m);
            assert_eq!(one, run(4, m));
            assert_eq!(one, run(8, m));
        }
    }

    #[test]
    fn alpha_needs_the_plane() {
        let ball = Shape::ball3(1.0).unwrap();
        let cloud = sample_iid(&ball, 100, 1).unwrap();
        assert!(matches!(
            estimate(&cloud, Method::Alpha { alpha: 0.5 }, 2, 2, 0),
            Err(Error::InvalidDimension { got: 3, .. })
        ));
        assert!(estimate(&cloud, Method::DwCapped { epsilon: Epsilon::Auto, cap: 1 }, 2, 2, 0).is_err());
        assert!(estimate(&cloud, Method::Dw { epsilon: Epsilon::Fixed(-1.0) }, 2, 2, 0).is_err());
    }
}
