use crofton_core::alphahull::{alpha_complement2, check_n, delaunay2};
use crofton_core::crofton::{estimate, sample_lines, Epsilon, LinePlan, Method};
use crofton_core::dw::{hat_n, DwIndex};
use crofton_core::geom::{sample_direction, union_intervals, Interval, Line};
use crofton_core::shapes::{sample_iid, Shape};
use crofton_core::{Error, PointCloud};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cloud_strategy(max: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..max).prop_map(|pts| {
        PointCloud::from_flat(2, pts.into_iter().flat_map(|(x, y)| [x, y]).collect()).unwrap()
    })
}

fn random_line(seed: u64, d: usize, half: f64) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = sample_direction(&mut rng, d).unwrap();
    let off = (0..d - 1).map(|_| rng.random_range(-half..half)).collect();
    Line::new(theta, off).unwrap()
}

fn shapes() -> Vec<Shape> {
    vec![
        Shape::disk(1.0).unwrap(),
        Shape::annulus(1.0, 2.0).unwrap(),
        Shape::rounded_square(2.0, 0.3).unwrap(),
        Shape::peanut(1.2, 0.5).unwrap(),
        Shape::ball3(1.0).unwrap(),
        Shape::shell3(1.0, 2.0).unwrap(),
        Shape::torus(2.0, 0.5).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_matches_pointwise_membership(
        raw in prop::collection::vec((0.0f64..10.0, 0.0f64..2.0), 0..30),
        probes in prop::collection::vec(-1.0f64..13.0, 50),
    ) {
        let items: Vec<Interval> = raw.iter().map(|&(a, w)| Interval::new(a, a + w)).collect();
        let set = union_intervals(items.clone());
        for w in set.intervals().windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
        for t in probes {
            prop_assert_eq!(set.contains(t), items.iter().any(|iv| iv.contains(t)));
        }
    }

    #[test]
    fn true_counts_are_even_and_bounded(which in 0usize..7, seed in any::<u64>()) {
        let shape = &shapes()[which];
        let line = random_line(seed, shape.dim(), shape.bounding_radius());
        match shape.true_line_count(&line) {
            Ok(n) => {
                prop_assert_eq!(n % 2, 0);
                prop_assert!(n <= shape.max_crossings());
            }
            Err(e) => prop_assert_eq!(e, Error::Tangent),
        }
    }

    #[test]
    fn delaunay_circumcircles_are_empty(cloud in cloud_strategy(60)) {
        let Ok(tri) = delaunay2(&cloud) else { return Ok(()) };
        let pts = tri.points();
        let c = |p: [f64; 2]| robust::Coord { x: p[0], y: p[1] };
        for t in tri.triangles() {
            let [a, b, d] = t.map(|v| pts[v as usize]);
            prop_assert!(robust::orient2d(c(a), c(b), c(d)) > 0.0);
            for (i, &p) in pts.iter().enumerate() {
                if !t.contains(&(i as u32)) {
                    prop_assert!(robust::incircle(c(a), c(b), c(d), c(p)) <= 0.0);
                }
            }
        }
    }

    #[test]
    fn ball_counts_are_even(cloud in cloud_strategy(80), eps in 0.02f64..0.5, seed in any::<u64>()) {
        let index = DwIndex::new(cloud, eps).unwrap();
        let line = random_line(seed, 2, 1.5);
        prop_assert_eq!(hat_n(&line, &index) % 2, 0);
    }

    #[test]
    fn hull_counts_are_even(cloud in cloud_strategy(80), alpha in 0.05f64..2.0, seed in any::<u64>()) {
        let comp = alpha_complement2(&cloud, alpha).unwrap();
        let line = random_line(seed, 2, 1.5);
        prop_assert_eq!(check_n(&line, &comp) % 2, 0);
    }

    #[test]
    fn planned_offsets_stay_in_the_window(d in 2usize..5, k in 1usize..6, l in 1usize..6, seed in any::<u64>()) {
        let plan = LinePlan::new(d, k, l, 1.5, seed).unwrap();
        let lines = sample_lines(&plan);
        prop_assert_eq!(lines.len(), k * l);
        for pl in &lines {
            prop_assert!(pl.line.offset().iter().all(|o| o.abs() <= 1.5));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn estimates_scale_with_dyadic_factors(power in -3i32..4, seed in 0u64..1000) {
        let s = 2f64.powi(power);
        let cloud = sample_iid(&Shape::annulus(1.0, 2.0).unwrap(), 600, seed).unwrap();
        let pairs = [
            (Method::Dw { epsilon: Epsilon::Auto }, Method::Dw { epsilon: Epsilon::Auto }),
            (Method::Alpha { alpha: 0.4 }, Method::Alpha { alpha: 0.4 * s }),
        ];
        for (m, ms) in pairs {
            let a = estimate(&cloud, m, 8, 20, seed).unwrap();
            let b = estimate(&cloud.scaled(s), ms, 8, 20, seed).unwrap();
            prop_assert!((b.value - a.value * s).abs() <= 1e-9 * a.value.abs());
        }
    }
}
