//! Andrew's monotone chain convex hull, reported as half-planes.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::geom::HalfSpace;

use super::delaunay::orient;

/// Hull vertex indices in counter-clockwise order, collinear points dropped.
pub fn hull_indices(points: &PointCloud) -> Result<Vec<u32>> {
    if points.dim() != 2 {
        return Err(Error::InvalidDimension {
            got: points.dim(),
            expected: "2",
        });
    }
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let p = |i: u32| -> [f64; 2] {
        let q = points.point(i as usize);
        [q[0], q[1]]
    };
    let mut idx: Vec<u32> = (0..points.len() as u32).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (p(a), p(b));
        pa[0].total_cmp(&pb[0]).then(pa[1].total_cmp(&pb[1])).then(a.cmp(&b))
    });
    idx.dedup_by(|a, b| p(*a) == p(*b));

    let mut hull: Vec<u32> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &u32>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && orient(p(hull[hull.len() - 2]), p(hull[hull.len() - 1]), p(i)) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::Degenerate("all points are collinear".into()));
    }
    Ok(hull)
}

/// One half-plane `{ <n, x> <= c }` per hull edge with outward unit normal
/// `n`; the cloud lies in all of them.
pub fn convex_hull2(points: &PointCloud) -> Result<Vec<HalfSpace>> {
    let hull = hull_indices(points)?;
    let m = hull.len();
    Ok((0..m)
        .map(|k| {
            let a = points.point(hull[k] as usize);
            let b = points.point(hull[(k + 1) % m] as usize);
            edge_halfspace(a, b)
        })
        .collect())
}

/// Half-plane to the right of the directed edge `a -> b`, boundary through both.
pub(crate) fn edge_halfspace(a: &[f64], b: &[f64]) -> HalfSpace {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len = dx.hypot(dy);
    let normal = vec![dy / len, -dx / len];
    // offset from the larger of the two endpoint projections, so both
    // endpoints satisfy the constraint after rounding
    let offset = (normal[0] * a[0] + normal[1] * a[1]).max(normal[0] * b[0] + normal[1] * b[1]);
    HalfSpace { normal, offset }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::dot;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_gives_axis_half_planes() {
        let sq = PointCloud::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0]).unwrap();
        let hs = convex_hull2(&sq).unwrap();
        assert_eq!(hs.len(), 4);
        let mut normals: Vec<(i32, i32, i32)> = hs
            .iter()
            .map(|h| (h.normal[0].round() as i32, h.normal[1].round() as i32, h.offset.round() as i32))
            .collect();
        normals.sort();
        assert_eq!(normals, vec![(-1, 0, 0), (0, -1, 0), (0, 1, 1), (1, 0, 1)]);
    }

    #[test]
    fn triangle_and_collinear() {
        let tri = PointCloud::from_flat(2, vec![0.0, 0.0, 2.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(convex_hull2(&tri).unwrap().len(), 3);
        let line = PointCloud::from_flat(2, vec![0.0, 0.0, 1.0, 1.0, 3.0, 3.0]).unwrap();
        assert!(matches!(convex_hull2(&line), Err(Error::Degenerate(_))));
    }

    #[test]
    fn random_points_satisfy_every_constraint() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let coords = (0..1000).map(|_| rng.random_range(-1.0..1.0)).collect();
        let cloud = PointCloud::from_flat(2, coords).unwrap();
        let hs = convex_hull2(&cloud).unwrap();
        for p in cloud.iter() {
            for h in &hs {
                assert!(dot(&h.normal, p) <= h.offset + 1e-12);
            }
        }
        // every hull vertex is on two constraints
        for &v in &hull_indices(&cloud).unwrap() {
            let p = cloud.point(v as usize);
            let tight = hs.iter().filter(|h| (dot(&h.normal, p) - h.offset).abs() < 1e-12).count();
            assert_eq!(tight, 2);
        }
    }
}
