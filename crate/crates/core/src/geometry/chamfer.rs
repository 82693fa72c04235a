//! Chamfer distance between point clouds: the sum of the two directed means
//! of squared nearest-neighbour distances.

use crate::geometry::cloud::PointCloud;
use crate::geometry::kdtree::{nearest_brute, KdTree};
use crate::geometry::v3::V3;
use crate::Result;

/// Mean squared distance from each point of `from` to its nearest neighbour
/// in the tree.
pub fn chamfer_directed(from: &[V3], to: &KdTree) -> f64 {
    let mut sum = 0.0;
    for &p in from {
        sum += to.nearest(p).1;
    }
    sum / from.len() as f64
}

/// Symmetric Chamfer distance CD(a, b) = mean_a min_b d² + mean_b min_a d².
pub fn chamfer_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    let ta = KdTree::build(a.points())?;
    let tb = KdTree::build(b.points())?;
    Ok(chamfer_directed(a.points(), &tb) + chamfer_directed(b.points(), &ta))
}

/// O(n·m) reference implementation, the oracle for the kd-backed route.
pub fn chamfer_brute(a: &[V3], b: &[V3]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "chamfer_brute on empty cloud");
    let mut sum_ab = 0.0;
    for &p in a {
        sum_ab += nearest_brute(b, p).1;
    }
    let mut sum_ba = 0.0;
    for &q in b {
        sum_ba += nearest_brute(a, q).1;
    }
    sum_ab / a.len() as f64 + sum_ba / b.len() as f64
}
