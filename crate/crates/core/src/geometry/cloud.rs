//! Point clouds and unit-cube normalisation.

use serde::{Deserialize, Serialize};

use crate::geometry::v3::{self, V3};
use crate::{Error, Result};

/// Non-empty list of finite 3-D points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<V3>,
}

impl PointCloud {
    pub fn new(points: Vec<V3>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud("PointCloud::new"));
        }
        if !points.iter().all(|&p| v3::is_finite(p)) {
            return Err(Error::NonFinite {
                context: "PointCloud::new".into(),
            });
        }
        Ok(PointCloud { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty clouds
    }

    pub fn points(&self) -> &[V3] {
        &self.points
    }

    pub fn point(&self, i: usize) -> V3 {
        self.points[i]
    }

    /// Axis-aligned bounding box as (min, max) corners.
    pub fn bbox(&self) -> (V3, V3) {
        let mut lo = self.points[0];
        let mut hi = self.points[0];
        for p in &self.points {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    pub fn map(&self, f: impl Fn(V3) -> V3) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|&p| f(p)).collect(),
        }
    }
}

/// Invertible centre-and-uniform-scale transform into the ±1 cube:
/// `x' = (x - center) * scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitCubeTransform {
    pub center: V3,
    pub scale: f64,
}

impl UnitCubeTransform {
    pub fn apply(&self, p: V3) -> V3 {
        v3::scale(v3::sub(p, self.center), self.scale)
    }

    pub fn invert(&self, p: V3) -> V3 {
        v3::add(v3::scale(p, 1.0 / self.scale), self.center)
    }

    pub fn apply_cloud(&self, c: &PointCloud) -> PointCloud {
        c.map(|p| self.apply(p))
    }

    /// Composes an extra uniform shrink on top (e.g. to leave margin for
    /// deformations inside the cube).
    pub fn shrunk(mut self, factor: f64) -> Self {
        self.scale *= factor;
        self
    }
}

/// Computes the transform that centres the cloud and scales its longest
/// half-extent to 1, and returns the transformed copy. The two clouds with
/// fewer than two distinct points have no scale and are rejected.
pub fn normalize_unit_cube(cloud: &PointCloud) -> Result<(PointCloud, UnitCubeTransform)> {
    let (lo, hi) = cloud.bbox();
    let center = [
        0.5 * (lo[0] + hi[0]),
        0.5 * (lo[1] + hi[1]),
        0.5 * (lo[2] + hi[2]),
    ];
    let half = [
        0.5 * (hi[0] - lo[0]),
        0.5 * (hi[1] - lo[1]),
        0.5 * (hi[2] - lo[2]),
    ];
    let max_half = half[0].max(half[1]).max(half[2]);
    if max_half <= 0.0 {
        return Err(Error::Degenerate(
            "normalize_unit_cube: cloud has zero extent".into(),
        ));
    }
    let t = UnitCubeTransform {
        center,
        scale: 1.0 / max_half,
    };
    Ok((t.apply_cloud(cloud), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_segment_maps_to_plus_minus_one() {
        let c = PointCloud::new(vec![[0.0, 0.0, 0.0], [10.0, 0.0, 0.0]]).unwrap();
        let (n, t) = normalize_unit_cube(&c).unwrap();
        assert_eq!(n.points()[0], [-1.0, 0.0, 0.0]);
        assert_eq!(n.points()[1], [1.0, 0.0, 0.0]);
        assert_eq!(t.center, [5.0, 0.0, 0.0]);
        assert_eq!(t.scale, 0.2);
    }

    #[test]
    fn already_normalized_cloud_is_unchanged() {
        let c = PointCloud::new(vec![
            [-1.0, -1.0, -1.0],
            [1.0, 1.0, 1.0],
            [0.25, -0.5, 0.75],
        ])
        .unwrap();
        let (n, t) = normalize_unit_cube(&c).unwrap();
        assert_eq!(n.points(), c.points());
        assert_eq!(t.scale, 1.0);
        assert_eq!(t.center, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn single_point_cloud_is_degenerate() {
        let c = PointCloud::new(vec![[3.0, 1.0, 2.0]]).unwrap();
        assert!(matches!(
            normalize_unit_cube(&c),
            Err(crate::Error::Degenerate(_))
        ));
    }

    #[test]
    fn empty_cloud_rejected() {
        assert!(matches!(
            PointCloud::new(vec![]),
            Err(crate::Error::EmptyCloud(_))
        ));
    }

    #[test]
    fn round_trip_through_transform() {
        let c = PointCloud::new(vec![[2.0, -3.0, 7.5], [11.0, 0.25, -4.0], [5.0, 5.0, 5.0]])
            .unwrap();
        let (n, t) = normalize_unit_cube(&c).unwrap();
        for (orig, mapped) in c.points().iter().zip(n.points()) {
            let back = t.invert(*mapped);
            for k in 0..3 {
                assert!((back[k] - orig[k]).abs() < 1e-6);
            }
        }
    }
}
