//! Static kd-tree for exact nearest-neighbour queries.
//!
//! Tie rule: among equidistant points the lowest index wins. The traversal
//! enforces this with a lexicographic (distance², index) comparison and by
//! pruning subtrees only when they are strictly farther than the current
//! best, so results match the brute-force scan bit for bit.

use crate::geometry::v3::{dist2, V3};
use crate::{Error, Result};

#[derive(Clone, Debug)]
struct Node {
    point: u32,
    axis: u8,
    left: i32,
    right: i32,
}

#[derive(Clone, Debug)]
pub struct KdTree {
    points: Vec<V3>,
    nodes: Vec<Node>,
    root: i32,
}

impl KdTree {
    pub fn build(points: &[V3]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud("KdTree::build"));
        }
        let mut tree = KdTree {
            points: points.to_vec(),
            nodes: Vec::with_capacity(points.len()),
            root: -1,
        };
        let mut idx: Vec<u32> = (0..points.len() as u32).collect();
        tree.root = tree.build_rec(&mut idx);
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty inputs
    }

    pub fn points(&self) -> &[V3] {
        &self.points
    }

    fn build_rec(&mut self, idx: &mut [u32]) -> i32 {
        if idx.is_empty() {
            return -1;
        }
        // Split on the widest axis of this subset; ties pick the lowest axis.
        let mut lo = self.points[idx[0] as usize];
        let mut hi = lo;
        for &i in idx.iter() {
            let p = self.points[i as usize];
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let extents = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
        let mut axis = 0usize;
        for k in 1..3 {
            if extents[k] > extents[axis] {
                axis = k;
            }
        }
        let mid = idx.len() / 2;
        // Total order (coordinate, index) makes the median unique, so the
        // tree layout is deterministic even with duplicate points.
        idx.select_nth_unstable_by(mid, |&a, &b| {
            let ca = self.points[a as usize][axis];
            let cb = self.points[b as usize][axis];
            ca.partial_cmp(&cb).unwrap().then(a.cmp(&b))
        });
        let point = idx[mid];
        let (left_slice, rest) = idx.split_at_mut(mid);
        let right_slice = &mut rest[1..];
        let left = self.build_rec(left_slice);
        let right = self.build_rec(right_slice);
        self.nodes.push(Node {
            point,
            axis: axis as u8,
            left,
            right,
        });
        (self.nodes.len() - 1) as i32
    }

    /// Index of and squared distance to the nearest point; lowest index on
    /// ties.
    pub fn nearest(&self, q: V3) -> (usize, f64) {
        let mut best_d2 = f64::INFINITY;
        let mut best_idx = u32::MAX;
        self.search(self.root, q, &mut best_d2, &mut best_idx);
        (best_idx as usize, best_d2)
    }

    /// Nearest surface point and the displacement vector that carries `q`
    /// onto it: returns (index, p, p - q).
    pub fn nearest_surface_point(&self, q: V3) -> (usize, V3, V3) {
        let (i, _) = self.nearest(q);
        let p = self.points[i];
        (i, p, [p[0] - q[0], p[1] - q[1], p[2] - q[2]])
    }

    fn search(&self, node: i32, q: V3, best_d2: &mut f64, best_idx: &mut u32) {
        if node < 0 {
            return;
        }
        let n = &self.nodes[node as usize];
        let p = self.points[n.point as usize];
        let d2 = dist2(q, p);
        if d2 < *best_d2 || (d2 == *best_d2 && n.point < *best_idx) {
            *best_d2 = d2;
            *best_idx = n.point;
        }
        let axis = n.axis as usize;
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < 0.0 {
            (n.left, n.right)
        } else {
            (n.right, n.left)
        };
        self.search(near, q, best_d2, best_idx);
        // The far side can still hold an equidistant lower-index point when
        // diff^2 == best, so prune only on strict inequality.
        if diff * diff <= *best_d2 {
            self.search(far, q, best_d2, best_idx);
        }
    }
}

/// O(n) scan with the same (distance², index) tie rule; the independent
/// oracle for the kd-tree.
pub fn nearest_brute(points: &[V3], q: V3) -> (usize, f64) {
    assert!(!points.is_empty(), "nearest_brute on empty slice");
    let mut best = (0usize, dist2(q, points[0]));
    for (i, &p) in points.iter().enumerate().skip(1) {
        let d2 = dist2(q, p);
        if d2 < best.1 {
            best = (i, d2);
        }
    }
    best
}
