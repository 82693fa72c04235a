//! Triangle meshes: swept (generalized-cylinder) construction, topology
//! checks, and area-weighted surface sampling.
//!
//! Every swept mesh shares the same connectivity for a given (n_theta,
//! n_stations): ring-major vertices plus two cap centres, quad strips split
//! into triangles, fan caps. Rendering only moves vertices, so watertightness
//! is decided once by construction.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::v3::{self, V3};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<V3>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<V3>, triangles: Vec<[u32; 3]>) -> Result<Self> {
        let vc = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v as usize >= vc {
                    return Err(Error::TriangleIndex {
                        triangle: t,
                        vertex: v as usize,
                        vertex_count: vc,
                    });
                }
            }
        }
        Ok(TriangleMesh {
            vertices,
            triangles,
        })
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let pa = self.vertices[a as usize];
        let pb = self.vertices[b as usize];
        let pc = self.vertices[c as usize];
        0.5 * v3::norm(v3::cross(v3::sub(pb, pa), v3::sub(pc, pa)))
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Signed volume; positive for outward-oriented closed meshes.
    pub fn signed_volume(&self) -> f64 {
        let mut vol = 0.0;
        for tri in &self.triangles {
            let a = self.vertices[tri[0] as usize];
            let b = self.vertices[tri[1] as usize];
            let c = self.vertices[tri[2] as usize];
            vol += v3::dot(a, v3::cross(b, c));
        }
        vol / 6.0
    }

    /// New mesh with displaced vertices and identical connectivity.
    pub fn displaced(&self, mut f: impl FnMut(V3) -> V3) -> TriangleMesh {
        TriangleMesh {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            triangles: self.triangles.clone(),
        }
    }

    pub fn same_connectivity(&self, other: &TriangleMesh) -> bool {
        self.triangles == other.triangles
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub boundary_edges: usize,
    pub non_manifold_edges: usize,
    /// Every undirected edge is shared by exactly two triangles.
    pub watertight: bool,
    /// Every undirected edge is traversed once in each direction.
    pub oriented: bool,
    pub euler_characteristic: i64,
}

/// Counts undirected edge usage and orientation balance. Iteration order of
/// the map never leaks into the report: only aggregate counts are taken.
pub fn mesh_topology_check(mesh: &TriangleMesh) -> TopologyReport {
    let mut edges: HashMap<(u32, u32), (u32, i32)> = HashMap::new();
    for tri in &mesh.triangles {
        for e in 0..3 {
            let a = tri[e];
            let b = tri[(e + 1) % 3];
            let key = (a.min(b), a.max(b));
            let entry = edges.entry(key).or_insert((0, 0));
            entry.0 += 1;
            entry.1 += if a < b { 1 } else { -1 };
        }
    }
    let mut boundary = 0usize;
    let mut non_manifold = 0usize;
    let mut oriented = true;
    for &(count, balance) in edges.values() {
        match count {
            1 => boundary += 1,
            2 => {}
            _ => non_manifold += 1,
        }
        if count != 2 || balance != 0 {
            oriented = false;
        }
    }
    let v = mesh.vertices.len() as i64;
    let e = edges.len() as i64;
    let f = mesh.triangles.len() as i64;
    TopologyReport {
        vertex_count: mesh.vertices.len(),
        edge_count: edges.len(),
        triangle_count: mesh.triangles.len(),
        boundary_edges: boundary,
        non_manifold_edges: non_manifold,
        watertight: boundary == 0 && non_manifold == 0,
        oriented,
        euler_characteristic: v - e + f,
    }
}

/// Closed surface swept along the x axis: one cross-section ring per station,
/// quad strips between consecutive rings, triangle-fan caps at both ends.
/// `profile(x, phi)` returns the (y, z) of the section at station `x` and
/// angle `phi`; sections must be centred on the axis for the cap fans to
/// close the surface.
pub fn swept_mesh(
    n_theta: usize,
    stations: &[f64],
    profile: &dyn Fn(f64, f64) -> (f64, f64),
) -> Result<TriangleMesh> {
    if n_theta < 3 {
        return Err(Error::InvalidArg(format!(
            "swept_mesh needs n_theta >= 3, got {n_theta}"
        )));
    }
    if stations.len() < 2 {
        return Err(Error::InvalidArg("swept_mesh needs >= 2 stations".into()));
    }
    if stations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArg(
            "swept_mesh stations must be strictly increasing".into(),
        ));
    }
    let rings = stations.len();
    let mut vertices = Vec::with_capacity(rings * n_theta + 2);
    for &x in stations {
        for j in 0..n_theta {
            let phi = std::f64::consts::TAU * j as f64 / n_theta as f64;
            let (y, z) = profile(x, phi);
            vertices.push([x, y, z]);
        }
    }
    let base_center = vertices.len() as u32;
    vertices.push([stations[0], 0.0, 0.0]);
    let tip_center = vertices.len() as u32;
    vertices.push([*stations.last().unwrap(), 0.0, 0.0]);

    let ring = |i: usize, j: usize| (i * n_theta + (j % n_theta)) as u32;
    let mut triangles = Vec::with_capacity(2 * n_theta * (rings - 1) + 2 * n_theta);
    for i in 0..rings - 1 {
        for j in 0..n_theta {
            let v00 = ring(i, j);
            let v01 = ring(i, j + 1);
            let v10 = ring(i + 1, j);
            let v11 = ring(i + 1, j + 1);
            // Outward orientation (positive signed volume).
            triangles.push([v00, v11, v10]);
            triangles.push([v00, v01, v11]);
        }
    }
    for j in 0..n_theta {
        triangles.push([base_center, ring(0, j + 1), ring(0, j)]);
        triangles.push([tip_center, ring(rings - 1, j), ring(rings - 1, j + 1)]);
    }
    TriangleMesh::new(vertices, triangles)
}

/// Template cylinder parameters. The defaults fit the ±1 cube with margin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateConfig {
    pub n_theta: usize,
    pub n_z: usize,
    pub radius: f64,
    pub height: f64,
}

impl Default for TemplateConfig {
    fn default() -> Self {
        TemplateConfig {
            n_theta: 48,
            n_z: 48,
            radius: 0.25,
            height: 1.8,
        }
    }
}

/// Canonical template: a cylinder along x, centred at the origin.
/// V = n_theta * (n_z + 1) + 2, F = 2 * n_theta * n_z + 2 * n_theta.
pub fn template_cylinder(cfg: &TemplateConfig) -> Result<TriangleMesh> {
    if cfg.n_z < 1 {
        return Err(Error::InvalidArg("template needs n_z >= 1".into()));
    }
    if cfg.radius <= 0.0 || cfg.height <= 0.0 {
        return Err(Error::InvalidArg(format!(
            "template needs positive radius/height, got {} / {}",
            cfg.radius, cfg.height
        )));
    }
    let stations: Vec<f64> = (0..=cfg.n_z)
        .map(|i| -0.5 * cfg.height + cfg.height * i as f64 / cfg.n_z as f64)
        .collect();
    let r = cfg.radius;
    swept_mesh(cfg.n_theta, &stations, &|_x, phi| {
        (r * phi.cos(), r * phi.sin())
    })
}

/// Area-weighted surface samples with their triangle normals.
pub fn sample_surface(
    mesh: &TriangleMesh,
    count: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<V3>, Vec<V3>)> {
    if mesh.triangles.is_empty() {
        return Err(Error::Degenerate("sample_surface: mesh has no triangles".into()));
    }
    let mut cum = Vec::with_capacity(mesh.triangles.len());
    let mut total = 0.0;
    for t in 0..mesh.triangles.len() {
        total += mesh.triangle_area(t);
        cum.push(total);
    }
    if total <= 0.0 {
        return Err(Error::Degenerate("sample_surface: zero surface area".into()));
    }
    let mut points = Vec::with_capacity(count);
    let mut normals = Vec::with_capacity(count);
    for _ in 0..count {
        let target = rng.gen_range(0.0..total);
        let t = cum.partition_point(|&c| c <= target).min(cum.len() - 1);
        let [ia, ib, ic] = mesh.triangles[t];
        let a = mesh.vertices[ia as usize];
        let b = mesh.vertices[ib as usize];
        let c = mesh.vertices[ic as usize];
        let mut u: f64 = rng.gen_range(0.0..1.0);
        let mut v: f64 = rng.gen_range(0.0..1.0);
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        let ab = v3::sub(b, a);
        let ac = v3::sub(c, a);
        points.push(v3::add(a, v3::add(v3::scale(ab, u), v3::scale(ac, v))));
        normals.push(v3::unit(v3::cross(ab, ac), 1e-300).unwrap_or([0.0, 0.0, 1.0]));
    }
    Ok((points, normals))
}
