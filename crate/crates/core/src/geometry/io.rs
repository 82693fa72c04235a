//! On-disk formats: ASCII OBJ and binary little-endian PLY for meshes, raw
//! little-endian f32 xyz triples with a JSON sidecar for point clouds.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::geometry::cloud::PointCloud;
use crate::geometry::mesh::TriangleMesh;
use crate::util::{atomic_write, atomic_write_json};
use crate::{Error, Result};

/// Sidecar for a `.pc` cloud file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudDescriptor {
    pub count: usize,
    /// Coordinate frame, e.g. "unit-cube".
    pub frame: String,
    /// Provenance of the points, e.g. "surface-samples" or "render".
    pub source: String,
}

pub fn descriptor_path(cloud_path: &Path) -> PathBuf {
    let mut os = cloud_path.as_os_str().to_os_string();
    os.push(".json");
    PathBuf::from(os)
}

/// Writes `path` (raw LE f32 xyz triples) and `path.json` (descriptor).
pub fn write_cloud(
    path: &Path,
    cloud: &PointCloud,
    frame: &str,
    source: &str,
) -> Result<()> {
    let mut bytes = Vec::with_capacity(cloud.len() * 12);
    for p in cloud.points() {
        for k in 0..3 {
            bytes.extend_from_slice(&(p[k] as f32).to_le_bytes());
        }
    }
    atomic_write(path, &bytes)?;
    atomic_write_json(
        &descriptor_path(path),
        &CloudDescriptor {
            count: cloud.len(),
            frame: frame.to_string(),
            source: source.to_string(),
        },
    )
}

pub fn read_cloud(path: &Path) -> Result<(PointCloud, CloudDescriptor)> {
    let bytes = std::fs::read(path)?;
    if bytes.len() % 12 != 0 {
        return Err(Error::Dataset(format!(
            "{}: length {} is not a multiple of 12",
            path.display(),
            bytes.len()
        )));
    }
    let mut points = Vec::with_capacity(bytes.len() / 12);
    for chunk in bytes.chunks_exact(12) {
        let mut p = [0.0f64; 3];
        for k in 0..3 {
            let b = &chunk[k * 4..k * 4 + 4];
            p[k] = f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64;
        }
        points.push(p);
    }
    let desc: CloudDescriptor =
        serde_json::from_slice(&std::fs::read(descriptor_path(path))?)?;
    if desc.count != points.len() {
        return Err(Error::Dataset(format!(
            "{}: sidecar says {} points, file holds {}",
            path.display(),
            desc.count,
            points.len()
        )));
    }
    Ok((PointCloud::new(points)?, desc))
}

/// ASCII OBJ with 1-indexed faces.
pub fn write_obj(path: &Path, mesh: &TriangleMesh) -> Result<()> {
    let mut s = String::with_capacity(mesh.vertices.len() * 32);
    for v in &mesh.vertices {
        writeln!(s, "v {} {} {}", v[0], v[1], v[2]).expect("string write");
    }
    for t in &mesh.triangles {
        writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).expect("string write");
    }
    atomic_write(path, s.as_bytes())
}

/// Minimal OBJ reader for the formats this crate writes (v/f lines only).
pub fn read_obj(path: &Path) -> Result<TriangleMesh> {
    let text = std::fs::read_to_string(path)?;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let mut p = [0.0f64; 3];
                for coord in &mut p {
                    *coord = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::Dataset(format!("obj line {}: bad vertex", ln + 1)))?;
                }
                vertices.push(p);
            }
            Some("f") => {
                let mut t = [0u32; 3];
                for slot in &mut t {
                    let tok = it
                        .next()
                        .ok_or_else(|| Error::Dataset(format!("obj line {}: bad face", ln + 1)))?;
                    let idx: u32 = tok
                        .split('/')
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::Dataset(format!("obj line {}: bad face", ln + 1)))?;
                    *slot = idx - 1;
                }
                triangles.push(t);
            }
            _ => {}
        }
    }
    TriangleMesh::new(vertices, triangles)
}

/// Binary little-endian PLY: float32 vertices, uchar-counted uint32 faces.
pub fn write_ply(path: &Path, mesh: &TriangleMesh) -> Result<()> {
    let mut bytes = Vec::with_capacity(64 + mesh.vertices.len() * 12 + mesh.triangles.len() * 13);
    let header = format!(
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\nproperty float x\nproperty float y\nproperty float z\nelement face {}\nproperty list uchar uint vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.triangles.len()
    );
    bytes.extend_from_slice(header.as_bytes());
    for v in &mesh.vertices {
        for k in 0..3 {
            bytes.extend_from_slice(&(v[k] as f32).to_le_bytes());
        }
    }
    for t in &mesh.triangles {
        bytes.push(3u8);
        for &i in t {
            bytes.extend_from_slice(&i.to_le_bytes());
        }
    }
    atomic_write(path, &bytes)
}
