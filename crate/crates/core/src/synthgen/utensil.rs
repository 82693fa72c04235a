//! Procedural spatula-like objects: a cylindrical handle that morphs into a
//! flat rounded-rectangle paddle, swept along +x as a single closed surface.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    mesh_topology_check, normalize_unit_cube, swept_mesh, PointCloud, TriangleMesh,
    UnitCubeTransform, V3,
};
use crate::Result;

/// Shape and material parameters of one object, in object-frame units.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub handle_length: f64,
    pub handle_radius: f64,
    pub paddle_length: f64,
    /// Full paddle width (y extent).
    pub paddle_width: f64,
    /// Full paddle thickness (z extent).
    pub paddle_thickness: f64,
    /// Flexural stiffness EI of the cantilever model.
    pub stiffness: f64,
}

impl ObjectSpec {
    /// Draw a spec from the generator's parameter ranges.
    pub fn sample(rng: &mut impl Rng) -> ObjectSpec {
        ObjectSpec {
            handle_length: rng.gen_range(0.9..1.3),
            handle_radius: rng.gen_range(0.035..0.06),
            paddle_length: rng.gen_range(0.45..0.8),
            paddle_width: rng.gen_range(0.22..0.38),
            paddle_thickness: rng.gen_range(0.025..0.05),
            stiffness: rng.gen_range(1.2..2.5),
        }
    }

    pub fn total_length(&self) -> f64 {
        self.handle_length + self.paddle_length
    }
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Cross-section at arc `s` from the base: a superellipse |y/a|^p + |z/b|^p = 1
/// whose semi-axes and exponent blend from the handle circle (a = b = radius,
/// p = 2) to the paddle section (a = width/2, b = thickness/2, p = 4) over a
/// short window around the joint. Every section is a closed star-shaped curve
/// around the axis, so the swept surface stays watertight for any parameters.
pub fn cross_section(spec: &ObjectSpec, s: f64, angle: f64) -> (f64, f64) {
    let blend = 0.12 * spec.handle_length;
    let t = smoothstep((s - (spec.handle_length - 0.5 * blend)) / blend);
    let a = spec.handle_radius + t * (0.5 * spec.paddle_width - spec.handle_radius);
    let b = spec.handle_radius + t * (0.5 * spec.paddle_thickness - spec.handle_radius);
    let p = 2.0 + 2.0 * t;
    let (sin, cos) = angle.sin_cos();
    // Radius of the superellipse along direction (cos, sin).
    let denom = (cos.abs() / a).powf(p) + (sin.abs() / b).powf(p);
    let r = denom.powf(-1.0 / p);
    (r * cos, r * sin)
}

/// Closed object-frame mesh: `n_z + 1` rings of `n_theta` vertices plus two
/// cap centres, stations uniform on [0, total_length].
pub fn utensil_mesh(spec: &ObjectSpec, n_theta: usize, n_z: usize) -> Result<TriangleMesh> {
    let length = spec.total_length();
    let stations: Vec<f64> = (0..=n_z)
        .map(|i| length * i as f64 / n_z as f64)
        .collect();
    swept_mesh(n_theta, &stations, &|s, angle| cross_section(spec, s, angle))
}

/// One object in its normalised frame, ready for deformation and sampling.
#[derive(Clone, Debug)]
pub struct NominalObject {
    pub spec: ObjectSpec,
    /// Object frame -> normalised frame.
    pub transform: UnitCubeTransform,
    /// Surface mesh in the normalised frame.
    pub mesh: TriangleMesh,
    /// x coordinate of each ring station in the normalised frame, ascending.
    pub stations_x: Vec<f64>,
    /// x of the clamped base (arc 0) in the normalised frame.
    pub base_x: f64,
    /// Beam length in the normalised frame.
    pub length: f64,
    /// Fixed probe contact on the undeformed surface: the tip-cap centre
    /// vertex, used when a condition for the rest shape is required.
    pub canonical_contact: V3,
    ring_vertices: usize,
}

impl NominalObject {
    /// Build the normalised object. The unit-cube transform comes from the
    /// object mesh's own bounds, then shrinks by `margin` so deformed
    /// configurations keep clearance inside [-1, 1]³.
    pub fn build(spec: ObjectSpec, n_theta: usize, n_z: usize, margin: f64) -> Result<NominalObject> {
        let object_mesh = utensil_mesh(&spec, n_theta, n_z)?;
        let vertex_cloud = PointCloud::new(object_mesh.vertices.clone())?;
        let (_, base) = normalize_unit_cube(&vertex_cloud)?;
        let transform = base.shrunk(margin);
        let mesh = TriangleMesh::new(
            object_mesh
                .vertices
                .iter()
                .map(|&v| transform.apply(v))
                .collect(),
            object_mesh.triangles.clone(),
        )?;
        let report = mesh_topology_check(&mesh);
        assert!(
            report.watertight && report.oriented && report.euler_characteristic == 2,
            "generated surface must be a closed oriented sphere-like mesh"
        );

        let length = spec.total_length() * transform.scale;
        let base_x = transform.apply([0.0, 0.0, 0.0])[0];
        let stations_x = (0..=n_z)
            .map(|i| base_x + length * i as f64 / n_z as f64)
            .collect();
        // Tip cap centre is the last vertex emitted by the sweep.
        let canonical_contact = *mesh.vertices.last().expect("mesh has vertices");
        Ok(NominalObject {
            spec,
            transform,
            mesh,
            stations_x,
            base_x,
            length,
            canonical_contact,
            ring_vertices: n_theta,
        })
    }

    /// Arc distance from the base for a normalised-frame x coordinate.
    pub fn arc_of_x(&self, x: f64) -> f64 {
        x - self.base_x
    }

    /// Index of the ring station nearest to arc `s_c` (ties break low).
    pub fn snap_station(&self, s_c: f64) -> usize {
        let target = self.base_x + s_c;
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &x) in self.stations_x.iter().enumerate() {
            let d = (x - target).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Vertex indices of ring `station` (station 0 is the base ring).
    pub fn ring_vertex(&self, station: usize, slot: usize) -> usize {
        assert!(station < self.stations_x.len(), "station out of range");
        assert!(slot < self.ring_vertices, "ring slot out of range");
        station * self.ring_vertices + slot
    }

    pub fn ring_size(&self) -> usize {
        self.ring_vertices
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::mesh_topology_check;

    fn spec() -> ObjectSpec {
        ObjectSpec {
            handle_length: 1.1,
            handle_radius: 0.05,
            paddle_length: 0.6,
            paddle_width: 0.3,
            paddle_thickness: 0.03,
            stiffness: 1.8,
        }
    }

    #[test]
    fn handle_section_is_a_circle() {
        let s = spec();
        for k in 0..8 {
            let angle = k as f64 * std::f64::consts::TAU / 8.0;
            let (y, z) = cross_section(&s, 0.3, angle);
            let r = (y * y + z * z).sqrt();
            assert!((r - s.handle_radius).abs() < 1e-12);
        }
    }

    #[test]
    fn paddle_section_hits_the_axis_extents() {
        let s = spec();
        let at = s.handle_length + 0.5 * s.paddle_length;
        let (y, _) = cross_section(&s, at, 0.0);
        assert!((y - 0.5 * s.paddle_width).abs() < 1e-12);
        let (_, z) = cross_section(&s, at, std::f64::consts::FRAC_PI_2);
        assert!((z - 0.5 * s.paddle_thickness).abs() < 1e-12);
    }

    #[test]
    fn mesh_is_watertight_and_fits_the_margin() {
        let obj = NominalObject::build(spec(), 24, 32, 0.75).unwrap();
        let report = mesh_topology_check(&obj.mesh);
        assert!(report.watertight && report.oriented);
        assert_eq!(report.euler_characteristic, 2);
        let max = obj
            .mesh
            .vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |m, &c| m.max(c.abs()));
        assert!(max <= 0.75 + 1e-9, "nominal surface exceeds margin: {max}");
        assert!(max > 0.74, "normalisation should reach the shrunk bound");
    }

    #[test]
    fn canonical_contact_is_the_tip_centre() {
        let obj = NominalObject::build(spec(), 24, 32, 0.75).unwrap();
        let tip_x = obj.mesh.vertices.iter().map(|v| v[0]).fold(f64::MIN, f64::max);
        assert!((obj.canonical_contact[0] - tip_x).abs() < 1e-12);
        assert!(obj.canonical_contact[1].abs() < 1e-12);
        assert!(obj.canonical_contact[2].abs() < 1e-12);
        assert!((obj.arc_of_x(obj.canonical_contact[0]) - obj.length).abs() < 1e-12);
    }

    #[test]
    fn station_snapping_prefers_the_nearest_ring() {
        let mut obj = NominalObject::build(spec(), 12, 10, 0.75).unwrap();
        assert_eq!(obj.snap_station(0.0), 0);
        assert_eq!(obj.snap_station(obj.length), 10);
        // Controlled coordinates make the distances exact.
        obj.base_x = 0.0;
        obj.stations_x = vec![0.0, 1.0, 2.0, 3.0];
        assert_eq!(obj.snap_station(2.25), 2);
        // Exact midpoint ties break toward the lower station.
        assert_eq!(obj.snap_station(1.5), 1);
    }
}
