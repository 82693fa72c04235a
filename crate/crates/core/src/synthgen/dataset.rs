//! Generation of the supervised deformation corpus: per-object nominal
//! clouds, cantilever-deformed variants, probe contacts, and query points
//! labelled with their exhaustively-scanned nearest surface point.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};
use serde::{Deserialize, Serialize};

use super::beam;
use super::utensil::{NominalObject, ObjectSpec};
use crate::geometry::{nearest_brute, sample_surface, PointCloud, V3};
use crate::util::derive_rng;
use crate::{Error, Result};

/// Hard ceiling on the tip deflection of any sampled deformation, in
/// normalised units. Forces that would exceed it are scaled down so deformed
/// surfaces keep clearance inside [-1, 1]³ (nominal extent 0.75 + 0.22 < 1).
pub const TIP_DEFLECTION_CAP: f64 = 0.22;

/// Probe contacts reported for each deformed sample.
pub const CONTACTS_PER_SAMPLE: usize = 3;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub objects: usize,
    /// Deformed configurations per object (the undeformed one is extra).
    pub deforms: usize,
    pub seed: u64,
    /// Points in each surface cloud.
    pub surface_samples: usize,
    /// Supervised queries per sample.
    pub queries: usize,
    /// Fraction of queries placed near the surface (rest uniform in the cube).
    pub on_surface_fraction: f64,
    /// Std-dev of the along-normal offset for near-surface queries.
    pub noise_sigma: f64,
    pub mesh_n_theta: usize,
    pub mesh_n_z: usize,
    /// Shrink factor applied after unit-cube normalisation.
    pub margin: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            objects: 4,
            deforms: 12,
            seed: 7,
            surface_samples: 2048,
            queries: 2048,
            on_surface_fraction: 0.5,
            noise_sigma: 0.02,
            mesh_n_theta: 48,
            mesh_n_z: 64,
            margin: 0.75,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArg(what.to_string()));
        if self.objects == 0 || self.deforms == 0 {
            return bad("need at least one object and one deformation");
        }
        if self.surface_samples < 16 || self.queries == 0 {
            return bad("surface_samples must be >= 16 and queries >= 1");
        }
        if !(0.0..=1.0).contains(&self.on_surface_fraction) {
            return bad("on_surface_fraction must lie in [0, 1]");
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return bad("noise_sigma must be finite and non-negative");
        }
        if self.mesh_n_theta < 8 || self.mesh_n_z < 4 {
            return bad("mesh resolution too low (need n_theta >= 8, n_z >= 4)");
        }
        if !(self.margin > 0.0 && self.margin <= 1.0) {
            return bad("margin must lie in (0, 1]");
        }
        Ok(())
    }
}

/// One supervised query: a probe position and the nearest point of the
/// deformed cloud, found by exhaustive scan at generation time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Query {
    pub x: V3,
    pub target: V3,
}

/// One configuration of one object. `deform_id` 0 is the undeformed state.
#[derive(Clone, Debug)]
pub struct DeformationSample {
    pub object_id: usize,
    pub deform_id: usize,
    /// Applied force in the normalised frame; zero for the undeformed state.
    pub force: V3,
    /// Arc distance of the contact ring from the clamped base.
    pub arc: f64,
    /// Probe contacts, exactly on the deformed surface.
    pub contacts: Vec<V3>,
    /// Observed surface cloud of this configuration.
    pub cloud: PointCloud,
    pub queries: Vec<Query>,
}

impl DeformationSample {
    pub fn is_nominal(&self) -> bool {
        self.deform_id == 0
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub params: GenParams,
    pub objects: Vec<NominalObject>,
    /// Samples ordered object-major: index = object_id * (deforms + 1) + deform_id.
    pub samples: Vec<DeformationSample>,
}

/// Transverse displacement of point `p` for force `u` applied at arc `s_c`.
/// Only the component of `u` orthogonal to the beam axis (+x) deflects the
/// material; the displacement direction is constant along the beam.
pub fn displacement(obj: &NominalObject, s_c: f64, u: V3, p: V3) -> V3 {
    let perp = [0.0, u[1], u[2]];
    let mag = crate::geometry::norm(perp);
    if mag == 0.0 {
        return [0.0, 0.0, 0.0];
    }
    let w = beam::deflection(obj.arc_of_x(p[0]), s_c, mag, obj.spec.stiffness);
    [0.0, w * perp[1] / mag, w * perp[2] / mag]
}

fn displaced_points(obj: &NominalObject, s_c: f64, u: V3, points: &[V3]) -> Vec<V3> {
    points
        .iter()
        .map(|&p| crate::geometry::add(p, displacement(obj, s_c, u, p)))
        .collect()
}

/// Sample the applied force for one deformation. Returns the snapped station
/// index, the arc of that station, and the force vector.
fn sample_force(obj: &NominalObject, rng: &mut impl Rng) -> (usize, f64, V3) {
    let s_rel = rng.gen_range(0.55..0.95);
    let station = obj.snap_station(s_rel * obj.length);
    let s_c = obj.stations_x[station] - obj.base_x;

    // Uniform sphere direction with the axial component damped, re-drawn
    // until the transverse part dominates.
    let dir = loop {
        let v: [f64; 3] = UnitSphere.sample(rng);
        let damped = [0.3 * v[0], v[1], v[2]];
        let unit = crate::geometry::unit(damped, 1e-12).expect("damped direction is non-zero");
        if (unit[1] * unit[1] + unit[2] * unit[2]).sqrt() >= 0.5 {
            break unit;
        }
    };
    let mag = rng.gen_range(0.05f64.ln()..=0.0).exp();
    let mut u = crate::geometry::scale(dir, mag);

    let perp_mag = (u[1] * u[1] + u[2] * u[2]).sqrt();
    let tip = beam::tip_deflection(s_c, perp_mag, obj.spec.stiffness);
    if tip > TIP_DEFLECTION_CAP {
        u = crate::geometry::scale(u, TIP_DEFLECTION_CAP / tip);
    }
    (station, s_c, u)
}

/// Flip the y sign of the smallest-|u_y| forces until each side of the
/// direction split holds at least min(3, max(1, m/4)) members.
fn rebalance_directions(forces: &mut [(usize, f64, V3)]) {
    let m = forces.len();
    if m < 2 {
        return;
    }
    let need = (m / 4).clamp(1, 3).min(m / 2);
    for positive_side in [true, false] {
        loop {
            let have = forces
                .iter()
                .filter(|f| (f.2[1] > 0.0) == positive_side && f.2[1] != 0.0)
                .count();
            if have >= need {
                break;
            }
            // Candidates sit on the other side; flip the weakest vote.
            let candidate = forces
                .iter()
                .enumerate()
                .filter(|(_, f)| (f.2[1] > 0.0) != positive_side && f.2[1] != 0.0)
                .min_by(|(i, a), (j, b)| {
                    a.2[1]
                        .abs()
                        .partial_cmp(&b.2[1].abs())
                        .unwrap()
                        .then(i.cmp(j))
                })
                .map(|(i, _)| i);
            match candidate {
                Some(i) => forces[i].2[1] = -forces[i].2[1],
                None => break,
            }
        }
    }
}

/// Near-surface and volume queries, each labelled with the nearest cloud
/// point found by exhaustive scan.
pub fn sample_queries(
    cloud: &[V3],
    normals: &[V3],
    count: usize,
    on_fraction: f64,
    sigma: f64,
    rng: &mut impl Rng,
) -> Vec<Query> {
    assert_eq!(cloud.len(), normals.len(), "one normal per cloud point");
    let n_on = (count as f64 * on_fraction).round() as usize;
    let mut queries = Vec::with_capacity(count);
    for i in 0..count {
        let x = if i < n_on {
            let k = rng.gen_range(0..cloud.len());
            let eps: f64 = StandardNormal.sample(rng);
            crate::geometry::add(cloud[k], crate::geometry::scale(normals[k], sigma * eps))
        } else {
            [
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            ]
        };
        let (nn, _) = nearest_brute(cloud, x);
        queries.push(Query {
            x,
            target: cloud[nn],
        });
    }
    queries
}

impl Dataset {
    pub fn n_objects(&self) -> usize {
        self.params.objects
    }

    /// Deformed configurations per object, excluding the undeformed state.
    pub fn n_deforms(&self) -> usize {
        self.params.deforms
    }

    pub fn sample(&self, object_id: usize, deform_id: usize) -> &DeformationSample {
        assert!(object_id < self.n_objects() && deform_id <= self.n_deforms());
        &self.samples[object_id * (self.n_deforms() + 1) + deform_id]
    }

    /// All (object_id, deform_id) pairs in storage order.
    pub fn ids(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.n_deforms();
        (0..self.n_objects()).flat_map(move |i| (0..=m).map(move |j| (i, j)))
    }

    pub fn generate(params: GenParams) -> Result<Dataset> {
        params.validate()?;
        let seed = params.seed;
        let mut objects = Vec::with_capacity(params.objects);
        let mut samples = Vec::new();

        for i in 0..params.objects {
            let mut obj_rng = derive_rng(seed, "object", i as u64, 0);
            let spec = ObjectSpec::sample(&mut obj_rng);
            let obj =
                NominalObject::build(spec, params.mesh_n_theta, params.mesh_n_z, params.margin)?;

            let mut cloud_rng = derive_rng(seed, "cloud", i as u64, 0);
            let (nominal_points, normals) =
                sample_surface(&obj.mesh, params.surface_samples, &mut cloud_rng)?;

            let mut forces: Vec<(usize, f64, V3)> = (1..=params.deforms)
                .map(|j| {
                    let mut rng = derive_rng(seed, "force", i as u64, j as u64);
                    sample_force(&obj, &mut rng)
                })
                .collect();
            rebalance_directions(&mut forces);

            for j in 0..=params.deforms {
                let (points, arc, force, contacts) = if j == 0 {
                    (
                        nominal_points.clone(),
                        obj.length,
                        [0.0, 0.0, 0.0],
                        vec![obj.canonical_contact],
                    )
                } else {
                    let (station, s_c, u) = forces[j - 1];
                    let mut contact_rng = derive_rng(seed, "contact", i as u64, j as u64);
                    let mut slots =
                        rand::seq::index::sample(&mut contact_rng, obj.ring_size(), CONTACTS_PER_SAMPLE)
                            .into_vec();
                    slots.sort_unstable();
                    let contacts = slots
                        .iter()
                        .map(|&slot| {
                            let v = obj.mesh.vertices[obj.ring_vertex(station, slot)];
                            crate::geometry::add(v, displacement(&obj, s_c, u, v))
                        })
                        .collect();
                    (
                        displaced_points(&obj, s_c, u, &nominal_points),
                        s_c,
                        u,
                        contacts,
                    )
                };

                let mut query_rng = derive_rng(seed, "query", i as u64, j as u64);
                let queries = sample_queries(
                    &points,
                    &normals,
                    params.queries,
                    params.on_surface_fraction,
                    params.noise_sigma,
                    &mut query_rng,
                );
                samples.push(DeformationSample {
                    object_id: i,
                    deform_id: j,
                    force,
                    arc,
                    contacts,
                    cloud: PointCloud::new(points)?,
                    queries,
                });
            }
            objects.push(obj);
        }
        Ok(Dataset {
            params,
            objects,
            samples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_triangle_dist;

    fn tiny_params() -> GenParams {
        GenParams {
            objects: 2,
            deforms: 4,
            seed: 11,
            surface_samples: 128,
            queries: 32,
            mesh_n_theta: 12,
            mesh_n_z: 16,
            ..GenParams::default()
        }
    }

    #[test]
    fn zero_force_reproduces_the_nominal_cloud_bitwise() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        let obj = &ds.objects[0];
        let nominal = ds.sample(0, 0);
        let moved = displaced_points(obj, 0.9 * obj.length, [0.0, 0.0, 0.0], nominal.cloud.points());
        assert_eq!(moved, nominal.cloud.points());
    }

    #[test]
    fn displacement_is_linear_in_the_force() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        let obj = &ds.objects[1];
        let u = [0.02, 0.3, -0.14];
        let s_c = 0.8 * obj.length;
        for &p in ds.sample(1, 0).cloud.points().iter().take(64) {
            let d1 = displacement(obj, s_c, u, p);
            let d2 = displacement(obj, s_c, crate::geometry::scale(u, 2.0), p);
            for k in 0..3 {
                assert!((d2[k] - 2.0 * d1[k]).abs() <= 1e-12 * d2[k].abs().max(1e-12));
            }
        }
    }

    #[test]
    fn tip_deflection_matches_the_closed_form() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        let obj = &ds.objects[0];
        let u = [0.0, 0.25, 0.0];
        let s_c = obj.length; // load at the very tip
        let tip = obj.canonical_contact;
        let d = displacement(obj, s_c, u, tip);
        let expected = beam::tip_deflection(s_c, 0.25, obj.spec.stiffness);
        assert!((d[1] - expected).abs() < 1e-12);
        assert_eq!(d[0], 0.0);
        assert_eq!(d[2], 0.0);
    }

    #[test]
    fn contacts_lie_on_the_deformed_surface() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        for (i, j) in ds.ids() {
            if j == 0 {
                continue;
            }
            let sample = ds.sample(i, j);
            let obj = &ds.objects[i];
            let (station, s_c, u) = {
                // Recover the applied load from the stored sample.
                let s_c = sample.arc;
                (obj.snap_station(s_c), s_c, sample.force)
            };
            assert_eq!(obj.stations_x[station] - obj.base_x, s_c);
            let deformed: Vec<V3> = obj
                .mesh
                .vertices
                .iter()
                .map(|&v| crate::geometry::add(v, displacement(obj, s_c, u, v)))
                .collect();
            for &c in &sample.contacts {
                let best = obj
                    .mesh
                    .triangles
                    .iter()
                    .map(|t| {
                        point_triangle_dist(
                            c,
                            deformed[t[0] as usize],
                            deformed[t[1] as usize],
                            deformed[t[2] as usize],
                        )
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-6, "contact off surface by {best}");
            }
        }
    }

    #[test]
    fn nominal_contact_is_on_the_nominal_surface() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        for (i, obj) in ds.objects.iter().enumerate() {
            let c = ds.sample(i, 0).contacts[0];
            assert_eq!(c, obj.canonical_contact);
            assert!(obj.mesh.vertices.contains(&c));
        }
    }

    #[test]
    fn every_target_is_the_exhaustive_nearest_cloud_point() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        let sample = ds.sample(1, 2);
        let pts = sample.cloud.points();
        for q in &sample.queries {
            let (idx, _) = nearest_brute(pts, q.x);
            assert_eq!(q.target, pts[idx]);
        }
    }

    #[test]
    fn full_on_surface_fraction_with_zero_noise_pins_targets() {
        let params = GenParams {
            on_surface_fraction: 1.0,
            noise_sigma: 0.0,
            ..tiny_params()
        };
        let ds = Dataset::generate(params).unwrap();
        for q in &ds.sample(0, 1).queries {
            assert_eq!(q.x, q.target, "queries on the cloud are their own target");
        }
    }

    #[test]
    fn forces_respect_magnitude_and_deflection_bounds() {
        let ds = Dataset::generate(GenParams {
            objects: 3,
            deforms: 8,
            ..tiny_params()
        })
        .unwrap();
        for (i, j) in ds.ids() {
            if j == 0 {
                continue;
            }
            let s = ds.sample(i, j);
            let obj = &ds.objects[i];
            let mag = crate::geometry::norm(s.force);
            assert!(mag <= 1.0 + 1e-12);
            assert!(mag > 0.0);
            let perp = (s.force[1] * s.force[1] + s.force[2] * s.force[2]).sqrt();
            assert!(perp / mag >= 0.5, "transverse part must dominate");
            let tip = beam::tip_deflection(s.arc, perp, obj.spec.stiffness);
            assert!(tip <= TIP_DEFLECTION_CAP + 1e-12);
            assert!(s.arc >= 0.5 * obj.length && s.arc <= obj.length);
        }
    }

    #[test]
    fn direction_split_sides_are_both_populated() {
        let ds = Dataset::generate(GenParams {
            objects: 2,
            deforms: 12,
            ..tiny_params()
        })
        .unwrap();
        for i in 0..2 {
            let pos = (1..=12)
                .filter(|&j| ds.sample(i, j).force[1] > 0.0)
                .count();
            assert!(pos >= 3 && 12 - pos >= 3, "object {i}: {pos} positive of 12");
        }
    }

    #[test]
    fn deformed_cloud_stays_inside_the_cube() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        for s in &ds.samples {
            for p in s.cloud.points() {
                for c in p {
                    assert!(c.abs() <= 1.0, "cloud point escapes the cube: {p:?}");
                }
            }
            for q in &s.queries {
                for c in q.target {
                    assert!(c.abs() <= 1.0);
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = Dataset::generate(tiny_params()).unwrap();
        let b = Dataset::generate(tiny_params()).unwrap();
        for (sa, sb) in a.samples.iter().zip(&b.samples) {
            assert_eq!(sa.cloud.points(), sb.cloud.points());
            assert_eq!(sa.force, sb.force);
            assert_eq!(sa.contacts, sb.contacts);
            assert_eq!(sa.queries, sb.queries);
        }
    }

    #[test]
    fn sample_count_and_order_follow_the_layout() {
        let ds = Dataset::generate(tiny_params()).unwrap();
        assert_eq!(ds.samples.len(), 2 * 5);
        for (k, (i, j)) in ds.ids().enumerate() {
            assert_eq!(ds.samples[k].object_id, i);
            assert_eq!(ds.samples[k].deform_id, j);
        }
    }
}
