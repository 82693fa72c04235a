//! Point-cloud and triangle-mesh geometry: nearest-neighbour queries with a
//! deterministic tie rule, Chamfer distance, unit-cube normalisation, swept
//! template meshes, topology checks, and on-disk formats.

pub mod chamfer;
pub mod cloud;
pub mod io;
pub mod kdtree;
pub mod mesh;
pub mod v3;

pub use chamfer::{chamfer_brute, chamfer_directed, chamfer_distance};
pub use io::{read_cloud, read_obj, write_cloud, write_obj, write_ply, CloudDescriptor};
pub use cloud::{normalize_unit_cube, PointCloud, UnitCubeTransform};
pub use kdtree::{nearest_brute, KdTree};
pub use mesh::{
    mesh_topology_check, sample_surface, swept_mesh, template_cylinder, TemplateConfig,
    TopologyReport, TriangleMesh,
};
pub use v3::{add, cross, dist2, dot, norm, norm2, point_triangle_dist, scale, sub, unit, V3};
