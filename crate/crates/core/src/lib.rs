//! Laboratory for hypernetwork-conditioned neural deformation fields.
//!
//! The crate covers the full loop: dense-tensor numerics with explicit-tape
//! backpropagation, point-cloud and mesh geometry, a synthetic cantilever
//! dataset generator, the conditioned deformation model itself, its losses,
//! and a training/evaluation harness. Everything is seeded and deterministic:
//! identical seeds produce byte-identical checkpoints and metric tables.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod losses;
pub mod model;
pub mod numerics;
pub mod synthgen;
pub mod util;

pub use error::{Error, Result};
