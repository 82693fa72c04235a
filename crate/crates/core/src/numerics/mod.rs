//! Dense-tensor numerics: fixed-topology MLPs with explicit-tape
//! backpropagation, Adam with parameter groups, finite-difference gradient
//! checking, and a binary checkpoint format.
//!
//! Networks here are small and fixed, so there is no runtime graph capture:
//! every forward returns a tape holding exactly the intermediates its
//! backward needs. All kernels are generic over [`Scalar`] so the same code
//! runs in 32-bit for training throughput and in 64-bit for gradient checks.

pub mod adam;
pub mod checkpoint;
pub mod gradcheck;
pub mod mlp;
pub mod tensor;

pub use adam::{adam_step, AdamState, ParamGroup};
pub use checkpoint::{read_checkpoint, write_checkpoint, RawTensor};
pub use gradcheck::{grad_check, GradCheckReport, TensorCheck};
pub use mlp::{Activation, Layer, Mlp, MlpGrads, MlpTape};
pub use tensor::{Scalar, Tensor};
