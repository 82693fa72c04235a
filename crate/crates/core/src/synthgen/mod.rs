//! Synthetic corpus of flexible kitchen-utensil shapes: procedural objects,
//! analytic cantilever deformations, probe contacts, supervised queries,
//! split protocols, and the on-disk dataset format.

pub mod beam;
pub mod dataset;
pub mod split;
pub mod store;
pub mod utensil;

pub use dataset::{
    displacement, sample_queries, Dataset, DeformationSample, GenParams, Query,
    CONTACTS_PER_SAMPLE, TIP_DEFLECTION_CAP,
};
pub use split::{default_withhold, make_split, ExperimentSplit, Protocol, SampleId};
pub use store::{load_dataset, manifest_path, write_dataset, DatasetManifest};
pub use utensil::{NominalObject, ObjectSpec};
