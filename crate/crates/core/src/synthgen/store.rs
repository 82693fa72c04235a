//! On-disk layout of a generated corpus.
//!
//! `manifest.json` holds the generation parameters, per-object shape specs,
//! normalisation transforms, and the default split protocols. Each sample
//! `<obj>_<def>` contributes three entries: `.pc` (+ JSON sidecar) with the
//! surface cloud, `.qry` with raw little-endian f32 (x, target) pairs, and
//! `.json` with force, arc, and contacts. The manifest is written last so a
//! directory with a manifest is a complete dataset.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, DeformationSample, GenParams, Query};
use super::split::{default_withhold, make_split, ExperimentSplit, Protocol};
use super::utensil::{NominalObject, ObjectSpec};
use crate::geometry::{read_cloud, write_cloud, UnitCubeTransform, V3};
use crate::util::{atomic_write, atomic_write_json};
use crate::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.json";
pub const DATASET_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub params: GenParams,
    pub specs: Vec<ObjectSpec>,
    pub transforms: Vec<UnitCubeTransform>,
    pub canonical_contacts: Vec<V3>,
    /// Default splits precomputed at generation time, keyed by protocol name.
    pub splits: BTreeMap<String, ExperimentSplit>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SampleMeta {
    object_id: usize,
    deform_id: usize,
    force: V3,
    arc: f64,
    contacts: Vec<V3>,
    cloud_points: usize,
    query_count: usize,
}

fn sample_stem(object_id: usize, deform_id: usize) -> String {
    format!("{object_id:02}_{deform_id:02}")
}

pub fn manifest_path(dir: &Path) -> PathBuf {
    dir.join(MANIFEST_NAME)
}

/// The split protocols materialised into every manifest.
pub fn default_protocols(deforms: usize) -> Vec<Protocol> {
    let withhold = default_withhold(deforms);
    vec![
        Protocol::Known,
        Protocol::Random { withhold },
        Protocol::Lowest { withhold },
        Protocol::Highest { withhold },
        Protocol::Direction,
    ]
}

fn encode_queries(queries: &[Query]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(queries.len() * 24);
    for q in queries {
        for v in [q.x, q.target] {
            for k in 0..3 {
                bytes.extend_from_slice(&(v[k] as f32).to_le_bytes());
            }
        }
    }
    bytes
}

fn decode_queries(bytes: &[u8], path: &Path) -> Result<Vec<Query>> {
    if bytes.len() % 24 != 0 {
        return Err(Error::Dataset(format!(
            "{}: length {} is not a multiple of 24",
            path.display(),
            bytes.len()
        )));
    }
    let read3 = |b: &[u8]| -> V3 {
        let mut v = [0.0f64; 3];
        for k in 0..3 {
            v[k] = f32::from_le_bytes(b[k * 4..k * 4 + 4].try_into().unwrap()) as f64;
        }
        v
    };
    Ok(bytes
        .chunks_exact(24)
        .map(|c| Query {
            x: read3(&c[..12]),
            target: read3(&c[12..]),
        })
        .collect())
}

pub fn write_dataset(ds: &Dataset, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    if manifest_path(dir).exists() {
        return Err(Error::InvalidArg(format!(
            "{} already holds a dataset",
            dir.display()
        )));
    }
    for s in &ds.samples {
        let stem = sample_stem(s.object_id, s.deform_id);
        write_cloud(
            &dir.join(format!("{stem}.pc")),
            &s.cloud,
            "unit-cube",
            "surface-samples",
        )?;
        atomic_write(&dir.join(format!("{stem}.qry")), &encode_queries(&s.queries))?;
        atomic_write_json(
            &dir.join(format!("{stem}.json")),
            &SampleMeta {
                object_id: s.object_id,
                deform_id: s.deform_id,
                force: s.force,
                arc: s.arc,
                contacts: s.contacts.clone(),
                cloud_points: s.cloud.len(),
                query_count: s.queries.len(),
            },
        )?;
    }
    let mut splits = BTreeMap::new();
    for protocol in default_protocols(ds.n_deforms()) {
        let split = make_split(ds, &protocol, ds.params.seed)?;
        splits.insert(split.protocol.clone(), split);
    }
    atomic_write_json(
        &manifest_path(dir),
        &DatasetManifest {
            version: DATASET_VERSION,
            params: ds.params.clone(),
            specs: ds.objects.iter().map(|o| o.spec.clone()).collect(),
            transforms: ds.objects.iter().map(|o| o.transform).collect(),
            canonical_contacts: ds.objects.iter().map(|o| o.canonical_contact).collect(),
            splits,
        },
    )
}

pub fn load_dataset(dir: &Path) -> Result<(Dataset, DatasetManifest)> {
    let manifest: DatasetManifest =
        serde_json::from_slice(&std::fs::read(manifest_path(dir))?)?;
    if manifest.version != DATASET_VERSION {
        return Err(Error::Dataset(format!(
            "unsupported dataset version {}",
            manifest.version
        )));
    }
    let params = manifest.params.clone();
    params.validate()?;
    if manifest.specs.len() != params.objects || manifest.transforms.len() != params.objects {
        return Err(Error::Dataset("manifest object tables disagree".into()));
    }

    let mut objects = Vec::with_capacity(params.objects);
    for (i, spec) in manifest.specs.iter().enumerate() {
        let obj = NominalObject::build(
            spec.clone(),
            params.mesh_n_theta,
            params.mesh_n_z,
            params.margin,
        )?;
        // Shapes rebuild deterministically from their spec; a mismatch means
        // the manifest and this code disagree about the generator.
        if obj.transform != manifest.transforms[i]
            || obj.canonical_contact != manifest.canonical_contacts[i]
        {
            return Err(Error::Dataset(format!(
                "object {i} does not rebuild to the manifest transform"
            )));
        }
        objects.push(obj);
    }

    let mut samples = Vec::with_capacity(params.objects * (params.deforms + 1));
    for i in 0..params.objects {
        for j in 0..=params.deforms {
            let stem = sample_stem(i, j);
            let meta: SampleMeta =
                serde_json::from_slice(&std::fs::read(dir.join(format!("{stem}.json")))?)?;
            if meta.object_id != i || meta.deform_id != j {
                return Err(Error::Dataset(format!("{stem}: metadata ids disagree")));
            }
            let (cloud, _desc) = read_cloud(&dir.join(format!("{stem}.pc")))?;
            let queries = {
                let path = dir.join(format!("{stem}.qry"));
                decode_queries(&std::fs::read(&path)?, &path)?
            };
            if cloud.len() != meta.cloud_points || queries.len() != meta.query_count {
                return Err(Error::Dataset(format!("{stem}: stored counts disagree")));
            }
            samples.push(DeformationSample {
                object_id: i,
                deform_id: j,
                force: meta.force,
                arc: meta.arc,
                contacts: meta.contacts,
                cloud,
                queries,
            });
        }
    }
    Ok((
        Dataset {
            params,
            objects,
            samples,
        },
        manifest,
    ))
}
