//! Train/test split protocols over the (object, deformation) grid.

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::util::derive_rng;
use crate::{Error, Result};

/// Identifies one sample: (object_id, deform_id), deform 0 is undeformed.
pub type SampleId = (usize, usize);

/// How to carve the corpus into train and test sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Protocol {
    /// Memorisation check: every sample is both trained on and evaluated.
    Known,
    /// Withhold `withhold` uniformly chosen deformations per object.
    Random { withhold: usize },
    /// Withhold the `withhold` weakest forces per object.
    Lowest { withhold: usize },
    /// Withhold the `withhold` strongest forces per object.
    Highest { withhold: usize },
    /// Withhold every deformation pushed toward +y.
    Direction,
    /// Withhold all deformations of one object, keeping its undeformed state.
    NoDeformed { target: usize },
    /// Like `NoDeformed` but leak `k` deformations of the target into train.
    KDeformed { target: usize, k: usize },
}

impl Protocol {
    pub fn name(&self) -> String {
        match self {
            Protocol::Known => "known".into(),
            Protocol::Random { withhold } => format!("random_w{withhold}"),
            Protocol::Lowest { withhold } => format!("lowest_w{withhold}"),
            Protocol::Highest { withhold } => format!("highest_w{withhold}"),
            Protocol::Direction => "direction".into(),
            Protocol::NoDeformed { target } => format!("no_deformed_o{target}"),
            Protocol::KDeformed { target, k } => format!("k_deformed_o{target}_k{k}"),
        }
    }
}

/// Default number of withheld deformations: ceil(5 m / 24), at least 1.
pub fn default_withhold(deforms: usize) -> usize {
    ((5 * deforms + 23) / 24).max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSplit {
    pub protocol: String,
    pub train: Vec<SampleId>,
    pub test: Vec<SampleId>,
}

fn force_magnitude(ds: &Dataset, id: SampleId) -> f64 {
    crate::geometry::norm(ds.sample(id.0, id.1).force)
}

/// Builds the split. Train and test are sorted by (object, deform); for every
/// protocol except `Known` they are disjoint by construction, which is
/// asserted before returning.
pub fn make_split(ds: &Dataset, protocol: &Protocol, seed: u64) -> Result<ExperimentSplit> {
    let n = ds.n_objects();
    let m = ds.n_deforms();
    let all: Vec<SampleId> = ds.ids().collect();

    let check_withhold = |w: usize| {
        if w == 0 || w > m {
            Err(Error::InvalidArg(format!(
                "withhold must be in 1..={m}, got {w}"
            )))
        } else {
            Ok(())
        }
    };
    let check_target = |t: usize| {
        if t >= n {
            Err(Error::InvalidArg(format!(
                "target object must be < {n}, got {t}"
            )))
        } else {
            Ok(())
        }
    };

    let mut test: Vec<SampleId> = match protocol {
        Protocol::Known => {
            return Ok(ExperimentSplit {
                protocol: protocol.name(),
                train: all.clone(),
                test: all,
            });
        }
        Protocol::Random { withhold } => {
            check_withhold(*withhold)?;
            let mut test = Vec::new();
            for i in 0..n {
                let mut rng = derive_rng(seed, "split", i as u64, 0);
                let mut picks = rand::seq::index::sample(&mut rng, m, *withhold).into_vec();
                picks.sort_unstable();
                test.extend(picks.into_iter().map(|p| (i, p + 1)));
            }
            test
        }
        Protocol::Lowest { withhold } | Protocol::Highest { withhold } => {
            check_withhold(*withhold)?;
            let highest = matches!(protocol, Protocol::Highest { .. });
            let mut test = Vec::new();
            for i in 0..n {
                let mut order: Vec<usize> = (1..=m).collect();
                // Ties break toward the lower deform id in both directions.
                order.sort_by(|&a, &b| {
                    force_magnitude(ds, (i, a))
                        .partial_cmp(&force_magnitude(ds, (i, b)))
                        .unwrap()
                        .then(a.cmp(&b))
                });
                if highest {
                    order.reverse();
                }
                let mut picks: Vec<usize> = order[..*withhold].to_vec();
                picks.sort_unstable();
                test.extend(picks.into_iter().map(|p| (i, p)));
            }
            test
        }
        Protocol::Direction => all
            .iter()
            .copied()
            .filter(|&(i, j)| j > 0 && ds.sample(i, j).force[1] > 0.0)
            .collect(),
        Protocol::NoDeformed { target } => {
            check_target(*target)?;
            (1..=m).map(|j| (*target, j)).collect()
        }
        Protocol::KDeformed { target, k } => {
            check_target(*target)?;
            if *k >= m {
                return Err(Error::InvalidArg(format!(
                    "k must leave at least one test deformation, got k={k} with m={m}"
                )));
            }
            let mut rng = derive_rng(seed, "ksplit", *target as u64, *k as u64);
            let mut kept = rand::seq::index::sample(&mut rng, m, *k).into_vec();
            kept.sort_unstable();
            (1..=m)
                .filter(|j| !kept.contains(&(j - 1)))
                .map(|j| (*target, j))
                .collect()
        }
    };
    test.sort_unstable();
    let train: Vec<SampleId> = all
        .iter()
        .copied()
        .filter(|id| test.binary_search(id).is_err())
        .collect();
    assert!(
        train.iter().all(|id| test.binary_search(id).is_err()),
        "train and test must be disjoint"
    );
    assert_eq!(train.len() + test.len(), all.len());
    Ok(ExperimentSplit {
        protocol: protocol.name(),
        train,
        test,
    })
}
