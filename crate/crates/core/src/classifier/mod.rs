//! Shallow trainable predictors over lexical and tag features: one network
//! per metric (CMI, SC, STAT) for the cascade scheme, or a single 8-way
//! network for the classic scheme.

pub mod features;
pub mod model;
pub mod network;
pub mod predict;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ClassifierError;
use crate::taxonomy::{triple_of_class, RelationClass};

pub use features::{extract_features, FeatureSchema, FeatureVector, SCALAR_FEATURES};
pub use model::{BaselineModel, TrainingMetadata};
pub use network::{train, Mlp, TrainConfig, TrainOutcome};
pub use predict::{argmax, cascade_predict, classic_predict, predict_proba, predict_triple};

/// Which quantity a network predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeadKind {
    Cmi,
    Sc,
    Stat,
    Classic,
}

impl HeadKind {
    pub const ALL: [HeadKind; 4] = [HeadKind::Cmi, HeadKind::Sc, HeadKind::Stat, HeadKind::Classic];
    pub const METRICS: [HeadKind; 3] = [HeadKind::Cmi, HeadKind::Sc, HeadKind::Stat];

    pub fn arity(self) -> usize {
        match self {
            HeadKind::Cmi => 2,
            HeadKind::Sc | HeadKind::Stat => 3,
            HeadKind::Classic => 8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HeadKind::Cmi => "CMI",
            HeadKind::Sc => "SC",
            HeadKind::Stat => "STAT",
            HeadKind::Classic => "Classic",
        }
    }

    /// Training target for a ground-truth class. Output indices follow the
    /// canonical level order of each metric.
    pub fn label_for(self, class: RelationClass) -> Result<usize, ClassifierError> {
        if self == HeadKind::Classic {
            return if class.is_valid() {
                Ok(class.index())
            } else {
                Err(ClassifierError::LabelOutOfRange {
                    label: class.index(),
                    arity: 8,
                })
            };
        }
        let t = triple_of_class(class).map_err(|_| ClassifierError::LabelOutOfRange {
            label: class.index(),
            arity: self.arity(),
        })?;
        Ok(match self {
            HeadKind::Cmi => t.cmi.index(),
            HeadKind::Sc => t.sc.index(),
            HeadKind::Stat => t.stat.index(),
            HeadKind::Classic => unreachable!(),
        })
    }
}

impl fmt::Display for HeadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HeadKind {
    type Err = ClassifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HeadKind::ALL
            .into_iter()
            .find(|h| h.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ClassifierError::Config(format!("unknown head {s:?}")))
    }
}

impl Serialize for HeadKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for HeadKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
