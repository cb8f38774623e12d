//! Human label records and majority-vote ground truth.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::agreement::ReliabilityMatrix;
use crate::taxonomy::RelationClass;

pub const UNSURE: &str = "Unsure";

/// What an annotator may answer: one of the eight classes, or Unsure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnnotatorLabel {
    Class(RelationClass),
    Unsure,
}

impl AnnotatorLabel {
    /// The nine answer options, in keyboard order (classes 1-8, then Unsure).
    pub fn options() -> impl Iterator<Item = AnnotatorLabel> {
        RelationClass::VALID
            .into_iter()
            .map(AnnotatorLabel::Class)
            .chain(std::iter::once(AnnotatorLabel::Unsure))
    }

    pub fn name(self) -> &'static str {
        match self {
            AnnotatorLabel::Class(c) => c.name(),
            AnnotatorLabel::Unsure => UNSURE,
        }
    }
}

impl fmt::Display for AnnotatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidLabel {
    pub given: String,
}

impl fmt::Display for InvalidLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let valid: Vec<&str> = AnnotatorLabel::options().map(AnnotatorLabel::name).collect();
        write!(
            f,
            "invalid label {:?}; expected one of: {}",
            self.given,
            valid.join(", ")
        )
    }
}

impl std::error::Error for InvalidLabel {}

impl FromStr for AnnotatorLabel {
    type Err = InvalidLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == UNSURE {
            return Ok(AnnotatorLabel::Unsure);
        }
        RelationClass::from_name(s)
            .map(AnnotatorLabel::Class)
            .map_err(|_| InvalidLabel {
                given: s.to_string(),
            })
    }
}

impl Serialize for AnnotatorLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for AnnotatorLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One human judgement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub pair_id: String,
    pub annotator_id: String,
    pub label: AnnotatorLabel,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    UnsureMajority,
    NoMajority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoteOutcome {
    Resolved(RelationClass),
    Excluded(ExclusionReason),
}

/// Resolves each pair by strict majority (more than half of its votes).
/// An Unsure majority or the lack of any majority excludes the pair. Every
/// record counts as one vote; callers pass effective labels.
pub fn majority_vote(records: &[LabelRecord]) -> BTreeMap<String, VoteOutcome> {
    let mut tallies: BTreeMap<&str, BTreeMap<AnnotatorLabel, usize>> = BTreeMap::new();
    for r in records {
        *tallies
            .entry(r.pair_id.as_str())
            .or_default()
            .entry(r.label)
            .or_insert(0) += 1;
    }
    tallies
        .into_iter()
        .map(|(pair, votes)| {
            let total: usize = votes.values().sum();
            let winner = votes
                .iter()
                .find(|(_, &n)| 2 * n > total)
                .map(|(label, _)| *label);
            let outcome = match winner {
                Some(AnnotatorLabel::Class(c)) => VoteOutcome::Resolved(c),
                Some(AnnotatorLabel::Unsure) => {
                    VoteOutcome::Excluded(ExclusionReason::UnsureMajority)
                }
                None => VoteOutcome::Excluded(ExclusionReason::NoMajority),
            };
            (pair.to_string(), outcome)
        })
        .collect()
}

/// Builds the reliability matrix from label records. The last record per
/// (pair, annotator) in slice order wins. With `unsure_as_category` false,
/// Unsure answers are treated as missing ratings.
pub fn reliability_from_records(records: &[LabelRecord], unsure_as_category: bool) -> ReliabilityMatrix {
    let mut effective: BTreeMap<(&str, &str), AnnotatorLabel> = BTreeMap::new();
    for r in records {
        effective.insert((r.pair_id.as_str(), r.annotator_id.as_str()), r.label);
    }
    let mut m = ReliabilityMatrix::new();
    for ((pair, annotator), label) in effective {
        if label == AnnotatorLabel::Unsure && !unsure_as_category {
            continue;
        }
        m.insert(pair, annotator, label.name());
    }
    m
}
