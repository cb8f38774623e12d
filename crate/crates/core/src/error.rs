use std::path::PathBuf;

use thiserror::Error;

use crate::taxonomy::{InvalidCase, RelationClass};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("Undefined ({0}) has no defining triple")]
    UndefinedHasNoTriple(InvalidCase),
    #[error("unknown class name {0:?}")]
    UnknownClass(String),
    #[error("unknown invalid case {0:?}")]
    UnknownCase(String),
    #[error("unknown metric level {0}")]
    UnknownLevel(String),
    #[error("\"Undefined\" requires an invalid case")]
    MissingCase,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: duplicate id {id:?} (first seen on line {first_line})")]
    DuplicateId {
        path: PathBuf,
        line: usize,
        first_line: usize,
        id: String,
    },
    #[error("could not find a category-disjoint partner after {draws} draws; produced {achieved} of {requested} uncorrelated pairs")]
    NoDisjointPartner {
        draws: usize,
        achieved: usize,
        requested: usize,
    },
    #[error("{generator}: requested {requested} pairs but only {available} sources are usable")]
    NotEnoughSources {
        generator: &'static str,
        requested: usize,
        available: usize,
    },
    #[error("cannot truncate empty text")]
    EmptyText,
    #[error("{class}: could only derive {achieved} of {requested} negatives ({rejected} candidates had no lexicon keyword)")]
    NotEnoughNegatives {
        class: RelationClass,
        requested: usize,
        achieved: usize,
        rejected: usize,
    },
    #[error("invalid build config: {0}")]
    Config(String),
    #[error(transparent)]
    Augment(#[from] AugmentError),
}

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("lexicon line {line}: duplicate keyword {keyword:?} (first on line {first_line})")]
    DuplicateKeyword {
        line: usize,
        first_line: usize,
        keyword: String,
    },
    #[error("pair {pair_id}: class {class} has no negative counterpart")]
    NotPositive { pair_id: String, class: RelationClass },
    #[error("pair {pair_id}: text contains no lexicon keyword, refusing to label it as negative")]
    NoReplacement { pair_id: String },
}

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("label {label} out of range for a head with {arity} outputs")]
    LabelOutOfRange { label: usize, arity: usize },
    #[error("feature dimension mismatch: model expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("head mismatch: expected {expected}, got {got}")]
    HeadMismatch { expected: String, got: String },
    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("non-finite feature value at index {index}")]
    NonFiniteFeature { index: usize },
    #[error("model schema hash {found} does not match feature schema {expected}")]
    SchemaMismatch { expected: String, found: String },
    #[error("unsupported model container: {0}")]
    BadContainer(String),
    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("model json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid training config: {0}")]
    Config(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("no unit has two or more ratings")]
    NoPairableUnits,
    #[error("agreement undefined: only one category was ever used")]
    AgreementUndefined,
    #[error("predictions without ground truth: {0:?}")]
    MissingTruth(Vec<String>),
    #[error("ground truth can not be Undefined (pair {0})")]
    UndefinedTruth(String),
    #[error("automatic and human labels share no pair id")]
    EmptyIntersection,
}
