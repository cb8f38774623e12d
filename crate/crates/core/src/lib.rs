//! Semantic image-text relations: the metric taxonomy, corpus synthesis with
//! antonym-based negatives, shallow baseline classifiers, and evaluation.

pub mod augment;
pub mod classifier;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod rng;
pub mod taxonomy;
pub mod text;

pub use error::{AugmentError, ClassifierError, CorpusError, EvalError, TaxonomyError};
pub use taxonomy::{
    classify_triple, triple_of_class, validity_reason, CmiLevel, InvalidCase, MetricTriple,
    RelationClass, ScLevel, StatLevel, Validity,
};
