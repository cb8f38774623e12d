//! Deterministic lexical and tag features for an image-text pair.
//!
//! Layout: `[text buckets | tag buckets | scalars]`. Both bucket blocks hold
//! L2-normalized hashed counts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::augment::AntonymLexicon;
use crate::corpus::{truncate_text, ImageTextPair};
use crate::error::ClassifierError;
use crate::text::{fnv1a, split_sentences, tokens};

/// Names of the trailing scalar block, in order.
pub const SCALAR_FEATURES: [&str; 6] = [
    "overlap_ratio",
    "lexicon_keyword_hits",
    "lexicon_replacement_hits",
    "sentence_count",
    "mean_sentence_length",
    "tag_count",
];

/// Bumped whenever extraction changes in a way that invalidates models.
const FEATURE_VERSION: u32 = 1;
const MULTIPLIER: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSchema {
    pub hashed_text_dims: usize,
    pub hashed_tag_dims: usize,
    /// Texts are cut to this many sentences before extraction.
    pub max_sentences: usize,
    pub max_words_per_sentence: usize,
}

impl Default for FeatureSchema {
    fn default() -> Self {
        FeatureSchema {
            hashed_text_dims: 1024,
            hashed_tag_dims: 256,
            max_sentences: 30,
            max_words_per_sentence: 50,
        }
    }
}

impl FeatureSchema {
    pub fn dim(&self) -> usize {
        self.hashed_text_dims + self.hashed_tag_dims + SCALAR_FEATURES.len()
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        if self.hashed_text_dims == 0 || self.hashed_tag_dims == 0 {
            return Err(ClassifierError::Config("hashed dimensions must be positive".into()));
        }
        if self.max_sentences == 0 || self.max_words_per_sentence == 0 {
            return Err(ClassifierError::Config("truncation caps must be positive".into()));
        }
        Ok(())
    }

    /// Identifies this schema together with the lexicon it is evaluated
    /// against; two extractions agree iff their hashes agree.
    pub fn hash(&self, lex: &AntonymLexicon) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "v{FEATURE_VERSION};text={};tags={};sent={};words={};scalars={};lex=",
            self.hashed_text_dims,
            self.hashed_tag_dims,
            self.max_sentences,
            self.max_words_per_sentence,
            SCALAR_FEATURES.join(",")
        ));
        h.update(lex.fingerprint());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector {
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check(&self, expected: usize) -> Result<(), ClassifierError> {
        if self.values.len() != expected {
            return Err(ClassifierError::DimensionMismatch {
                expected,
                got: self.values.len(),
            });
        }
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(ClassifierError::NonFiniteFeature { index }),
            None => Ok(()),
        }
    }

    /// Non-zero entries as (index, value).
    pub fn sparse(&self) -> Vec<(usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect()
    }
}

/// Multiplicative hashing of the FNV-1a digest onto `dims` buckets.
pub fn bucket(token: &str, dims: usize) -> usize {
    let mixed = fnv1a(token.as_bytes()).wrapping_mul(MULTIPLIER);
    ((u128::from(mixed) * dims as u128) >> 64) as usize
}

fn hashed_block<'a>(out: &mut [f64], items: impl IntoIterator<Item = &'a str>) {
    for item in items {
        out[bucket(item, out.len())] += 1.0;
    }
    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        out.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Fraction of tags whose words all occur among the text tokens.
pub fn overlap_ratio(text_tokens: &BTreeSet<String>, tags: &[String]) -> f64 {
    let hits = tags
        .iter()
        .filter(|tag| {
            let words = tokens(tag);
            !words.is_empty() && words.iter().all(|w| text_tokens.contains(w))
        })
        .count();
    hits as f64 / tags.len().max(1) as f64
}

pub fn extract_features(
    pair: &ImageTextPair,
    schema: &FeatureSchema,
    lex: &AntonymLexicon,
) -> FeatureVector {
    let text = truncate_text(&pair.text, schema.max_sentences, schema.max_words_per_sentence)
        .unwrap_or_else(|_| pair.text.clone());
    let toks = tokens(&text);
    let tags: Vec<String> = pair.concept_tags.iter().map(|t| t.to_lowercase()).collect();

    let mut values = vec![0.0; schema.dim()];
    let (text_block, rest) = values.split_at_mut(schema.hashed_text_dims);
    let (tag_block, scalars) = rest.split_at_mut(schema.hashed_tag_dims);
    hashed_block(text_block, toks.iter().map(String::as_str));
    hashed_block(tag_block, tags.iter().map(String::as_str));

    let token_set: BTreeSet<String> = toks.iter().cloned().collect();
    let sentences = split_sentences(&text);
    let sentence_count = sentences.len();
    let mean_len = if sentence_count == 0 {
        0.0
    } else {
        sentences.iter().map(|s| tokens(s).len()).sum::<usize>() as f64 / sentence_count as f64
    };
    scalars[0] = overlap_ratio(&token_set, &tags);
    scalars[1] = (lex.keyword_hits(&text) as f64).ln_1p();
    scalars[2] = (lex.replacement_hits(&text) as f64).ln_1p();
    scalars[3] = (sentence_count as f64).ln_1p();
    scalars[4] = mean_len.ln_1p();
    scalars[5] = (tags.len() as f64).ln_1p();
    FeatureVector { values }
}
