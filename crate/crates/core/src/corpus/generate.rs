//! Per-class pair generators.
//!
//! Each generator is a pure function of its inputs and seed. Random choices
//! for output `i` use a stream derived from `(seed, i)`.

use std::collections::{BTreeMap, HashSet};

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::{ImageTextPair, Provenance, SourceItem};
use crate::error::CorpusError;
use crate::rng::rng_for;
use crate::taxonomy::RelationClass;
use crate::text::{fnv1a, is_stopword, tokens};

/// Draw budget per uncorrelated pair.
pub const DEFAULT_MAX_DRAWS: usize = 1000;

// Stream id reserved for selection shuffles; per-output streams count up from 0.
const SELECTION_STREAM: u64 = u64::MAX;

/// Pairs plus counters for inputs that were skipped, dropped or rejected.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Generated {
    pub pairs: Vec<ImageTextPair>,
    /// Stories without a caption or image (complementary).
    pub skipped: usize,
    /// Concepts without a partner on the other side (illustration).
    pub dropped: usize,
    /// Slogans sharing a token with a concept tag (interdependent).
    pub rejected: usize,
}

fn provenance(generator: &str, seed: u64, parent_ids: Vec<String>) -> Provenance {
    Provenance {
        generator: generator.to_string(),
        seed,
        parent_ids,
        replacements: None,
    }
}

fn folded_path(item: &SourceItem) -> HashSet<String> {
    item.category_path.iter().map(|c| c.to_lowercase()).collect()
}

/// Joins the image of one item with a caption of another whose category
/// path shares no element with the first.
pub fn gen_uncorrelated(
    items: &[SourceItem],
    n: usize,
    seed: u64,
) -> Result<Vec<ImageTextPair>, CorpusError> {
    gen_uncorrelated_with(items, n, seed, DEFAULT_MAX_DRAWS)
}

pub fn gen_uncorrelated_with(
    items: &[SourceItem],
    n: usize,
    seed: u64,
    max_draws: usize,
) -> Result<Vec<ImageTextPair>, CorpusError> {
    let images: Vec<&SourceItem> = items
        .iter()
        .filter(|it| !it.category_path.is_empty())
        .collect();
    let captions: Vec<&SourceItem> = images
        .iter()
        .copied()
        .filter(|it| !it.texts.is_empty())
        .collect();
    let paths: BTreeMap<&str, HashSet<String>> =
        images.iter().map(|it| (it.id.as_str(), folded_path(it))).collect();

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = rng_for(seed, i as u64);
        let found = (!captions.is_empty())
            .then(|| {
                (0..max_draws).find_map(|_| {
                    let a = images[rng.gen_range(0..images.len())];
                    let b = captions[rng.gen_range(0..captions.len())];
                    paths[a.id.as_str()]
                        .is_disjoint(&paths[b.id.as_str()])
                        .then_some((a, b))
                })
            })
            .flatten();
        let Some((image, caption)) = found else {
            return Err(CorpusError::NoDisjointPartner {
                draws: max_draws,
                achieved: i,
                requested: n,
            });
        };
        let text = caption.texts[rng.gen_range(0..caption.texts.len())].clone();
        out.push(ImageTextPair::labeled(
            format!("uncorrelated-{i:06}"),
            &image.image_ref,
            text,
            &image.concept_tags,
            RelationClass::Uncorrelated,
            provenance(
                "uncorrelated",
                seed,
                vec![image.id.clone(), caption.id.clone()],
            ),
        ));
    }
    Ok(out)
}

/// Pairs each sampled item's image with its own first description.
/// Sampling is without replacement.
pub fn gen_anchorage(
    items: &[SourceItem],
    n: usize,
    seed: u64,
) -> Result<Vec<ImageTextPair>, CorpusError> {
    let eligible: Vec<&SourceItem> = items.iter().filter(|it| !it.texts.is_empty()).collect();
    if n > eligible.len() {
        return Err(CorpusError::NotEnoughSources {
            generator: "anchorage",
            requested: n,
            available: eligible.len(),
        });
    }
    let mut rng = rng_for(seed, SELECTION_STREAM);
    let picked = index::sample(&mut rng, eligible.len(), n);
    Ok(picked
        .into_iter()
        .enumerate()
        .map(|(i, idx)| {
            let item = eligible[idx];
            ImageTextPair::labeled(
                format!("anchorage-{i:06}"),
                &item.image_ref,
                item.texts[0].clone(),
                &item.concept_tags,
                RelationClass::Anchorage,
                provenance("anchorage", seed, vec![item.id.clone()]),
            )
        })
        .collect())
}

struct Story<'a> {
    id: &'a str,
    members: Vec<&'a SourceItem>,
}

/// Concatenates the captions of a story in manifest order and pairs them with
/// one image of the same story, drawn uniformly. Stories are sampled without
/// replacement; one pair per story.
pub fn gen_complementary(
    items: &[SourceItem],
    n: usize,
    seed: u64,
) -> Result<Generated, CorpusError> {
    let mut stories: Vec<Story<'_>> = Vec::new();
    let mut position: BTreeMap<&str, usize> = BTreeMap::new();
    for item in items {
        let Some(story_id) = item.story_id.as_deref() else {
            continue;
        };
        let idx = *position.entry(story_id).or_insert_with(|| {
            stories.push(Story {
                id: story_id,
                members: Vec::new(),
            });
            stories.len() - 1
        });
        stories[idx].members.push(item);
    }

    let total = stories.len();
    stories.retain(|s| {
        s.members.iter().any(|m| !m.texts.is_empty())
            && s.members.iter().any(|m| !m.image_ref.is_empty())
    });
    let skipped = total - stories.len();
    if n > stories.len() {
        return Err(CorpusError::NotEnoughSources {
            generator: "complementary",
            requested: n,
            available: stories.len(),
        });
    }

    let mut rng = rng_for(seed, SELECTION_STREAM);
    let picked = index::sample(&mut rng, stories.len(), n);
    let pairs = picked
        .into_iter()
        .enumerate()
        .map(|(i, idx)| {
            let story = &stories[idx];
            let text = story
                .members
                .iter()
                .flat_map(|m| m.texts.iter().map(String::as_str))
                .collect::<Vec<_>>()
                .join(" ");
            let images: Vec<&&SourceItem> = story
                .members
                .iter()
                .filter(|m| !m.image_ref.is_empty())
                .collect();
            let mut rng = rng_for(seed, i as u64);
            let image = images[rng.gen_range(0..images.len())];
            let mut parents = vec![story.id.to_string()];
            parents.push(image.id.clone());
            ImageTextPair::labeled(
                format!("complementary-{i:06}"),
                &image.image_ref,
                text,
                &image.concept_tags,
                RelationClass::Complementary,
                provenance("complementary", seed, parents),
            )
        })
        .collect();
    Ok(Generated {
        pairs,
        skipped,
        ..Generated::default()
    })
}

/// Inner join of concept images with concept summaries on the case-folded
/// concept name; one random image per concept. Output is ordered by the
/// folded concept name.
pub fn gen_illustration(
    concept_images: &[SourceItem],
    concept_summaries: &[SourceItem],
    seed: u64,
) -> Generated {
    let mut images: BTreeMap<String, Vec<&SourceItem>> = BTreeMap::new();
    for item in concept_images {
        if let Some(c) = &item.concept {
            images.entry(c.to_lowercase()).or_default().push(item);
        }
    }
    let mut summaries: BTreeMap<String, &SourceItem> = BTreeMap::new();
    for item in concept_summaries {
        if let (Some(c), false) = (&item.concept, item.texts.is_empty()) {
            summaries.entry(c.to_lowercase()).or_insert(item);
        }
    }

    let mut dropped = summaries.keys().filter(|k| !images.contains_key(*k)).count();
    let mut pairs = Vec::new();
    for (concept, candidates) in &images {
        let Some(summary) = summaries.get(concept) else {
            dropped += 1;
            continue;
        };
        // keyed by concept so adding concepts leaves other choices alone
        let mut rng = rng_for(seed, fnv1a(concept.as_bytes()));
        let image = candidates[rng.gen_range(0..candidates.len())];
        let i = pairs.len();
        pairs.push(ImageTextPair::labeled(
            format!("illustration-{i:06}"),
            &image.image_ref,
            summary.texts[0].clone(),
            &image.concept_tags,
            RelationClass::Illustration,
            provenance(
                "illustration",
                seed,
                vec![image.id.clone(), summary.id.clone()],
            ),
        ));
    }
    Generated {
        pairs,
        dropped,
        ..Generated::default()
    }
}

/// True when a non-stopword token of `text` also occurs in one of the tags.
pub fn shares_tag_token(text: &str, tags: &[String]) -> bool {
    let text_tokens: HashSet<String> = tokens(text)
        .into_iter()
        .filter(|t| !is_stopword(t))
        .collect();
    tags.iter()
        .flat_map(|tag| tokens(tag))
        .any(|t| text_tokens.contains(&t))
}

/// Imports pre-labeled interdependent records, rejecting any whose text
/// mentions a depicted concept.
pub fn gen_interdependent(items: &[SourceItem]) -> Generated {
    let mut pairs = Vec::new();
    let mut rejected = 0;
    for item in items.iter().filter(|it| !it.texts.is_empty()) {
        let text = item.texts.join(" ");
        if shares_tag_token(&text, &item.concept_tags) {
            rejected += 1;
            continue;
        }
        let i = pairs.len();
        pairs.push(ImageTextPair::labeled(
            format!("interdependent-{i:06}"),
            &item.image_ref,
            text,
            &item.concept_tags,
            RelationClass::Interdependent,
            provenance("interdependent", 0, vec![item.id.clone()]),
        ));
    }
    Generated {
        pairs,
        rejected,
        ..Generated::default()
    }
}

/// Deterministic shuffle used by the corpus builder to subsample pools.
pub(crate) fn shuffled<T>(mut v: Vec<T>, seed: u64) -> Vec<T> {
    let mut rng = rng_for(seed, SELECTION_STREAM);
    v.shuffle(&mut rng);
    v
}
