//! Whole-corpus assembly from a build configuration.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::generate::{self, shuffled, Generated};
use super::{load_manifest, summary_path, truncate_text, write_atomic, write_pairs};
use super::{CorpusManifest, ImageTextPair, SourceItem};
use crate::augment::{derive_negative, load_lexicon, AntonymLexicon};
use crate::error::{AugmentError, CorpusError};
use crate::eval::consistency::MetricCounts;
use crate::rng::derive_seed;
use crate::taxonomy::RelationClass;

fn default_max_sentences() -> usize {
    10
}

fn default_max_draws() -> usize {
    generate::DEFAULT_MAX_DRAWS
}

/// Source manifests, one per generator. Only the sources needed by classes
/// with a non-zero target have to be present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourcePaths {
    /// Captioned images with category hierarchies (uncorrelated pairs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub captions: Option<PathBuf>,
    /// Images with stand-alone descriptions (anchorage).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptions: Option<PathBuf>,
    /// Story images with story_id and one caption each (complementary).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stories: Option<PathBuf>,
    /// Example images per concept (illustration).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept_images: Option<PathBuf>,
    /// Encyclopedic summaries per concept (illustration).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept_summaries: Option<PathBuf>,
    /// Pre-labeled slogan/image records (interdependent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slogans: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    pub seed: u64,
    pub sources: SourcePaths,
    /// TSV lexicon; the bundled one when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    /// Pair count per class, keyed by canonical class name.
    pub targets: BTreeMap<String, usize>,
    #[serde(default = "default_max_sentences")]
    pub max_sentences: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_words_per_sentence: Option<usize>,
    #[serde(default = "default_max_draws")]
    pub max_draws: usize,
}

impl BuildConfig {
    pub fn target(&self, class: RelationClass) -> usize {
        self.targets.get(class.name()).copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        for name in self.targets.keys() {
            RelationClass::from_name(name).map_err(|e| CorpusError::Config(e.to_string()))?;
        }
        if self.max_sentences == 0 {
            return Err(CorpusError::Config("max_sentences must be positive".into()));
        }
        if self.max_words_per_sentence == Some(0) {
            return Err(CorpusError::Config(
                "max_words_per_sentence must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Resolves relative source and lexicon paths against `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(path) = p {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        let s = &mut self.sources;
        for p in [
            &mut s.captions,
            &mut s.descriptions,
            &mut s.stories,
            &mut s.concept_images,
            &mut s.concept_summaries,
            &mut s.slogans,
        ] {
            fix(p);
        }
        fix(&mut self.lexicon);
    }
}

/// Counters gathered while building.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub skipped_stories: usize,
    pub dropped_concepts: usize,
    pub rejected_slogans: usize,
    /// Positive candidates that had no lexicon keyword, per negative class.
    pub rejected_negative_candidates: BTreeMap<String, usize>,
    pub truncated_texts: usize,
}

fn require<'a>(path: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, CorpusError> {
    path.as_deref()
        .ok_or_else(|| CorpusError::Config(format!("sources.{what} is required by the targets")))
}

fn take_exact(
    pool: &[ImageTextPair],
    n: usize,
    generator: &'static str,
) -> Result<Vec<ImageTextPair>, CorpusError> {
    if n > pool.len() {
        return Err(CorpusError::NotEnoughSources {
            generator,
            requested: n,
            available: pool.len(),
        });
    }
    Ok(pool[..n].to_vec())
}

/// Derives `n` negatives from the pool in order, skipping candidates without
/// any lexicon keyword. Parents may also appear as positives.
fn negatives(
    pool: &[ImageTextPair],
    n: usize,
    class: RelationClass,
    lex: &AntonymLexicon,
    report: &mut BuildReport,
) -> Result<Vec<ImageTextPair>, CorpusError> {
    let mut out = Vec::with_capacity(n);
    let mut rejected = 0;
    for parent in pool {
        if out.len() == n {
            break;
        }
        match derive_negative(parent, lex) {
            Ok(neg) => out.push(neg),
            Err(AugmentError::NoReplacement { .. }) => rejected += 1,
            Err(e) => return Err(e.into()),
        }
    }
    if n > 0 {
        report
            .rejected_negative_candidates
            .insert(class.name().to_string(), rejected);
    }
    if out.len() < n {
        return Err(CorpusError::NotEnoughNegatives {
            class,
            requested: n,
            achieved: out.len(),
            rejected,
        });
    }
    Ok(out)
}

/// Runs every generator, derives the negatives and truncates all texts.
/// Nothing is written; see [`write_corpus`].
pub fn build_corpus(config: &BuildConfig) -> Result<(CorpusManifest, BuildReport), CorpusError> {
    config.validate()?;
    let lex = match &config.lexicon {
        Some(p) => load_lexicon(p)?,
        None => AntonymLexicon::bundled(),
    };
    let load = |p: &Option<PathBuf>, what: &str| -> Result<Vec<SourceItem>, CorpusError> {
        load_manifest(require(p, what)?)
    };
    let seed_for = |class: RelationClass| derive_seed(config.seed, class.index() as u64);
    let target = |class| config.target(class);
    let mut report = BuildReport::default();
    let mut by_class: BTreeMap<RelationClass, Vec<ImageTextPair>> = BTreeMap::new();

    use RelationClass as C;

    if target(C::Uncorrelated) > 0 {
        let items = load(&config.sources.captions, "captions")?;
        let pairs = generate::gen_uncorrelated_with(
            &items,
            target(C::Uncorrelated),
            seed_for(C::Uncorrelated),
            config.max_draws,
        )?;
        by_class.insert(C::Uncorrelated, pairs);
    }

    if target(C::Interdependent) > 0 {
        let items = load(&config.sources.slogans, "slogans")?;
        let Generated {
            pairs, rejected, ..
        } = generate::gen_interdependent(&items);
        report.rejected_slogans = rejected;
        by_class.insert(
            C::Interdependent,
            take_exact(&pairs, target(C::Interdependent), "interdependent")?,
        );
    }

    if target(C::Complementary) + target(C::Contrasting) > 0 {
        let items = load(&config.sources.stories, "stories")?;
        let seed = seed_for(C::Complementary);
        let probe = generate::gen_complementary(&items, 0, seed)?;
        let available = count_stories(&items) - probe.skipped;
        let pool = generate::gen_complementary(&items, available, seed)?;
        report.skipped_stories = pool.skipped;
        let pool = pool.pairs;
        by_class.insert(
            C::Complementary,
            take_exact(&pool, target(C::Complementary), "complementary")?,
        );
        by_class.insert(
            C::Contrasting,
            negatives(&pool, target(C::Contrasting), C::Contrasting, &lex, &mut report)?,
        );
    }

    if target(C::Illustration) + target(C::BadIllustration) > 0 {
        let images = load(&config.sources.concept_images, "concept_images")?;
        let summaries = load(&config.sources.concept_summaries, "concept_summaries")?;
        let seed = seed_for(C::Illustration);
        let joined = generate::gen_illustration(&images, &summaries, seed);
        report.dropped_concepts = joined.dropped;
        let pool = shuffled(joined.pairs, seed);
        by_class.insert(
            C::Illustration,
            take_exact(&pool, target(C::Illustration), "illustration")?,
        );
        by_class.insert(
            C::BadIllustration,
            negatives(
                &pool,
                target(C::BadIllustration),
                C::BadIllustration,
                &lex,
                &mut report,
            )?,
        );
    }

    if target(C::Anchorage) + target(C::BadAnchorage) > 0 {
        let items = load(&config.sources.descriptions, "descriptions")?;
        let available = items.iter().filter(|it| !it.texts.is_empty()).count();
        let pool = generate::gen_anchorage(&items, available, seed_for(C::Anchorage))?;
        by_class.insert(
            C::Anchorage,
            take_exact(&pool, target(C::Anchorage), "anchorage")?,
        );
        by_class.insert(
            C::BadAnchorage,
            negatives(&pool, target(C::BadAnchorage), C::BadAnchorage, &lex, &mut report)?,
        );
    }

    let max_words = config.max_words_per_sentence.unwrap_or(usize::MAX);
    let mut pairs = Vec::new();
    for class in RelationClass::VALID {
        for mut pair in by_class.remove(&class).unwrap_or_default() {
            let cut = truncate_text(&pair.text, config.max_sentences, max_words)?;
            if cut != pair.text {
                report.truncated_texts += 1;
                pair.text = cut;
            }
            pairs.push(pair);
        }
    }

    let snapshot = serde_json::to_value(config).expect("config serializes");
    Ok((CorpusManifest::from_pairs(pairs, snapshot), report))
}

fn count_stories(items: &[SourceItem]) -> usize {
    let ids: std::collections::BTreeSet<&str> =
        items.iter().filter_map(|it| it.story_id.as_deref()).collect();
    ids.len()
}

/// Summary document in Table-1 (classes) and Table-2 (metrics) layouts.
pub fn summary_json(manifest: &CorpusManifest, report: &BuildReport) -> serde_json::Value {
    let classes: Vec<_> = RelationClass::VALID
        .iter()
        .map(|c| {
            serde_json::json!({
                "class": c.name(),
                "count": manifest.per_class_counts.get(c).copied().unwrap_or(0),
            })
        })
        .collect();
    let counts: BTreeMap<RelationClass, u64> = manifest
        .per_class_counts
        .iter()
        .map(|(c, n)| (*c, *n as u64))
        .collect();
    let metrics = MetricCounts::from_class_counts(&counts).0;
    serde_json::json!({
        "classes": classes,
        "metrics": metrics.rows().iter().map(|(name, n)| serde_json::json!({"metric": name, "count": n})).collect::<Vec<_>>(),
        "total": manifest.pairs.len(),
        "report": report,
        "created_with": manifest.created_with,
    })
}

/// Writes the pairs file and its summary next to it.
pub fn write_corpus(
    path: &Path,
    manifest: &CorpusManifest,
    report: &BuildReport,
) -> Result<(), CorpusError> {
    write_pairs(path, &manifest.pairs)?;
    let summary = summary_json(manifest, report);
    write_atomic(&summary_path(path), |w| {
        serde_json::to_writer_pretty(&mut *w, &summary).map_err(std::io::Error::other)?;
        w.write_all(b"\n")
    })
}
