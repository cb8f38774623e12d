//! Source manifests, labeled pairs and corpus synthesis.
//!
//! Source data is described by a neutral JSONL manifest of [`SourceItem`]s.
//! The generators in [`generate`] join images and texts into
//! [`ImageTextPair`]s whose automatic labels follow from how they were built,
//! and [`build`] wires them into a complete corpus.

pub mod build;
pub mod generate;

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::taxonomy::{classify_triple, validity_reason, MetricTriple, RelationClass, Validity};
use crate::text::split_sentences;

pub use build::{build_corpus, summary_json, write_corpus, BuildConfig, BuildReport, SourcePaths};
pub use generate::{
    gen_anchorage, gen_complementary, gen_illustration, gen_interdependent, gen_uncorrelated,
    gen_uncorrelated_with, Generated, DEFAULT_MAX_DRAWS,
};

/// One record of a source manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceItem {
    pub id: String,
    pub image_ref: String,
    #[serde(default)]
    pub texts: Vec<String>,
    #[serde(default)]
    pub category_path: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub story_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
    #[serde(default)]
    pub concept_tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
    pub parent_ids: Vec<String>,
    /// Number of antonym substitutions, for derived negatives.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replacements: Option<usize>,
}

/// A labeled image-text pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PairRecord")]
pub struct ImageTextPair {
    pub id: String,
    pub image_ref: String,
    pub text: String,
    pub concept_tags: Vec<String>,
    pub auto_triple: MetricTriple,
    pub auto_class: RelationClass,
    pub provenance: Provenance,
}

// On-disk shape. `auto_class` may read "Undefined" in hand-edited files; the
// invalid case is then recovered from the triple.
#[derive(Deserialize)]
struct PairRecord {
    id: String,
    image_ref: String,
    text: String,
    #[serde(default)]
    concept_tags: Vec<String>,
    auto_triple: MetricTriple,
    auto_class: String,
    provenance: Provenance,
}

impl TryFrom<PairRecord> for ImageTextPair {
    type Error = String;

    fn try_from(r: PairRecord) -> Result<Self, Self::Error> {
        let auto_class = if r.auto_class == "Undefined" {
            match validity_reason(r.auto_triple) {
                Validity::Invalid(case) => RelationClass::Undefined(case),
                Validity::Valid => {
                    return Err(format!(
                        "auto_class Undefined contradicts valid triple {}",
                        r.auto_triple
                    ))
                }
            }
        } else {
            RelationClass::from_name(&r.auto_class).map_err(|e| e.to_string())?
        };
        Ok(ImageTextPair {
            id: r.id,
            image_ref: r.image_ref,
            text: r.text,
            concept_tags: r.concept_tags,
            auto_triple: r.auto_triple,
            auto_class,
            provenance: r.provenance,
        })
    }
}

impl ImageTextPair {
    pub(crate) fn labeled(
        id: String,
        image_ref: &str,
        text: String,
        concept_tags: &[String],
        class: RelationClass,
        provenance: Provenance,
    ) -> Self {
        let auto_triple =
            crate::taxonomy::triple_of_class(class).expect("generators only emit valid classes");
        ImageTextPair {
            id,
            image_ref: image_ref.to_string(),
            text,
            concept_tags: concept_tags.to_vec(),
            auto_triple,
            auto_class: class,
            provenance,
        }
    }

    /// `auto_class` agrees with `auto_triple` and is a valid class.
    pub fn is_label_sound(&self) -> bool {
        self.auto_class.is_valid() && classify_triple(self.auto_triple) == self.auto_class
    }
}

/// A built corpus: pairs plus the per-class counts and the configuration it
/// was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub pairs: Vec<ImageTextPair>,
    pub per_class_counts: BTreeMap<RelationClass, usize>,
    pub created_with: serde_json::Value,
}

impl CorpusManifest {
    pub fn from_pairs(pairs: Vec<ImageTextPair>, created_with: serde_json::Value) -> Self {
        let per_class_counts = class_counts(&pairs);
        CorpusManifest {
            pairs,
            per_class_counts,
            created_with,
        }
    }
}

pub fn class_counts(pairs: &[ImageTextPair]) -> BTreeMap<RelationClass, usize> {
    let mut counts = BTreeMap::new();
    for p in pairs {
        *counts.entry(p.auto_class).or_insert(0) += 1;
    }
    counts
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads a source manifest. Blank lines are skipped but still counted, so
/// reported line numbers match the file.
pub fn load_manifest(path: &Path) -> Result<Vec<SourceItem>, CorpusError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut items = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| CorpusError::Malformed {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let item: SourceItem = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        if item.id.trim().is_empty() {
            return Err(malformed("empty id".into()));
        }
        if item.image_ref.trim().is_empty() {
            return Err(malformed("empty image_ref".into()));
        }
        if let Some(&first_line) = seen.get(&item.id) {
            return Err(CorpusError::DuplicateId {
                path: path.to_path_buf(),
                line: line_no,
                first_line,
                id: item.id,
            });
        }
        seen.insert(item.id.clone(), line_no);
        items.push(item);
    }
    Ok(items)
}

/// Keeps the first `max_sentences` sentences and the first
/// `max_words_per_sentence` whitespace tokens of each. Text already within
/// both limits is returned unchanged.
pub fn truncate_text(
    text: &str,
    max_sentences: usize,
    max_words_per_sentence: usize,
) -> Result<String, CorpusError> {
    if text.trim().is_empty() {
        return Err(CorpusError::EmptyText);
    }
    let sentences = split_sentences(text);
    let too_long = |s: &&str| s.split_whitespace().count() > max_words_per_sentence;
    if sentences.len() <= max_sentences && !sentences.iter().any(too_long) {
        return Ok(text.to_string());
    }
    let kept: Vec<String> = sentences
        .iter()
        .take(max_sentences)
        .map(|s| {
            let words: Vec<&str> = s.split_whitespace().collect();
            if words.len() <= max_words_per_sentence {
                return words.join(" ");
            }
            let mut cut = words[..max_words_per_sentence].join(" ");
            if let Some(p) = s.chars().last().filter(|c| matches!(c, '.' | '!' | '?')) {
                if !cut.ends_with(p) {
                    cut.push(p);
                }
            }
            cut
        })
        .collect();
    Ok(kept.join(" "))
}

/// Path of the summary file written next to a corpus file:
/// `corpus.jsonl` -> `corpus.summary.json`.
pub fn summary_path(pairs_path: &Path) -> PathBuf {
    let stem = pairs_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into());
    pairs_path.with_file_name(format!("{stem}.summary.json"))
}

/// Writes one JSON object per line. The file appears atomically.
pub fn write_pairs(path: &Path, pairs: &[ImageTextPair]) -> Result<(), CorpusError> {
    write_atomic(path, |w| {
        for p in pairs {
            serde_json::to_writer(&mut *w, p).map_err(std::io::Error::other)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })
}

pub fn read_pairs(path: &Path) -> Result<Vec<ImageTextPair>, CorpusError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut pairs = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let pair = serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Loads pairs and, when a summary file exists, the counts and config it
/// recorded. Without a summary the counts are recomputed from the pairs.
pub fn read_corpus(path: &Path) -> Result<CorpusManifest, CorpusError> {
    let pairs = read_pairs(path)?;
    let summary = summary_path(path);
    if !summary.exists() {
        return Ok(CorpusManifest::from_pairs(pairs, serde_json::Value::Null));
    }
    let raw = std::fs::read_to_string(&summary).map_err(io_err(&summary))?;
    let value: serde_json::Value =
        serde_json::from_str(&raw).map_err(|e| CorpusError::Malformed {
            path: summary.clone(),
            line: e.line(),
            message: e.to_string(),
        })?;
    let mut per_class_counts = BTreeMap::new();
    if let Some(rows) = value.get("classes").and_then(|v| v.as_array()) {
        for row in rows {
            let name = row.get("class").and_then(|v| v.as_str()).unwrap_or_default();
            let count = row.get("count").and_then(|v| v.as_u64()).unwrap_or(0) as usize;
            let class = RelationClass::from_name(name).map_err(|e| CorpusError::Malformed {
                path: summary.clone(),
                line: 0,
                message: e.to_string(),
            })?;
            if count > 0 {
                per_class_counts.insert(class, count);
            }
        }
    }
    let created_with = value.get("created_with").cloned().unwrap_or_default();
    Ok(CorpusManifest {
        pairs,
        per_class_counts,
        created_with,
    })
}

pub(crate) fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), CorpusError> {
    let tmp = path.with_extension("partial");
    let result = (|| {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut w = BufWriter::new(File::create(&tmp)?);
        body(&mut w)?;
        w.flush()?;
        w.get_ref().sync_all()?;
        drop(w);
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for l in lines {
            writeln!(f, "{l}").unwrap();
        }
        f
    }

    #[test]
    fn load_empty_and_valid() {
        let f = manifest(&[]);
        assert!(load_manifest(f.path()).unwrap().is_empty());
        let f = manifest(&[
            r#"{"id":"a","image_ref":"a.jpg","texts":["x"]}"#,
            r#"{"id":"b","image_ref":"b.jpg","category_path":["animal","dog"]}"#,
            r#"{"id":"c","image_ref":"c.jpg","story_id":"s1","concept":"Dog","concept_tags":["dog"]}"#,
        ]);
        let items = load_manifest(f.path()).unwrap();
        assert_eq!(items.len(), 3);
        assert_eq!(items[1].category_path, ["animal", "dog"]);
        assert_eq!(items[2].concept.as_deref(), Some("Dog"));
    }

    #[test]
    fn load_reports_line_numbers() {
        let f = manifest(&[
            r#"{"id":"a","image_ref":"a.jpg"}"#,
            "",
            r#"{"id":"b","texts":["no image"]}"#,
        ]);
        match load_manifest(f.path()) {
            Err(CorpusError::Malformed { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("image_ref"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let f = manifest(&[r#"{"id":"a","image_ref":""}"#]);
        assert!(matches!(
            load_manifest(f.path()),
            Err(CorpusError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn load_rejects_duplicate_ids() {
        let f = manifest(&[
            r#"{"id":"a","image_ref":"a.jpg"}"#,
            r#"{"id":"a","image_ref":"b.jpg"}"#,
        ]);
        match load_manifest(f.path()) {
            Err(CorpusError::DuplicateId {
                line, first_line, ..
            }) => assert_eq!((line, first_line), (2, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn truncate_sentence_cap() {
        let text: Vec<String> = (0..12).map(|i| format!("w{i}.")).collect();
        let out = truncate_text(&text.join(" "), 10, 50).unwrap();
        assert_eq!(split_sentences(&out).len(), 10);
        assert_eq!(out, text[..10].join(" "));
    }

    #[test]
    fn truncate_word_cap() {
        let words: Vec<String> = (0..51).map(|i| format!("w{i}")).collect();
        let out = truncate_text(&words.join(" "), 30, 50).unwrap();
        assert_eq!(out, words[..50].join(" "));
        let with_stop = format!("{}.", words.join(" "));
        let out = truncate_text(&with_stop, 30, 50).unwrap();
        assert_eq!(out, format!("{}.", words[..50].join(" ")));
    }

    #[test]
    fn truncate_identity_and_empty() {
        let text = "A dog  runs.\nIt is happy!";
        assert_eq!(truncate_text(text, 10, 50).unwrap(), text);
        assert!(matches!(truncate_text("  ", 10, 50), Err(CorpusError::EmptyText)));
    }

    #[test]
    fn pair_record_undefined_recovers_case() {
        let line = r#"{"id":"p","image_ref":"i","text":"t","concept_tags":[],"auto_triple":{"cmi":1,"sc":0,"stat":"T"},"auto_class":"Undefined","provenance":{"generator":"x","seed":0,"parent_ids":[]}}"#;
        let pair: ImageTextPair = serde_json::from_str(line).unwrap();
        assert_eq!(
            pair.auto_class,
            RelationClass::Undefined(crate::taxonomy::InvalidCase::CaseD)
        );
        assert!(!pair.is_label_sound());
        let back = serde_json::to_string(&pair).unwrap();
        assert_eq!(back, line);

        let bad = line.replace(r#""sc":0"#, r#""sc":1"#);
        assert!(serde_json::from_str::<ImageTextPair>(&bad).is_err());
    }
}
