//! Antonym substitution for negative-sample generation.
//!
//! Positive pairs (Complementary, Illustration, Anchorage) are turned into
//! their negative counterparts by replacing lexicon keywords in the text with
//! opposites. The image is left alone, so the concepts are still shared
//! (cmi=1) while the text now misdescribes them (sc=-1).

use std::collections::HashMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::corpus::{ImageTextPair, Provenance};
use crate::error::AugmentError;
use crate::taxonomy::{RelationClass, ScLevel};
use crate::text::{is_word_char, word_spans};

const BUNDLED_LEXICON: &str = include_str!("../data/antonyms.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub keyword: String,
    pub replacement: String,
}

/// Longest-first phrase index over case-folded words.
#[derive(Debug, Clone, Default)]
struct PhraseIndex {
    phrases: Vec<Vec<String>>,
    // first word -> phrase ids, longest phrase first
    by_first: HashMap<String, Vec<usize>>,
}

impl PhraseIndex {
    fn build<'a>(phrases: impl IntoIterator<Item = &'a str>) -> Self {
        let mut index = PhraseIndex::default();
        let mut seen = HashMap::new();
        for phrase in phrases {
            let words: Vec<String> = phrase.split(' ').map(str::to_lowercase).collect();
            if seen.contains_key(&words) {
                continue;
            }
            seen.insert(words.clone(), ());
            let id = index.phrases.len();
            index.by_first.entry(words[0].clone()).or_default().push(id);
            index.phrases.push(words);
        }
        let phrases = &index.phrases;
        for ids in index.by_first.values_mut() {
            // stable: equal lengths keep lexicon order
            ids.sort_by_key(|&id| std::cmp::Reverse(phrases[id].len()));
        }
        index
    }

    /// Matches left to right, longest phrase first, never overlapping.
    /// Yields (phrase id, byte range in text).
    fn scan(&self, text: &str) -> Vec<(usize, std::ops::Range<usize>)> {
        let spans = word_spans(text);
        let lowered: Vec<String> = spans.iter().map(|r| text[r.clone()].to_lowercase()).collect();
        let mut hits = Vec::new();
        let mut i = 0;
        while i < spans.len() {
            let matched = self.by_first.get(&lowered[i]).and_then(|ids| {
                ids.iter().copied().find(|&id| {
                    let words = &self.phrases[id];
                    let end = i + words.len();
                    end <= spans.len()
                        && words.iter().zip(&lowered[i..end]).all(|(w, t)| w == t)
                        && (i + 1..end).all(|j| &text[spans[j - 1].end..spans[j].start] == " ")
                })
            });
            match matched {
                Some(id) => {
                    let last = i + self.phrases[id].len() - 1;
                    hits.push((id, spans[i].start..spans[last].end));
                    i = last + 1;
                }
                None => i += 1,
            }
        }
        hits
    }
}

/// Ordered keyword -> replacement table.
#[derive(Debug, Clone)]
pub struct AntonymLexicon {
    entries: Vec<LexiconEntry>,
    keywords: PhraseIndex,
    replacements: PhraseIndex,
}

impl AntonymLexicon {
    pub fn from_entries(entries: Vec<LexiconEntry>) -> Result<Self, AugmentError> {
        let mut first_seen: HashMap<String, usize> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            validate_phrase(&e.keyword).map_err(|message| AugmentError::Malformed {
                line: i + 1,
                message: format!("keyword {:?}: {message}", e.keyword),
            })?;
            if e.replacement.trim().is_empty() {
                return Err(AugmentError::Malformed {
                    line: i + 1,
                    message: "empty replacement".into(),
                });
            }
            let key = e.keyword.to_lowercase();
            if let Some(&first) = first_seen.get(&key) {
                return Err(AugmentError::DuplicateKeyword {
                    line: i + 1,
                    first_line: first + 1,
                    keyword: e.keyword.clone(),
                });
            }
            first_seen.insert(key, i);
        }
        let keywords = PhraseIndex::build(entries.iter().map(|e| e.keyword.as_str()));
        let replacements = PhraseIndex::build(
            entries
                .iter()
                .map(|e| e.replacement.as_str())
                .filter(|r| validate_phrase(r).is_ok()),
        );
        Ok(AntonymLexicon {
            entries,
            keywords,
            replacements,
        })
    }

    /// Parses TSV text. Reported line numbers are 1-based file lines.
    pub fn parse(tsv: &str) -> Result<Self, AugmentError> {
        let mut entries = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in tsv.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [keyword, replacement] = cols[..] else {
                return Err(AugmentError::Malformed {
                    line: line_no,
                    message: format!("expected 2 tab-separated columns, found {}", cols.len()),
                });
            };
            let (keyword, replacement) = (keyword.trim(), replacement.trim());
            if keyword.is_empty() || replacement.is_empty() {
                return Err(AugmentError::Malformed {
                    line: line_no,
                    message: "empty keyword or replacement".into(),
                });
            }
            entries.push(LexiconEntry {
                keyword: keyword.to_string(),
                replacement: replacement.to_string(),
            });
            lines.push(line_no);
        }
        // remap entry ordinals in errors back to file lines
        Self::from_entries(entries).map_err(|e| match e {
            AugmentError::Malformed { line, message } => AugmentError::Malformed {
                line: lines[line - 1],
                message,
            },
            AugmentError::DuplicateKeyword {
                line,
                first_line,
                keyword,
            } => AugmentError::DuplicateKeyword {
                line: lines[line - 1],
                first_line: lines[first_line - 1],
                keyword,
            },
            other => other,
        })
    }

    /// The lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON).expect("bundled lexicon is well-formed")
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// SHA-256 over the entries, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for e in &self.entries {
            h.update(e.keyword.as_bytes());
            h.update([0]);
            h.update(e.replacement.as_bytes());
            h.update([b'\n']);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Number of keyword occurrences substitution would replace.
    pub fn keyword_hits(&self, text: &str) -> usize {
        self.keywords.scan(text).len()
    }

    /// Number of replacement-phrase occurrences in the text.
    pub fn replacement_hits(&self, text: &str) -> usize {
        self.replacements.scan(text).len()
    }
}

fn validate_phrase(phrase: &str) -> Result<(), String> {
    if phrase.is_empty() {
        return Err("empty".into());
    }
    for word in phrase.split(' ') {
        if word.is_empty() || !word.chars().all(is_word_char) {
            return Err("words must be single-space separated word characters".into());
        }
    }
    Ok(())
}

pub fn load_lexicon(path: &Path) -> Result<AntonymLexicon, AugmentError> {
    let raw = std::fs::read_to_string(path).map_err(|source| AugmentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    AntonymLexicon::parse(&raw)
}

fn match_case(matched: &str, replacement: &str) -> String {
    let upper = matched.chars().next().is_some_and(char::is_uppercase);
    if !upper {
        return replacement.to_string();
    }
    let mut chars = replacement.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Replaces every keyword occurrence, scanning left to right and trying the
/// longest keyword first. Text outside the matches is copied byte for byte.
pub fn substitute_antonyms(text: &str, lex: &AntonymLexicon) -> (String, usize) {
    let hits = lex.keywords.scan(text);
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for (id, range) in &hits {
        out.push_str(&text[cursor..range.start]);
        let replacement = &lex.entries[*id].replacement;
        out.push_str(&match_case(&text[range.clone()], replacement));
        cursor = range.end;
    }
    out.push_str(&text[cursor..]);
    (out, hits.len())
}

/// The negative counterpart of a positive class.
pub fn negative_of(class: RelationClass) -> Option<RelationClass> {
    match class {
        RelationClass::Complementary => Some(RelationClass::Contrasting),
        RelationClass::Illustration => Some(RelationClass::BadIllustration),
        RelationClass::Anchorage => Some(RelationClass::BadAnchorage),
        _ => None,
    }
}

/// Corrupts a positive pair into its negative counterpart.
pub fn derive_negative(
    pair: &ImageTextPair,
    lex: &AntonymLexicon,
) -> Result<ImageTextPair, AugmentError> {
    let class = negative_of(pair.auto_class).ok_or_else(|| AugmentError::NotPositive {
        pair_id: pair.id.clone(),
        class: pair.auto_class,
    })?;
    let (text, replacements) = substitute_antonyms(&pair.text, lex);
    if replacements == 0 {
        return Err(AugmentError::NoReplacement {
            pair_id: pair.id.clone(),
        });
    }
    let mut auto_triple = pair.auto_triple;
    auto_triple.sc = ScLevel::Neg;
    Ok(ImageTextPair {
        id: format!("{}-neg", pair.id),
        image_ref: pair.image_ref.clone(),
        text,
        concept_tags: pair.concept_tags.clone(),
        auto_triple,
        auto_class: class,
        provenance: Provenance {
            generator: format!("{}+antonyms", pair.provenance.generator),
            seed: pair.provenance.seed,
            parent_ids: vec![pair.id.clone()],
            replacements: Some(replacements),
        },
    })
}
