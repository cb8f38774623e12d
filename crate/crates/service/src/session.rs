//! Annotation session: every pair goes to every registered annotator, each
//! in their own seeded order. Labels land in an append-only JSONL log that
//! is the single source of truth; all other state is rebuilt by replay.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, SubsecRound, Utc};
use forge_core::corpus::ImageTextPair;
use forge_core::eval::{
    krippendorff_alpha, majority_vote, reliability_from_records, AnnotatorLabel, ExclusionReason,
    LabelRecord, VoteOutcome,
};
use forge_core::rng::rng_for;
use forge_core::taxonomy::RelationClass;
use forge_core::text::fnv1a;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

pub type Clock = Arc<dyn Fn() -> DateTime<Utc> + Send + Sync>;

pub fn system_clock() -> Clock {
    Arc::new(|| Utc::now().trunc_subsecs(3))
}

/// What an annotator sees: no automatic labels, no provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlindPair {
    pub id: String,
    pub image_url: String,
    pub text: String,
}

impl BlindPair {
    pub fn of(pair: &ImageTextPair) -> Self {
        BlindPair {
            id: pair.id.clone(),
            image_url: image_url(&pair.image_ref),
            text: pair.text.clone(),
        }
    }
}

/// Remote references pass through; everything else is served under /media.
pub fn image_url(image_ref: &str) -> String {
    if image_ref.starts_with("http://") || image_ref.starts_with("https://") {
        image_ref.to_string()
    } else {
        format!("/media/{}", image_ref.trim_start_matches('/'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NextPair {
    Pair { pair: BlindPair, position: usize, total: usize },
    Done { total: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ack {
    pub pair_id: String,
    pub annotator: String,
    pub label: AnnotatorLabel,
    pub labeled: usize,
    pub total: usize,
    pub log_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotatorProgress {
    pub labeled: usize,
    pub remaining: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub total_pairs: usize,
    pub log_length: usize,
    /// Pairs labeled by every annotator.
    pub complete_pairs: usize,
    pub annotators: BTreeMap<String, AnnotatorProgress>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum VoteState {
    Resolved { class: RelationClass, votes: usize },
    Excluded { reason: ExclusionReason, votes: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementSnapshot {
    /// `None` while fewer than two ratings exist on any pair or only one
    /// category has been used.
    pub alpha: Option<f64>,
    pub status: String,
    pub pairable_units: usize,
    pub unsure_as_category: bool,
    pub votes: BTreeMap<String, VoteState>,
}

pub const INSUFFICIENT_DATA: &str = "insufficient data";

/// Alpha and per-pair vote states over the effective labels of `records`.
pub fn agreement_of(records: &[LabelRecord], unsure_as_category: bool) -> AgreementSnapshot {
    let effective = effective_records(records);
    let matrix = reliability_from_records(&effective, unsure_as_category);
    let alpha = krippendorff_alpha(&matrix).ok();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &effective {
        *counts.entry(r.pair_id.as_str()).or_default() += 1;
    }
    let votes = majority_vote(&effective)
        .into_iter()
        .map(|(pair, outcome)| {
            let votes = counts[pair.as_str()];
            let state = match outcome {
                VoteOutcome::Resolved(class) => VoteState::Resolved { class, votes },
                VoteOutcome::Excluded(reason) => VoteState::Excluded { reason, votes },
            };
            (pair, state)
        })
        .collect();
    AgreementSnapshot {
        alpha,
        status: if alpha.is_some() { "ok" } else { INSUFFICIENT_DATA }.to_string(),
        pairable_units: matrix.pairable_units(),
        unsure_as_category,
        votes,
    }
}

/// The latest record per (pair, annotator), ordered by pair then annotator.
pub fn effective_records(records: &[LabelRecord]) -> Vec<LabelRecord> {
    let mut latest: BTreeMap<(&str, &str), &LabelRecord> = BTreeMap::new();
    for r in records {
        latest.insert((r.pair_id.as_str(), r.annotator_id.as_str()), r);
    }
    latest.into_values().cloned().collect()
}

/// One line of an export file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExportLine {
    Label(LabelRecord),
    Resolved { pair_id: String, class: RelationClass },
    Excluded { pair_id: String, reason: ExclusionReason },
}

/// Raw log plus the ground truth it implies.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Export {
    pub records: Vec<LabelRecord>,
    pub resolved: BTreeMap<String, RelationClass>,
    pub excluded: BTreeMap<String, ExclusionReason>,
}

impl Export {
    pub fn from_records(records: Vec<LabelRecord>) -> Self {
        let mut resolved = BTreeMap::new();
        let mut excluded = BTreeMap::new();
        for (pair, outcome) in majority_vote(&effective_records(&records)) {
            match outcome {
                VoteOutcome::Resolved(c) => {
                    resolved.insert(pair, c);
                }
                VoteOutcome::Excluded(r) => {
                    excluded.insert(pair, r);
                }
            }
        }
        Export {
            records,
            resolved,
            excluded,
        }
    }

    /// Label lines in log order, then resolved pairs, then excluded pairs.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let lines = self
            .records
            .iter()
            .cloned()
            .map(ExportLine::Label)
            .chain(self.resolved.iter().map(|(p, c)| ExportLine::Resolved {
                pair_id: p.clone(),
                class: *c,
            }))
            .chain(self.excluded.iter().map(|(p, r)| ExportLine::Excluded {
                pair_id: p.clone(),
                reason: *r,
            }));
        for line in lines {
            out.push_str(&serde_json::to_string(&line).expect("export lines serialize"));
            out.push('\n');
        }
        out
    }

    /// Reads the label lines; resolved and excluded sets are recomputed
    /// and must agree with the file.
    pub fn from_jsonl(text: &str) -> Result<Self, ServiceError> {
        let mut records = Vec::new();
        let mut resolved = BTreeMap::new();
        let mut excluded = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed: ExportLine =
                serde_json::from_str(line).map_err(|e| ServiceError::Malformed {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            match parsed {
                ExportLine::Label(r) => records.push(r),
                ExportLine::Resolved { pair_id, class } => {
                    resolved.insert(pair_id, class);
                }
                ExportLine::Excluded { pair_id, reason } => {
                    excluded.insert(pair_id, reason);
                }
            }
        }
        let export = Export::from_records(records);
        if export.resolved != resolved || export.excluded != excluded {
            return Err(ServiceError::Malformed {
                line: 0,
                message: "resolved/excluded entries disagree with the label records".into(),
            });
        }
        Ok(export)
    }
}

pub struct AnnotationSession {
    pairs: BTreeMap<String, ImageTextPair>,
    annotators: BTreeSet<String>,
    seed: u64,
    unsure_as_category: bool,
    /// Serving order per annotator, fixed at registration.
    orders: BTreeMap<String, Vec<String>>,
    records: Vec<LabelRecord>,
    labeled: BTreeMap<String, BTreeSet<String>>,
    log: Option<(PathBuf, File)>,
    clock: Clock,
}

impl std::fmt::Debug for AnnotationSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnnotationSession")
            .field("pairs", &self.pairs.len())
            .field("annotators", &self.annotators)
            .field("records", &self.records.len())
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub annotators: Vec<String>,
    pub seed: u64,
    pub unsure_as_category: bool,
    /// Without a log path labels live only in memory.
    pub log_path: Option<PathBuf>,
}

impl AnnotationSession {
    /// Opens a session and replays an existing log, if any.
    pub fn open(
        pairs: Vec<ImageTextPair>,
        config: SessionConfig,
        clock: Clock,
    ) -> Result<Self, ServiceError> {
        let annotators: BTreeSet<String> = config
            .annotators
            .iter()
            .map(|a| a.trim().to_string())
            .filter(|a| !a.is_empty())
            .collect();
        if annotators.is_empty() {
            return Err(ServiceError::Config("at least one annotator is required".into()));
        }
        let mut by_id = BTreeMap::new();
        for p in pairs {
            let id = p.id.clone();
            if by_id.insert(id.clone(), p).is_some() {
                return Err(ServiceError::Config(format!("duplicate pair id {id}")));
            }
        }
        let ids: Vec<String> = by_id.keys().cloned().collect();
        let orders = annotators
            .iter()
            .map(|a| {
                let mut order = ids.clone();
                order.shuffle(&mut rng_for(config.seed, fnv1a(a.as_bytes())));
                (a.clone(), order)
            })
            .collect();
        let mut session = AnnotationSession {
            pairs: by_id,
            labeled: annotators.iter().map(|a| (a.clone(), BTreeSet::new())).collect(),
            annotators,
            seed: config.seed,
            unsure_as_category: config.unsure_as_category,
            orders,
            records: Vec::new(),
            log: None,
            clock,
        };
        if let Some(path) = config.log_path {
            for record in replay_log(&path)? {
                session.apply(record)?;
            }
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&path)
                .map_err(|source| ServiceError::Io {
                    path: path.clone(),
                    source,
                })?;
            session.log = Some((path, file));
        }
        Ok(session)
    }

    fn apply(&mut self, record: LabelRecord) -> Result<(), ServiceError> {
        if !self.pairs.contains_key(&record.pair_id) {
            return Err(ServiceError::UnknownPair(record.pair_id));
        }
        let Some(done) = self.labeled.get_mut(&record.annotator_id) else {
            return Err(ServiceError::UnknownAnnotator(record.annotator_id));
        };
        done.insert(record.pair_id.clone());
        self.records.push(record);
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn annotators(&self) -> &BTreeSet<String> {
        &self.annotators
    }

    pub fn records(&self) -> &[LabelRecord] {
        &self.records
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn serving_order(&self, annotator: &str) -> Result<&[String], ServiceError> {
        self.orders
            .get(annotator)
            .map(Vec::as_slice)
            .ok_or_else(|| ServiceError::UnknownAnnotator(annotator.to_string()))
    }

    /// The first pair in the annotator's order they have not labeled yet.
    /// Repeated calls without a submission return the same pair.
    pub fn next_pair(&self, annotator: &str) -> Result<NextPair, ServiceError> {
        let order = self.serving_order(annotator)?;
        let done = &self.labeled[annotator];
        let total = order.len();
        Ok(match order.iter().find(|id| !done.contains(*id)) {
            Some(id) => NextPair::Pair {
                pair: BlindPair::of(&self.pairs[id]),
                position: done.len() + 1,
                total,
            },
            None => NextPair::Done { total },
        })
    }

    /// Appends a label. A later label for the same (pair, annotator)
    /// supersedes the earlier one.
    pub fn submit(&mut self, annotator: &str, pair_id: &str, label: &str) -> Result<Ack, ServiceError> {
        if !self.annotators.contains(annotator) {
            return Err(ServiceError::UnknownAnnotator(annotator.to_string()));
        }
        if !self.pairs.contains_key(pair_id) {
            return Err(ServiceError::UnknownPair(pair_id.to_string()));
        }
        let label: AnnotatorLabel = label.parse()?;
        let record = LabelRecord {
            pair_id: pair_id.to_string(),
            annotator_id: annotator.to_string(),
            label,
            timestamp: (self.clock)(),
        };
        if let Some((path, file)) = &mut self.log {
            let mut line = serde_json::to_string(&record).expect("records serialize");
            line.push('\n');
            file.write_all(line.as_bytes())
                .and_then(|_| file.sync_data())
                .map_err(|source| ServiceError::Io {
                    path: path.clone(),
                    source,
                })?;
        }
        self.apply(record)?;
        Ok(Ack {
            pair_id: pair_id.to_string(),
            annotator: annotator.to_string(),
            label,
            labeled: self.labeled[annotator].len(),
            total: self.pairs.len(),
            log_length: self.records.len(),
        })
    }

    /// Effective label per (pair, annotator).
    pub fn effective_labels(&self) -> BTreeMap<(String, String), AnnotatorLabel> {
        effective_records(&self.records)
            .into_iter()
            .map(|r| ((r.pair_id, r.annotator_id), r.label))
            .collect()
    }

    pub fn progress(&self) -> Progress {
        let total = self.pairs.len();
        let complete_pairs = self
            .pairs
            .keys()
            .filter(|p| self.labeled.values().all(|done| done.contains(*p)))
            .count();
        Progress {
            total_pairs: total,
            log_length: self.records.len(),
            complete_pairs,
            annotators: self
                .labeled
                .iter()
                .map(|(a, done)| {
                    (
                        a.clone(),
                        AnnotatorProgress {
                            labeled: done.len(),
                            remaining: total - done.len(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn agreement_snapshot(&self) -> AgreementSnapshot {
        agreement_of(&self.records, self.unsure_as_category)
    }

    pub fn export(&self) -> Export {
        Export::from_records(self.records.clone())
    }
}

/// Reads a label log. A final line without its newline is the residue of an
/// interrupted append; it is dropped and cut from the file.
pub fn replay_log(path: &Path) -> Result<Vec<LabelRecord>, ServiceError> {
    let io = |source| ServiceError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io(e)),
    };
    let mut reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut good_bytes = 0u64;
    let mut buf = String::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf).map_err(io)?;
        if n == 0 {
            break;
        }
        line_no += 1;
        if !buf.ends_with('\n') {
            OpenOptions::new()
                .write(true)
                .open(path)
                .and_then(|f| f.set_len(good_bytes))
                .map_err(io)?;
            break;
        }
        good_bytes += n as u64;
        if buf.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(buf.trim_end()).map_err(|e| ServiceError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}
