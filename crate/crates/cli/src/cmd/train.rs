use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use forge_core::classifier::{
    argmax, extract_features, predict_proba, BaselineModel, FeatureSchema, HeadKind, TrainConfig,
};
use forge_core::corpus::{read_pairs, write_pairs, ImageTextPair};
use forge_core::rng::{derive_seed, rng_for};
use forge_core::taxonomy::RelationClass;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::config::{merge, required};
use crate::output::{write_json, Out};

// rng streams: split shuffles use SPLIT_STREAM + class index, heads use
// HEAD_STREAM + head index
const SPLIT_STREAM: u64 = 1 << 32;
const HEAD_STREAM: u64 = 2 << 32;

pub const SPLIT_FILE: &str = "split.json";
pub const HOLDOUT_FILE: &str = "holdout.jsonl";

pub fn model_file(head: HeadKind) -> String {
    format!("{}.model.json", head.as_str().to_ascii_lowercase())
}

#[derive(clap::Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// JSON file with any of the options below; flags win.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Corpus pairs file.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Directory receiving the models, the split and the held-out pairs.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fraction of each class held out for evaluation [default: 0.2].
    #[arg(long)]
    holdout: Option<f64>,
    /// Antonym lexicon (TSV); the bundled one by default.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Heads to train, comma separated [default: cmi,sc,stat,classic].
    #[arg(long, value_delimiter = ',')]
    heads: Option<Vec<HeadKind>>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    hidden_dim: Option<usize>,
    /// Weight samples by inverse class frequency.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    class_weighting: Option<bool>,
    /// Feature layout; config file only.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    schema: Option<FeatureSchema>,
}

#[derive(Serialize, Deserialize)]
pub struct Split {
    pub created_with: serde_json::Value,
    pub train: Vec<String>,
    pub holdout: Vec<String>,
}

#[derive(Serialize)]
struct HeadSummary {
    head: HeadKind,
    final_loss: f64,
    train_accuracy: f64,
}

#[derive(Serialize)]
struct Summary {
    train_pairs: usize,
    holdout_pairs: usize,
    heads: Vec<HeadSummary>,
}

/// Holds out `round(n * fraction)` pairs of every class; both sides keep
/// corpus order.
fn split(pairs: &[ImageTextPair], fraction: f64, seed: u64) -> BTreeSet<String> {
    let mut by_class: BTreeMap<RelationClass, Vec<&str>> = BTreeMap::new();
    for p in pairs {
        by_class.entry(p.auto_class).or_default().push(&p.id);
    }
    let mut holdout = BTreeSet::new();
    for (class, mut ids) in by_class {
        let mut rng = rng_for(seed, SPLIT_STREAM + class.index() as u64);
        ids.shuffle(&mut rng);
        let k = (ids.len() as f64 * fraction).round() as usize;
        holdout.extend(ids[..k].iter().map(|s| s.to_string()));
    }
    holdout
}

pub fn run(args: Args, out: &Out) -> Result<bool> {
    let opts = merge(args.config.as_deref(), &args)?;
    let corpus = required(opts.corpus.clone(), "corpus")?;
    let out_dir = required(opts.out_dir.clone(), "out-dir")?;
    let seed = opts.seed.unwrap_or(0);
    let fraction = opts.holdout.unwrap_or(0.2);
    if !(0.0..1.0).contains(&fraction) {
        bail!("--holdout must be in [0, 1), got {fraction}");
    }
    let heads = opts.heads.clone().unwrap_or_else(|| HeadKind::ALL.to_vec());
    let schema = opts.schema.unwrap_or_default();
    schema.validate()?;
    let lex = super::lexicon(opts.lexicon.as_deref())?;
    let schema_hash = schema.hash(&lex);
    let defaults = TrainConfig::default();
    let base = TrainConfig {
        epochs: opts.epochs.unwrap_or(defaults.epochs),
        learning_rate: opts.learning_rate.unwrap_or(defaults.learning_rate),
        batch_size: opts.batch_size.unwrap_or(defaults.batch_size),
        hidden_dim: opts.hidden_dim.unwrap_or(defaults.hidden_dim),
        class_weighting: opts.class_weighting.unwrap_or(defaults.class_weighting),
        ..defaults
    };
    base.validate()?;

    let pairs = read_pairs(&corpus)?;
    if let Some(bad) = pairs.iter().find(|p| !p.is_label_sound()) {
        bail!("pair {} has an unusable label {}", bad.id, bad.auto_class);
    }
    let held = split(&pairs, fraction, seed);
    let (holdout, train): (Vec<&ImageTextPair>, Vec<&ImageTextPair>) =
        pairs.iter().partition(|p| held.contains(&p.id));
    if train.is_empty() {
        bail!("no training pairs left after the holdout split");
    }
    let features: Vec<Vec<f64>> = train
        .iter()
        .map(|p| extract_features(p, &schema, &lex).values)
        .collect();

    std::fs::create_dir_all(&out_dir)?;
    let mut summary = Summary {
        train_pairs: train.len(),
        holdout_pairs: holdout.len(),
        heads: Vec::new(),
    };
    for head in heads {
        let rows = train
            .iter()
            .zip(&features)
            .map(|(p, x)| Ok((x.clone(), head.label_for(p.auto_class)?)))
            .collect::<Result<Vec<_>>>()?;
        let config = TrainConfig {
            seed: derive_seed(seed, HEAD_STREAM + head as u64),
            ..base
        };
        let model = BaselineModel::fit(head, schema, schema_hash.clone(), &rows, &config)?;
        model.save(&out_dir.join(model_file(head)))?;
        summary.heads.push(HeadSummary {
            head,
            final_loss: model.metadata.final_loss,
            train_accuracy: accuracy(&model, &rows)?,
        });
    }

    let snapshot = serde_json::to_value(&opts)?;
    write_json(
        &out_dir.join(SPLIT_FILE),
        &Split {
            created_with: snapshot,
            train: train.iter().map(|p| p.id.clone()).collect(),
            holdout: holdout.iter().map(|p| p.id.clone()).collect(),
        },
    )?;
    let holdout: Vec<ImageTextPair> = holdout.into_iter().cloned().collect();
    write_pairs(&out_dir.join(HOLDOUT_FILE), &holdout)?;

    out.report(&summary, || text(&summary, &out_dir))?;
    Ok(true)
}

fn accuracy(model: &BaselineModel, rows: &[(Vec<f64>, usize)]) -> Result<f64> {
    let mut hits = 0usize;
    for (x, label) in rows {
        let f = forge_core::classifier::FeatureVector { values: x.clone() };
        hits += usize::from(argmax(&predict_proba(model, &f)?) == *label);
    }
    Ok(hits as f64 / rows.len() as f64)
}

fn text(summary: &Summary, out_dir: &Path) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "trained on {} pairs, held out {}",
        summary.train_pairs, summary.holdout_pairs
    );
    let _ = writeln!(s, "{:<8} | {:>10} | {:>9}", "Head", "Final loss", "Train acc");
    for h in &summary.heads {
        let _ = writeln!(
            s,
            "{:<8} | {:>10.4} | {:>8.1}%",
            h.head.as_str(),
            h.final_loss,
            h.train_accuracy * 100.0
        );
    }
    let _ = writeln!(s, "models in {}", out_dir.display());
    s
}
