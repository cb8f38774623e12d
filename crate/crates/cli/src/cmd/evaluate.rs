use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use forge_core::corpus::read_pairs;
use forge_core::eval::{
    accuracy_table, augmentation_quality_report, classification_report, krippendorff_alpha,
    metric_accuracy, pct, reliability_from_records, EvalReport, MetricAccuracy,
};
use forge_core::taxonomy::RelationClass;
use forge_service::session::effective_records;
use forge_service::Export;
use serde::{Deserialize, Serialize};

use super::predict::{Mode, Predictions};
use crate::config::merge;
use crate::output::{write_json, Out};

#[derive(clap::Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// JSON file with any of the options below; flags win.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Predictions written by `forge predict`.
    #[arg(long)]
    predictions: Option<PathBuf>,
    /// Pairs file whose automatic labels serve as truth, or are scored
    /// against `--human`.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Annotation export; its resolved labels are the human ground truth.
    #[arg(long)]
    human: Option<PathBuf>,
    /// Count Unsure as its own category when computing agreement [default: true].
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    unsure_as_category: Option<bool>,
    /// Report file (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Agreement {
    alpha: Option<f64>,
    pairable_units: usize,
    resolved: usize,
    excluded: usize,
}

#[derive(Serialize)]
struct Report {
    created_with: serde_json::Value,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    report: EvalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric_accuracy: Option<MetricAccuracy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<Agreement>,
}

fn auto_labels(path: &PathBuf) -> Result<BTreeMap<String, RelationClass>> {
    Ok(read_pairs(path)?.into_iter().map(|p| (p.id, p.auto_class)).collect())
}

pub fn run(args: Args, out: &Out) -> Result<bool> {
    let opts = merge(args.config.as_deref(), &args)?;
    let export = match &opts.human {
        Some(path) => {
            let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(Export::from_jsonl(&raw).with_context(|| format!("parsing {}", path.display()))?)
        }
        None => None,
    };

    let report = match (&opts.predictions, &opts.truth, &export) {
        (Some(pred_path), truth, human) => {
            let truth = match (truth, human) {
                (_, Some(export)) => export.resolved.clone(),
                (Some(path), None) => auto_labels(path)?,
                (None, None) => bail!("--predictions needs --truth or --human"),
            };
            let preds = Predictions::read(pred_path)?;
            let mut classes = BTreeMap::new();
            let mut triples = BTreeMap::new();
            for p in &preds.predictions {
                if !truth.contains_key(&p.pair_id) && human.is_some() {
                    // pairs the annotators excluded carry no ground truth
                    continue;
                }
                classes.insert(p.pair_id.clone(), p.relation()?);
                if let Some(t) = p.triple {
                    triples.insert(p.pair_id.clone(), t);
                }
            }
            Report {
                created_with: serde_json::to_value(&opts)?,
                kind: "classification",
                mode: Some(preds.mode),
                report: classification_report(&classes, &truth)?,
                metric_accuracy: (!triples.is_empty())
                    .then(|| metric_accuracy(&triples, &truth))
                    .transpose()?,
                agreement: None,
            }
        }
        (None, Some(path), Some(export)) => {
            let unsure = opts.unsure_as_category.unwrap_or(true);
            let matrix = reliability_from_records(&effective_records(&export.records), unsure);
            Report {
                created_with: serde_json::to_value(&opts)?,
                kind: "augmentation_quality",
                mode: None,
                report: augmentation_quality_report(&auto_labels(path)?, &export.resolved)?,
                metric_accuracy: None,
                agreement: Some(Agreement {
                    alpha: krippendorff_alpha(&matrix).ok(),
                    pairable_units: matrix.pairable_units(),
                    resolved: export.resolved.len(),
                    excluded: export.excluded.len(),
                }),
            }
        }
        _ => bail!("give --predictions with --truth or --human, or --truth with --human"),
    };

    if let Some(path) = &opts.out {
        write_json(path, &report)?;
    }
    out.report(&report, || text(&report))?;
    Ok(true)
}

fn text(r: &Report) -> String {
    let mut s = String::new();
    match r.kind {
        "classification" => {
            s.push_str(&r.report.confusion_table());
            let _ = writeln!(s, "\naccuracy {} on {} pairs", pct(r.report.accuracy), r.report.total);
            if r.mode == Some(Mode::Cascade) {
                let _ = writeln!(s, "undefined rate {}", pct(r.report.undefined_rate()));
            }
            if let Some(m) = &r.metric_accuracy {
                s.push('\n');
                let cascade = (r.mode == Some(Mode::Cascade)).then_some(r.report.accuracy).flatten();
                s.push_str(&accuracy_table(m, cascade, None));
            }
        }
        _ => {
            s.push_str(&r.report.quality_table());
            if let Some(a) = &r.agreement {
                let alpha = a.alpha.map_or("undefined".to_string(), |v| format!("{v:.3}"));
                let _ = writeln!(
                    s,
                    "\nalpha {alpha} over {} units; {} resolved, {} excluded",
                    a.pairable_units, a.resolved, a.excluded
                );
            }
        }
    }
    s
}
