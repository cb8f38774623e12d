use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use forge_core::classifier::{
    classic_predict, extract_features, predict_triple, BaselineModel, HeadKind,
};
use forge_core::corpus::read_pairs;
use forge_core::taxonomy::{classify_triple, InvalidCase, MetricTriple, RelationClass};
use serde::{Deserialize, Serialize};

use super::train::model_file;
use crate::config::{merge, required};
use crate::output::{write_json, Out};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One 8-way head.
    Classic,
    /// Three metric heads combined through the taxonomy; may yield Undefined.
    Cascade,
}

#[derive(clap::Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// JSON file with any of the options below; flags win.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Directory written by `forge train`.
    #[arg(long)]
    models: Option<PathBuf>,
    /// Pairs file to label.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Predictions file (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Antonym lexicon the models were trained with.
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prediction {
    pub pair_id: String,
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<InvalidCase>,
    /// Per-head levels, cascade mode only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<MetricTriple>,
}

impl Prediction {
    fn new(pair_id: &str, class: RelationClass, triple: Option<MetricTriple>) -> Self {
        Prediction {
            pair_id: pair_id.to_string(),
            class: class.name().to_string(),
            case: class.undefined_case(),
            triple,
        }
    }

    pub fn relation(&self) -> Result<RelationClass> {
        Ok(match self.triple {
            Some(t) => classify_triple(t),
            None => RelationClass::from_name_with_case(&self.class, self.case)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct Predictions {
    pub created_with: serde_json::Value,
    pub mode: Mode,
    pub predictions: Vec<Prediction>,
}

impl Predictions {
    pub fn read(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))
    }
}

fn load(dir: &Path, head: HeadKind, lex_hash: impl Fn(&Path) -> Result<String>) -> Result<BaselineModel> {
    let path = dir.join(model_file(head));
    let hash = lex_hash(&path)?;
    let model = BaselineModel::load(&path, &hash).with_context(|| format!("loading {}", path.display()))?;
    model.require_head(head)?;
    Ok(model)
}

pub fn run(args: Args, out: &Out) -> Result<bool> {
    let opts = merge(args.config.as_deref(), &args)?;
    let models = required(opts.models.clone(), "models")?;
    let input = required(opts.input.clone(), "input")?;
    let dest = required(opts.out.clone(), "out")?;
    let mode = opts.mode.unwrap_or(Mode::Classic);
    let lex = super::lexicon(opts.lexicon.as_deref())?;
    // the expected hash is recomputed from the schema a model declares, so a
    // different lexicon is refused at load time
    let hash_of = |path: &Path| -> Result<String> {
        Ok(BaselineModel::peek_schema(path)
            .with_context(|| format!("reading {}", path.display()))?
            .hash(&lex))
    };

    let pairs = read_pairs(&input)?;
    let predictions = match mode {
        Mode::Classic => {
            let m = load(&models, HeadKind::Classic, hash_of)?;
            pairs
                .iter()
                .map(|p| {
                    let f = extract_features(p, &m.schema, &lex);
                    Ok(Prediction::new(&p.id, classic_predict(&m, &f)?, None))
                })
                .collect::<Result<Vec<_>>>()?
        }
        Mode::Cascade => {
            let cmi = load(&models, HeadKind::Cmi, hash_of)?;
            let sc = load(&models, HeadKind::Sc, hash_of)?;
            let stat = load(&models, HeadKind::Stat, hash_of)?;
            pairs
                .iter()
                .map(|p| {
                    let f = extract_features(p, &cmi.schema, &lex);
                    let t = predict_triple(&cmi, &sc, &stat, &f)?;
                    Ok(Prediction::new(&p.id, classify_triple(t), Some(t)))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let doc = Predictions {
        created_with: serde_json::to_value(&opts)?,
        mode,
        predictions,
    };
    write_json(&dest, &doc)?;

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for p in &doc.predictions {
        *counts.entry(p.class.as_str()).or_default() += 1;
    }
    out.report(&counts, || {
        let mut s = String::new();
        let _ = writeln!(s, "{:<18} | {:>6}", "Predicted", "Pairs");
        for (class, n) in &counts {
            let _ = writeln!(s, "{class:<18} | {n:>6}");
        }
        let _ = writeln!(s, "wrote {} predictions to {}", doc.predictions.len(), dest.display());
        s
    })?;
    Ok(true)
}
