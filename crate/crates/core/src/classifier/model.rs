//! Trained model plus its JSON container.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::features::FeatureSchema;
use super::network::{train, Mlp, TrainConfig};
use super::HeadKind;
use crate::error::ClassifierError;

const FORMAT: &str = "forge-baseline-model";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingMetadata {
    pub config: TrainConfig,
    pub samples: usize,
    pub final_loss: f64,
    pub loss_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineModel {
    pub head: HeadKind,
    pub schema: FeatureSchema,
    pub schema_hash: String,
    pub network: Mlp,
    pub metadata: TrainingMetadata,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Container {
    format: String,
    version: u32,
    head: HeadKind,
    schema: FeatureSchema,
    schema_hash: String,
    input_dim: usize,
    hidden_dim: usize,
    output_dim: usize,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
    metadata: TrainingMetadata,
}

impl BaselineModel {
    /// Trains a head on `(features, label)` rows produced under `schema`.
    pub fn fit(
        head: HeadKind,
        schema: FeatureSchema,
        schema_hash: String,
        rows: &[(Vec<f64>, usize)],
        config: &TrainConfig,
    ) -> Result<Self, ClassifierError> {
        if let Some((x, _)) = rows.iter().find(|(x, _)| x.len() != schema.dim()) {
            return Err(ClassifierError::DimensionMismatch {
                expected: schema.dim(),
                got: x.len(),
            });
        }
        let out = train(rows, head.arity(), config)?;
        Ok(BaselineModel {
            head,
            schema,
            schema_hash,
            network: out.network,
            metadata: TrainingMetadata {
                config: *config,
                samples: rows.len(),
                final_loss: out.loss_trace.last().copied().unwrap_or(f64::NAN),
                loss_trace: out.loss_trace,
            },
        })
    }

    pub fn require_head(&self, head: HeadKind) -> Result<(), ClassifierError> {
        if self.head != head {
            return Err(ClassifierError::HeadMismatch {
                expected: head.to_string(),
                got: self.head.to_string(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, ClassifierError> {
        let n = &self.network;
        let c = Container {
            format: FORMAT.into(),
            version: VERSION,
            head: self.head,
            schema: self.schema,
            schema_hash: self.schema_hash.clone(),
            input_dim: n.input_dim,
            hidden_dim: n.hidden_dim,
            output_dim: n.output_dim,
            w1: n.w1.clone(),
            b1: n.b1.clone(),
            w2: n.w2.clone(),
            b2: n.b2.clone(),
            metadata: self.metadata.clone(),
        };
        Ok(serde_json::to_string(&c)?)
    }

    /// Parses a container and checks it against `expected_hash`.
    pub fn from_json(json: &str, expected_hash: &str) -> Result<Self, ClassifierError> {
        let c: Container = serde_json::from_str(json)?;
        if c.format != FORMAT || c.version != VERSION {
            return Err(ClassifierError::BadContainer(format!(
                "{} v{}",
                c.format, c.version
            )));
        }
        if c.schema_hash != expected_hash {
            return Err(ClassifierError::SchemaMismatch {
                expected: expected_hash.to_string(),
                found: c.schema_hash,
            });
        }
        if c.output_dim != c.head.arity() {
            return Err(ClassifierError::BadContainer(format!(
                "{} head with {} outputs",
                c.head, c.output_dim
            )));
        }
        if c.input_dim != c.schema.dim() {
            return Err(ClassifierError::BadContainer(format!(
                "input dimension {} does not match schema dimension {}",
                c.input_dim,
                c.schema.dim()
            )));
        }
        let shapes = [
            (c.w1.len(), c.hidden_dim * c.input_dim),
            (c.b1.len(), c.hidden_dim),
            (c.w2.len(), c.output_dim * c.hidden_dim),
            (c.b2.len(), c.output_dim),
        ];
        if shapes.iter().any(|(got, want)| got != want) {
            return Err(ClassifierError::BadContainer("weight array sizes".into()));
        }
        Ok(BaselineModel {
            head: c.head,
            schema: c.schema,
            schema_hash: c.schema_hash,
            network: Mlp {
                input_dim: c.input_dim,
                hidden_dim: c.hidden_dim,
                output_dim: c.output_dim,
                w1: c.w1,
                b1: c.b1,
                w2: c.w2,
                b2: c.b2,
            },
            metadata: c.metadata,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), ClassifierError> {
        let json = self.to_json()?;
        crate::corpus::write_atomic(path, |w| w.write_all(json.as_bytes())).map_err(|e| match e {
            crate::error::CorpusError::Io { path, source } => ClassifierError::Io { path, source },
            other => ClassifierError::BadContainer(other.to_string()),
        })
    }

    pub fn load(path: &Path, expected_hash: &str) -> Result<Self, ClassifierError> {
        let json = std::fs::read_to_string(path).map_err(|source| ClassifierError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&json, expected_hash)
    }

    /// Reads only the schema stored in a model file, so callers can rebuild
    /// the hash from their own lexicon before the checked load.
    pub fn peek_schema(path: &Path) -> Result<FeatureSchema, ClassifierError> {
        #[derive(Deserialize)]
        struct Peek {
            schema: FeatureSchema,
        }
        let json = std::fs::read_to_string(path).map_err(|source| ClassifierError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str::<Peek>(&json)?.schema)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> BaselineModel {
        let schema = FeatureSchema {
            hashed_text_dims: 2,
            hashed_tag_dims: 2,
            ..FeatureSchema::default()
        };
        let rows: Vec<(Vec<f64>, usize)> = (0..12)
            .map(|i| {
                let mut x = vec![0.0; schema.dim()];
                x[i % 3] = 1.0 + i as f64 / 7.0;
                (x, i % 3)
            })
            .collect();
        let cfg = TrainConfig {
            epochs: 3,
            hidden_dim: 5,
            ..TrainConfig::default()
        };
        BaselineModel::fit(HeadKind::Sc, schema, "h".into(), &rows, &cfg).unwrap()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = tiny();
        let back = BaselineModel::from_json(&m.to_json().unwrap(), "h").unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn schema_mismatch_is_refused() {
        let m = tiny();
        assert!(matches!(
            BaselineModel::from_json(&m.to_json().unwrap(), "other"),
            Err(ClassifierError::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn head_check() {
        let m = tiny();
        m.require_head(HeadKind::Sc).unwrap();
        assert!(matches!(
            m.require_head(HeadKind::Classic),
            Err(ClassifierError::HeadMismatch { .. })
        ));
    }

    #[test]
    fn save_load_and_peek() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = tiny();
        m.save(&path).unwrap();
        assert_eq!(BaselineModel::peek_schema(&path).unwrap(), m.schema);
        assert_eq!(BaselineModel::load(&path, "h").unwrap(), m);
    }
}
