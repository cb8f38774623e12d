//! Confusion matrices, per-class precision/recall and the text layouts used
//! to print them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::EvalError;
use crate::taxonomy::{triple_of_class, MetricTriple, RelationClass};

/// Rows and columns: the eight classes in canonical order, then Undefined.
pub const MATRIX_DIM: usize = 9;
const UNDEFINED_COL: usize = 8;

/// Classification metrics. Ratios whose denominator is zero are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    /// Ground-truth rows by predicted columns. The Undefined row is always
    /// zero since ground truth can not be Undefined.
    pub confusion: Vec<Vec<u64>>,
    pub precision: Vec<Option<f64>>,
    pub recall: Vec<Option<f64>>,
    pub support: Vec<u64>,
    pub accuracy: Option<f64>,
    pub total: u64,
    pub undefined_predictions: u64,
}

impl EvalReport {
    /// Derives every metric from a confusion matrix. Accepts 8 columns (no
    /// rejection column) or 9.
    pub fn from_confusion(matrix: &[Vec<u64>]) -> Self {
        let mut confusion = vec![vec![0u64; MATRIX_DIM]; MATRIX_DIM];
        for (r, row) in matrix.iter().take(8).enumerate() {
            for (c, &n) in row.iter().take(MATRIX_DIM).enumerate() {
                confusion[r][c] = n;
            }
        }
        let support: Vec<u64> = (0..8).map(|r| confusion[r].iter().sum()).collect();
        let predicted: Vec<u64> = (0..8).map(|c| (0..8).map(|r| confusion[r][c]).sum()).collect();
        let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
        let precision = (0..8).map(|i| ratio(confusion[i][i], predicted[i])).collect();
        let recall = (0..8).map(|i| ratio(confusion[i][i], support[i])).collect();
        let total: u64 = support.iter().sum();
        let trace: u64 = (0..8).map(|i| confusion[i][i]).sum();
        let undefined_predictions = (0..8).map(|r| confusion[r][UNDEFINED_COL]).sum();
        EvalReport {
            confusion,
            precision,
            recall,
            support,
            accuracy: ratio(trace, total),
            total,
            undefined_predictions,
        }
    }

    pub fn undefined_rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.undefined_predictions as f64 / self.total as f64)
    }

    /// Confusion matrix with sums and precision/recall rows.
    pub fn confusion_table(&self) -> String {
        let mut s = String::new();
        let short = |c: RelationClass| c.name();
        let width = 16;
        let _ = write!(s, "{:<w$}", "Class", w = width);
        for c in RelationClass::VALID {
            let _ = write!(s, " | {:>w$}", short(c), w = width);
        }
        let _ = writeln!(s, " | {:>w$} | {:>7}", "Undefined", "Sum", w = width);
        for (r, class) in RelationClass::VALID.iter().enumerate() {
            let _ = write!(s, "{:<w$}", class.name(), w = width);
            for c in 0..MATRIX_DIM {
                let _ = write!(s, " | {:>w$}", self.confusion[r][c], w = width);
            }
            let _ = writeln!(s, " | {:>7}", self.support[r]);
        }
        for (label, values) in [("Precision", &self.precision), ("Recall", &self.recall)] {
            let _ = write!(s, "{label:<width$}");
            for v in values {
                let _ = write!(s, " | {:>w$}", pct(*v), w = width);
            }
            let _ = writeln!(s, " | {:>w$} | {:>7}", "-", "-", w = width);
        }
        let _ = writeln!(s, "Accuracy: {}", pct(self.accuracy));
        s
    }

    /// Recall / precision / support blocks of four classes each.
    pub fn quality_table(&self) -> String {
        let mut s = String::new();
        for block in RelationClass::VALID.chunks(4) {
            let _ = write!(s, "{:<10}", "Class");
            for c in block {
                let _ = write!(s, " | {:>16}", c.name());
            }
            let _ = writeln!(s);
            let idx: Vec<usize> = block.iter().map(|c| c.index()).collect();
            let _ = write!(s, "{:<10}", "Recall");
            for &i in &idx {
                let _ = write!(s, " | {:>16}", pct(self.recall[i]));
            }
            let _ = writeln!(s);
            let _ = write!(s, "{:<10}", "Precision");
            for &i in &idx {
                let _ = write!(s, " | {:>16}", pct(self.precision[i]));
            }
            let _ = writeln!(s);
            let _ = write!(s, "{:<10}", "#Samples");
            for &i in &idx {
                let _ = write!(s, " | {:>16}", self.support[i]);
            }
            let _ = writeln!(s);
            let _ = writeln!(s);
        }
        s
    }
}

/// Percentage with one decimal, or "-" when undefined.
pub fn pct(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{:.1}%", v * 100.0),
        None => "-".into(),
    }
}

/// Compares predictions with ground truth. Truth entries without a
/// prediction are ignored.
pub fn classification_report(
    predictions: &BTreeMap<String, RelationClass>,
    truth: &BTreeMap<String, RelationClass>,
) -> Result<EvalReport, EvalError> {
    let missing: Vec<String> = predictions
        .keys()
        .filter(|id| !truth.contains_key(*id))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingTruth(missing));
    }
    let mut confusion = vec![vec![0u64; MATRIX_DIM]; MATRIX_DIM];
    for (id, predicted) in predictions {
        let actual = truth[id];
        if !actual.is_valid() {
            return Err(EvalError::UndefinedTruth(id.clone()));
        }
        confusion[actual.index()][predicted.index()] += 1;
    }
    Ok(EvalReport::from_confusion(&confusion))
}

/// Scores automatic labels against human ground truth on the shared ids.
pub fn augmentation_quality_report(
    auto: &BTreeMap<String, RelationClass>,
    human: &BTreeMap<String, RelationClass>,
) -> Result<EvalReport, EvalError> {
    let shared: BTreeMap<String, RelationClass> = auto
        .iter()
        .filter(|(id, _)| human.contains_key(*id))
        .map(|(id, c)| (id.clone(), *c))
        .collect();
    if shared.is_empty() {
        return Err(EvalError::EmptyIntersection);
    }
    classification_report(&shared, human)
}

/// Per-metric accuracy of predicted triples against ground-truth classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricAccuracy {
    pub cmi: f64,
    pub sc: f64,
    pub stat: f64,
    pub samples: usize,
}

pub fn metric_accuracy(
    predicted: &BTreeMap<String, MetricTriple>,
    truth: &BTreeMap<String, RelationClass>,
) -> Result<MetricAccuracy, EvalError> {
    let missing: Vec<String> = predicted
        .keys()
        .filter(|id| !truth.contains_key(*id))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingTruth(missing));
    }
    let (mut cmi, mut sc, mut stat) = (0usize, 0usize, 0usize);
    for (id, p) in predicted {
        let t = triple_of_class(truth[id]).map_err(|_| EvalError::UndefinedTruth(id.clone()))?;
        cmi += usize::from(p.cmi == t.cmi);
        sc += usize::from(p.sc == t.sc);
        stat += usize::from(p.stat == t.stat);
    }
    let n = predicted.len().max(1) as f64;
    Ok(MetricAccuracy {
        cmi: cmi as f64 / n,
        sc: sc as f64 / n,
        stat: stat as f64 / n,
        samples: predicted.len(),
    })
}

/// Accuracy overview: one column per metric head and per combination scheme.
pub fn accuracy_table(metrics: &MetricAccuracy, cascade: Option<f64>, classic: Option<f64>) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} | {:>7} | {:>7} | {:>7} | {:>7} | {:>7}",
        "Classifier", "CMI", "SC", "STAT", "Cascade", "Classic"
    );
    let _ = writeln!(
        s,
        "{:<10} | {:>7} | {:>7} | {:>7} | {:>7} | {:>7}",
        "Ours",
        pct(Some(metrics.cmi)),
        pct(Some(metrics.sc)),
        pct(Some(metrics.stat)),
        pct(cascade),
        pct(classic)
    );
    s
}
