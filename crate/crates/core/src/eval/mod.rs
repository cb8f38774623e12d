//! Evaluation: inter-annotator agreement, majority-vote ground truth,
//! classification reports and corpus consistency audits.

pub mod agreement;
pub mod consistency;
pub mod report;
pub mod vote;

pub use agreement::{krippendorff_alpha, CoincidenceMatrix, ReliabilityMatrix};
pub use consistency::{
    compare_metric_rows, corpus_consistency_report, ConsistencyReport, MetricCounts, Mismatch,
    TableDiscrepancy, PUBLISHED_CLASS_COUNTS, PUBLISHED_METRIC_ROWS,
};
pub use report::{
    accuracy_table, augmentation_quality_report, classification_report, metric_accuracy, pct,
    EvalReport, MetricAccuracy,
};
pub use vote::{
    majority_vote, reliability_from_records, AnnotatorLabel, ExclusionReason, InvalidLabel,
    LabelRecord, VoteOutcome, UNSURE,
};
