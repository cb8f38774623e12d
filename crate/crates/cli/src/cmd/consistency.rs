use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::PathBuf;

use anyhow::Result;
use forge_core::corpus::read_corpus;
use forge_core::eval::{
    compare_metric_rows, corpus_consistency_report, ConsistencyReport, TableDiscrepancy,
    PUBLISHED_CLASS_COUNTS, PUBLISHED_METRIC_ROWS,
};
use serde::Serialize;

use crate::output::Out;

#[derive(clap::Args)]
pub struct Args {
    /// Corpus pairs file (its summary is read when present).
    #[arg(long, required_unless_present = "published", conflicts_with = "published")]
    manifest: Option<PathBuf>,
    /// Audit the published class counts instead, and compare the derived
    /// metric rows with the published metric table.
    #[arg(long)]
    published: bool,
}

#[derive(Serialize)]
struct Audit {
    #[serde(flatten)]
    report: ConsistencyReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    published_table_discrepancies: Vec<TableDiscrepancy>,
}

/// Exit status follows the mismatch list only; differences from a published
/// table are reported but do not fail the run.
pub fn run(args: Args, out: &Out) -> Result<bool> {
    let audit = match &args.manifest {
        Some(path) => Audit {
            report: corpus_consistency_report(&read_corpus(path)?),
            published_table_discrepancies: Vec::new(),
        },
        None => {
            let report = ConsistencyReport::from_class_counts(&BTreeMap::from(PUBLISHED_CLASS_COUNTS));
            let published_table_discrepancies = compare_metric_rows(&report.metrics, &PUBLISHED_METRIC_ROWS);
            Audit {
                report,
                published_table_discrepancies,
            }
        }
    };
    out.report(&audit, || {
        let mut s = audit.report.class_table();
        s.push('\n');
        s.push_str(&audit.report.metric_table());
        for m in &audit.report.mismatches {
            let _ = writeln!(s, "mismatch: {}", serde_json::to_string(m).unwrap_or_default());
        }
        for d in &audit.published_table_discrepancies {
            let line = match d {
                TableDiscrepancy::Swapped { rows, computed } => format!(
                    "published table swaps {} and {} (computed {} and {})",
                    rows.0, rows.1, computed.0, computed.1
                ),
                TableDiscrepancy::Differs {
                    row,
                    computed,
                    published,
                } => format!("published {row} is {published}, computed {computed}"),
            };
            let _ = writeln!(s, "{line}");
        }
        if audit.report.is_consistent() {
            s.push_str("consistent\n");
        }
        s
    })?;
    Ok(audit.report.is_consistent())
}
