//! Aggregation of class counts into per-metric counts, and audits of built
//! corpora against their own labels.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::CorpusManifest;
use crate::taxonomy::{triple_of_class, CmiLevel, InvalidCase, RelationClass, ScLevel, StatLevel};

/// Class counts of the published 224 856-pair training corpus.
pub const PUBLISHED_CLASS_COUNTS: [(RelationClass, u64); 8] = [
    (RelationClass::Uncorrelated, 60_000),
    (RelationClass::Interdependent, 1_007),
    (RelationClass::Complementary, 33_088),
    (RelationClass::Illustration, 5_447),
    (RelationClass::Anchorage, 62_637),
    (RelationClass::Contrasting, 31_368),
    (RelationClass::BadIllustration, 4_099),
    (RelationClass::BadAnchorage, 27_210),
];

/// Metric counts as printed alongside the class counts, row for row.
pub const PUBLISHED_METRIC_ROWS: [(&str, u64); 8] = [
    ("STAT T", 125_463),
    ("STAT 0", 9_546),
    ("STAT I", 89_847),
    ("SC -1", 62_677),
    ("SC 0", 60_000),
    ("SC 1", 102_179),
    ("CMI 0", 61_007),
    ("CMI 1", 163_849),
];

/// Pair counts per level of each metric.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MetricCounts {
    /// Indexed by [`CmiLevel::index`].
    pub cmi: [u64; 2],
    /// Indexed by [`ScLevel::index`].
    pub sc: [u64; 3],
    /// Indexed by [`StatLevel::index`].
    pub stat: [u64; 3],
}

impl MetricCounts {
    /// Aggregates through each class's defining triple. Undefined entries
    /// cannot be placed and are returned separately.
    pub fn from_class_counts(
        counts: &BTreeMap<RelationClass, u64>,
    ) -> (Self, Vec<(InvalidCase, u64)>) {
        let mut m = MetricCounts::default();
        let mut undefined = Vec::new();
        for (&class, &n) in counts {
            match triple_of_class(class) {
                Ok(t) => {
                    m.cmi[t.cmi.index()] += n;
                    m.sc[t.sc.index()] += n;
                    m.stat[t.stat.index()] += n;
                }
                Err(_) => undefined.push((class.undefined_case().expect("only Undefined fails"), n)),
            }
        }
        (m, undefined)
    }

    pub fn cmi_total(&self) -> u64 {
        self.cmi.iter().sum()
    }

    pub fn sc_total(&self) -> u64 {
        self.sc.iter().sum()
    }

    pub fn stat_total(&self) -> u64 {
        self.stat.iter().sum()
    }

    /// Rows in the published order: STAT, SC, CMI.
    pub fn rows(&self) -> Vec<(String, u64)> {
        let mut rows = Vec::with_capacity(8);
        for level in StatLevel::ALL {
            rows.push((format!("STAT {level}"), self.stat[level.index()]));
        }
        for level in ScLevel::ALL {
            rows.push((format!("SC {level}"), self.sc[level.index()]));
        }
        for level in CmiLevel::ALL {
            rows.push((format!("CMI {level}"), self.cmi[level.index()]));
        }
        rows
    }
}

/// Why a corpus fails its consistency audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mismatch {
    UndefinedPair { pair_id: String, case: InvalidCase },
    /// `auto_class` disagrees with the class of `auto_triple`.
    UnsoundLabel { pair_id: String },
    /// Recorded per-class count differs from the pairs.
    CountMismatch {
        class: String,
        recorded: u64,
        actual: u64,
    },
    /// Aggregated totals disagree across metric dimensions.
    TotalMismatch { metric: String, total: u64, expected: u64 },
}

/// A difference between recomputed and published metric rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableDiscrepancy {
    /// Two rows whose values are exchanged in the published table.
    Swapped {
        rows: (String, String),
        computed: (u64, u64),
    },
    Differs {
        row: String,
        computed: u64,
        published: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub class_counts: BTreeMap<String, u64>,
    pub metrics: MetricCounts,
    pub total: u64,
    pub mismatches: Vec<Mismatch>,
}

impl ConsistencyReport {
    /// Aggregates a bare class-count table.
    pub fn from_class_counts(counts: &BTreeMap<RelationClass, u64>) -> Self {
        let (metrics, undefined) = MetricCounts::from_class_counts(counts);
        let total = counts.values().sum();
        let mut mismatches: Vec<Mismatch> = undefined
            .into_iter()
            .map(|(case, _)| Mismatch::UndefinedPair {
                pair_id: String::new(),
                case,
            })
            .collect();
        let valid_total: u64 = counts
            .iter()
            .filter(|(c, _)| c.is_valid())
            .map(|(_, n)| n)
            .sum();
        for (metric, t) in [
            ("CMI", metrics.cmi_total()),
            ("SC", metrics.sc_total()),
            ("STAT", metrics.stat_total()),
        ] {
            if t != valid_total {
                mismatches.push(Mismatch::TotalMismatch {
                    metric: metric.into(),
                    total: t,
                    expected: valid_total,
                });
            }
        }
        ConsistencyReport {
            class_counts: counts.iter().map(|(c, n)| (c.name().to_string(), *n)).collect(),
            metrics,
            total,
            mismatches,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn class_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<18} | {:>10}", "Class", "# Samples");
        let _ = writeln!(s, "{}", "-".repeat(31));
        for class in RelationClass::VALID {
            let n = self.class_counts.get(class.name()).copied().unwrap_or(0);
            let _ = writeln!(s, "{:<18} | {:>10}", class.name(), n);
        }
        if let Some(n) = self.class_counts.get("Undefined") {
            let _ = writeln!(s, "{:<18} | {:>10}", "Undefined", n);
        }
        let _ = writeln!(s, "{:<18} | {:>10}", "Total", self.total);
        s
    }

    pub fn metric_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<18} | {:>10}", "Metric", "# Samples");
        let _ = writeln!(s, "{}", "-".repeat(31));
        for (row, n) in self.metrics.rows() {
            let _ = writeln!(s, "{row:<18} | {n:>10}");
        }
        s
    }
}

/// Audits a built corpus: counts from the pairs themselves, Undefined or
/// unsound labels, and agreement with the recorded per-class counts.
pub fn corpus_consistency_report(manifest: &CorpusManifest) -> ConsistencyReport {
    let mut counts: BTreeMap<RelationClass, u64> = BTreeMap::new();
    let mut pair_mismatches = Vec::new();
    for pair in &manifest.pairs {
        *counts.entry(pair.auto_class).or_insert(0) += 1;
        match pair.auto_class {
            RelationClass::Undefined(case) => pair_mismatches.push(Mismatch::UndefinedPair {
                pair_id: pair.id.clone(),
                case,
            }),
            _ if !pair.is_label_sound() => pair_mismatches.push(Mismatch::UnsoundLabel {
                pair_id: pair.id.clone(),
            }),
            _ => {}
        }
    }
    let mut report = ConsistencyReport::from_class_counts(&counts);
    // replace the anonymous Undefined entries with the per-pair ones
    report
        .mismatches
        .retain(|m| !matches!(m, Mismatch::UndefinedPair { .. }));
    report.mismatches.splice(0..0, pair_mismatches);

    let recorded_classes = manifest
        .per_class_counts
        .keys()
        .chain(counts.keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>();
    for class in recorded_classes {
        let recorded = manifest.per_class_counts.get(&class).copied().unwrap_or(0) as u64;
        let actual = counts.get(&class).copied().unwrap_or(0);
        if recorded != actual {
            report.mismatches.push(Mismatch::CountMismatch {
                class: class.name().into(),
                recorded,
                actual,
            });
        }
    }
    report
}

/// Compares recomputed metric rows with a published table. Pairs of rows
/// whose values are exchanged are reported once as a swap.
pub fn compare_metric_rows(computed: &MetricCounts, published: &[(&str, u64)]) -> Vec<TableDiscrepancy> {
    let rows = computed.rows();
    let value = |name: &str| rows.iter().find(|(r, _)| r == name).map(|(_, n)| *n);
    let mut out = Vec::new();
    let mut consumed = std::collections::BTreeSet::new();
    for (i, (name, published_n)) in published.iter().enumerate() {
        let Some(computed_n) = value(name) else {
            continue;
        };
        if computed_n == *published_n || consumed.contains(&i) {
            continue;
        }
        let partner = published.iter().enumerate().find(|(j, (other, other_pub))| {
            *j != i
                && !consumed.contains(j)
                && value(other) == Some(*published_n)
                && computed_n == *other_pub
        });
        match partner {
            Some((j, (other, _))) => {
                consumed.insert(i);
                consumed.insert(j);
                out.push(TableDiscrepancy::Swapped {
                    rows: (name.to_string(), other.to_string()),
                    computed: (computed_n, *published_n),
                });
            }
            None => out.push(TableDiscrepancy::Differs {
                row: name.to_string(),
                computed: computed_n,
                published: *published_n,
            }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ImageTextPair, Provenance};
    use crate::taxonomy::MetricTriple;

    fn published() -> BTreeMap<RelationClass, u64> {
        PUBLISHED_CLASS_COUNTS.into_iter().collect()
    }

    #[test]
    fn published_counts_aggregate() {
        let r = ConsistencyReport::from_class_counts(&published());
        assert_eq!(r.total, 224_856);
        assert_eq!(r.metrics.sc, [62_677, 60_000, 102_179]);
        assert_eq!(r.metrics.cmi, [61_007, 163_849]);
        assert_eq!(r.metrics.stat, [9_546, 125_463, 89_847]);
        assert!(r.is_consistent());
    }

    #[test]
    fn stat_rows_are_swapped_in_print() {
        let r = ConsistencyReport::from_class_counts(&published());
        let diffs = compare_metric_rows(&r.metrics, &PUBLISHED_METRIC_ROWS);
        assert_eq!(
            diffs,
            vec![TableDiscrepancy::Swapped {
                rows: ("STAT T".into(), "STAT 0".into()),
                computed: (9_546, 125_463),
            }]
        );
    }

    #[test]
    fn empty_counts() {
        let r = ConsistencyReport::from_class_counts(&BTreeMap::new());
        assert_eq!(r.total, 0);
        assert_eq!(r.metrics, MetricCounts::default());
        assert!(r.is_consistent());
    }

    fn pair(id: &str, triple: MetricTriple, class: RelationClass) -> ImageTextPair {
        ImageTextPair {
            id: id.into(),
            image_ref: "i".into(),
            text: "t".into(),
            concept_tags: vec![],
            auto_triple: triple,
            auto_class: class,
            provenance: Provenance {
                generator: "g".into(),
                seed: 0,
                parent_ids: vec![],
                replacements: None,
            },
        }
    }

    #[test]
    fn manifest_audit_flags_undefined_and_unsound() {
        let anch = triple_of_class(RelationClass::Anchorage).unwrap();
        let bad = MetricTriple::new(CmiLevel::One, ScLevel::Zero, StatLevel::T);
        let pairs = vec![
            pair("ok", anch, RelationClass::Anchorage),
            pair("undef", bad, RelationClass::Undefined(InvalidCase::CaseD)),
            pair("unsound", anch, RelationClass::Complementary),
        ];
        let m = CorpusManifest::from_pairs(pairs, serde_json::Value::Null);
        let r = corpus_consistency_report(&m);
        assert_eq!(r.total, 3);
        assert!(r.mismatches.contains(&Mismatch::UndefinedPair {
            pair_id: "undef".into(),
            case: InvalidCase::CaseD
        }));
        assert!(r.mismatches.contains(&Mismatch::UnsoundLabel {
            pair_id: "unsound".into()
        }));

        let mut m2 = CorpusManifest::from_pairs(
            vec![pair("ok", anch, RelationClass::Anchorage)],
            serde_json::Value::Null,
        );
        m2.per_class_counts.insert(RelationClass::Anchorage, 2);
        let r2 = corpus_consistency_report(&m2);
        assert_eq!(
            r2.mismatches,
            vec![Mismatch::CountMismatch {
                class: "Anchorage".into(),
                recorded: 2,
                actual: 1
            }]
        );
    }
}
