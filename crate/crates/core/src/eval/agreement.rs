//! Nominal Krippendorff's alpha over a coincidence matrix.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::EvalError;

/// Ratings per unit: unit id -> annotator id -> category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReliabilityMatrix {
    units: BTreeMap<String, BTreeMap<String, String>>,
}

impl ReliabilityMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a rating, replacing an earlier one by the same annotator.
    pub fn insert(
        &mut self,
        unit: impl Into<String>,
        annotator: impl Into<String>,
        category: impl Into<String>,
    ) {
        self.units
            .entry(unit.into())
            .or_default()
            .insert(annotator.into(), category.into());
    }

    pub fn units(&self) -> &BTreeMap<String, BTreeMap<String, String>> {
        &self.units
    }

    pub fn categories(&self) -> BTreeSet<&str> {
        self.units
            .values()
            .flat_map(|r| r.values().map(String::as_str))
            .collect()
    }

    /// Units with at least two ratings.
    pub fn pairable_units(&self) -> usize {
        self.units.values().filter(|r| r.len() >= 2).count()
    }
}

/// Symmetric category x category coincidence counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceMatrix {
    pub categories: Vec<String>,
    pub counts: Vec<Vec<f64>>,
}

impl CoincidenceMatrix {
    pub fn from_reliability(m: &ReliabilityMatrix) -> Self {
        let categories: Vec<String> = m.categories().into_iter().map(String::from).collect();
        let index: BTreeMap<&str, usize> = categories
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let k = categories.len();
        let mut counts = vec![vec![0.0; k]; k];
        for ratings in m.units.values() {
            let m_u = ratings.len();
            if m_u < 2 {
                continue;
            }
            let mut per_cat = vec![0usize; k];
            for c in ratings.values() {
                per_cat[index[c.as_str()]] += 1;
            }
            let w = 1.0 / (m_u - 1) as f64;
            for c in 0..k {
                if per_cat[c] == 0 {
                    continue;
                }
                for d in 0..k {
                    // ordered pairs of distinct ratings within the unit
                    let pairs = per_cat[c] * (per_cat[d] - usize::from(c == d));
                    counts[c][d] += pairs as f64 * w;
                }
            }
        }
        CoincidenceMatrix { categories, counts }
    }

    pub fn marginals(&self) -> Vec<f64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }
}

/// Nominal-scale alpha. Units rated once do not contribute.
pub fn krippendorff_alpha(m: &ReliabilityMatrix) -> Result<f64, EvalError> {
    if m.pairable_units() == 0 {
        return Err(EvalError::NoPairableUnits);
    }
    let o = CoincidenceMatrix::from_reliability(m);
    let n_c = o.marginals();
    let n: f64 = n_c.iter().sum();
    let k = n_c.len();
    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..k {
        for d in 0..k {
            if c != d {
                observed += o.counts[c][d];
                expected += n_c[c] * n_c[d];
            }
        }
    }
    let d_o = observed / n;
    let d_e = expected / (n * (n - 1.0));
    if d_e == 0.0 {
        return Err(EvalError::AgreementUndefined);
    }
    Ok(1.0 - d_o / d_e)
}
