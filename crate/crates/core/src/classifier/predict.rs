//! Inference: probabilities, the classic 8-way decision and the cascade of
//! three metric heads resolved through the taxonomy.

use super::features::FeatureVector;
use super::model::BaselineModel;
use super::HeadKind;
use crate::error::ClassifierError;
use crate::taxonomy::{classify_triple, CmiLevel, MetricTriple, RelationClass, ScLevel, StatLevel};

pub fn predict_proba(model: &BaselineModel, f: &FeatureVector) -> Result<Vec<f64>, ClassifierError> {
    f.check(model.network.input_dim)?;
    Ok(model.network.proba(&f.values))
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub fn classic_predict(model: &BaselineModel, f: &FeatureVector) -> Result<RelationClass, ClassifierError> {
    model.require_head(HeadKind::Classic)?;
    let p = predict_proba(model, f)?;
    Ok(RelationClass::VALID[argmax(&p)])
}

/// Independent argmax of each metric head.
pub fn predict_triple(
    m_cmi: &BaselineModel,
    m_sc: &BaselineModel,
    m_stat: &BaselineModel,
    f: &FeatureVector,
) -> Result<MetricTriple, ClassifierError> {
    m_cmi.require_head(HeadKind::Cmi)?;
    m_sc.require_head(HeadKind::Sc)?;
    m_stat.require_head(HeadKind::Stat)?;
    let pick = |m: &BaselineModel| predict_proba(m, f).map(|p| argmax(&p));
    let cmi = CmiLevel::ALL[pick(m_cmi)?];
    let sc = ScLevel::ALL[pick(m_sc)?];
    let stat = StatLevel::ALL[pick(m_stat)?];
    Ok(MetricTriple::new(cmi, sc, stat))
}

/// May return `Undefined` when the heads disagree with the taxonomy.
pub fn cascade_predict(
    m_cmi: &BaselineModel,
    m_sc: &BaselineModel,
    m_stat: &BaselineModel,
    f: &FeatureVector,
) -> Result<RelationClass, ClassifierError> {
    predict_triple(m_cmi, m_sc, m_stat, f).map(classify_triple)
}
