//! Metric space and relation classes.
//!
//! An image-text pair is located by three discrete metrics: cross-modal
//! mutual information (CMI), semantic correlation (SC) and status (STAT).
//! The 2 x 3 x 3 = 18 combinations map onto eight named relation classes;
//! the remaining ten combinations are contradictory and fall into one of four
//! invalid cases, reported as [`RelationClass::Undefined`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::TaxonomyError;

/// Cross-modal mutual information, binarized to "no overlap" / "overlap".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmiLevel {
    Zero,
    One,
}

/// Semantic correlation: negative, uncorrelated or positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScLevel {
    Neg,
    Zero,
    Pos,
}

/// Status relation between the modalities.
///
/// `T` means the image is subordinate to the text, `I` means the text is
/// subordinate to the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatLevel {
    T,
    Equal,
    I,
}

impl CmiLevel {
    pub const ALL: [CmiLevel; 2] = [CmiLevel::Zero, CmiLevel::One];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn value(self) -> i8 {
        match self {
            CmiLevel::Zero => 0,
            CmiLevel::One => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            0 => Some(CmiLevel::Zero),
            1 => Some(CmiLevel::One),
            _ => None,
        }
    }
}

impl ScLevel {
    pub const ALL: [ScLevel; 3] = [ScLevel::Neg, ScLevel::Zero, ScLevel::Pos];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn value(self) -> i8 {
        match self {
            ScLevel::Neg => -1,
            ScLevel::Zero => 0,
            ScLevel::Pos => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            -1 => Some(ScLevel::Neg),
            0 => Some(ScLevel::Zero),
            1 => Some(ScLevel::Pos),
            _ => None,
        }
    }
}

impl StatLevel {
    pub const ALL: [StatLevel; 3] = [StatLevel::T, StatLevel::Equal, StatLevel::I];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StatLevel::T => "T",
            StatLevel::Equal => "0",
            StatLevel::I => "I",
        }
    }
}

impl FromStr for StatLevel {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" => Ok(StatLevel::T),
            "0" => Ok(StatLevel::Equal),
            "I" => Ok(StatLevel::I),
            other => Err(TaxonomyError::UnknownLevel(format!("stat={other}"))),
        }
    }
}

impl fmt::Display for CmiLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl fmt::Display for ScLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl fmt::Display for StatLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CmiLevel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for CmiLevel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        CmiLevel::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("cmi must be 0 or 1, got {v}")))
    }
}

impl Serialize for ScLevel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for ScLevel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        ScLevel::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("sc must be -1, 0 or 1, got {v}")))
    }
}

impl Serialize for StatLevel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for StatLevel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One point of the 18-point metric space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MetricTriple {
    pub cmi: CmiLevel,
    pub sc: ScLevel,
    pub stat: StatLevel,
}

impl MetricTriple {
    pub const fn new(cmi: CmiLevel, sc: ScLevel, stat: StatLevel) -> Self {
        Self { cmi, sc, stat }
    }

    /// All 18 triples, ordered by (cmi, sc, stat) in level order.
    pub fn all() -> impl Iterator<Item = MetricTriple> {
        CmiLevel::ALL.into_iter().flat_map(|cmi| {
            ScLevel::ALL.into_iter().flat_map(move |sc| {
                StatLevel::ALL
                    .into_iter()
                    .map(move |stat| MetricTriple::new(cmi, sc, stat))
            })
        })
    }
}

impl fmt::Display for MetricTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(cmi={}, sc={}, stat={})", self.cmi, self.sc, self.stat)
    }
}

/// The four families of contradictory metric combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InvalidCase {
    /// cmi=0, sc=-1: nothing is shared, so nothing can contradict.
    CaseA,
    /// cmi=0, sc=0, stat in {T, I}: unrelated content has no hierarchy.
    CaseB,
    /// cmi=0, sc=1, stat in {T, I}: positive correlation without shared
    /// concepts only happens at equal status.
    CaseC,
    /// cmi=1, sc=0: shared concepts cannot be semantically unrelated.
    CaseD,
}

impl InvalidCase {
    pub const ALL: [InvalidCase; 4] = [
        InvalidCase::CaseA,
        InvalidCase::CaseB,
        InvalidCase::CaseC,
        InvalidCase::CaseD,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InvalidCase::CaseA => "CaseA",
            InvalidCase::CaseB => "CaseB",
            InvalidCase::CaseC => "CaseC",
            InvalidCase::CaseD => "CaseD",
        }
    }
}

impl fmt::Display for InvalidCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InvalidCase {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InvalidCase::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| TaxonomyError::UnknownCase(s.to_string()))
    }
}

/// Result of [`validity_reason`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Validity {
    Valid,
    Invalid(InvalidCase),
}

/// Semantic image-text relation class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationClass {
    Uncorrelated,
    Interdependent,
    Complementary,
    Illustration,
    Anchorage,
    Contrasting,
    BadIllustration,
    BadAnchorage,
    /// Rejection class for an invalid metric combination.
    Undefined(InvalidCase),
}

impl RelationClass {
    /// The eight valid classes in canonical order. Index positions are the
    /// output indices of the classic head and the tie-break order.
    pub const VALID: [RelationClass; 8] = [
        RelationClass::Uncorrelated,
        RelationClass::Interdependent,
        RelationClass::Complementary,
        RelationClass::Illustration,
        RelationClass::Anchorage,
        RelationClass::Contrasting,
        RelationClass::BadIllustration,
        RelationClass::BadAnchorage,
    ];

    pub fn is_valid(self) -> bool {
        !matches!(self, RelationClass::Undefined(_))
    }

    /// Canonical index in [`RelationClass::VALID`]; `Undefined` maps to 8.
    pub fn index(self) -> usize {
        match self {
            RelationClass::Uncorrelated => 0,
            RelationClass::Interdependent => 1,
            RelationClass::Complementary => 2,
            RelationClass::Illustration => 3,
            RelationClass::Anchorage => 4,
            RelationClass::Contrasting => 5,
            RelationClass::BadIllustration => 6,
            RelationClass::BadAnchorage => 7,
            RelationClass::Undefined(_) => 8,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::VALID.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationClass::Uncorrelated => "Uncorrelated",
            RelationClass::Interdependent => "Interdependent",
            RelationClass::Complementary => "Complementary",
            RelationClass::Illustration => "Illustration",
            RelationClass::Anchorage => "Anchorage",
            RelationClass::Contrasting => "Contrasting",
            RelationClass::BadIllustration => "Bad Illustration",
            RelationClass::BadAnchorage => "Bad Anchorage",
            RelationClass::Undefined(_) => "Undefined",
        }
    }

    /// Parses one of the eight valid class names. `"Undefined"` is rejected
    /// because it does not carry its case; see [`RelationClass::from_name_with_case`].
    pub fn from_name(s: &str) -> Result<Self, TaxonomyError> {
        Self::VALID
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| TaxonomyError::UnknownClass(s.to_string()))
    }

    pub fn from_name_with_case(s: &str, case: Option<InvalidCase>) -> Result<Self, TaxonomyError> {
        match (s, case) {
            ("Undefined", Some(c)) => Ok(RelationClass::Undefined(c)),
            ("Undefined", None) => Err(TaxonomyError::MissingCase),
            (name, _) => Self::from_name(name),
        }
    }

    pub fn undefined_case(self) -> Option<InvalidCase> {
        match self {
            RelationClass::Undefined(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for RelationClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Only the eight valid names deserialize; records that may hold
/// `"Undefined"` carry the case alongside and parse it explicitly.
impl<'de> Deserialize<'de> for RelationClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RelationClass::from_name(&s).map_err(serde::de::Error::custom)
    }
}

const fn t(cmi: CmiLevel, sc: ScLevel, stat: StatLevel) -> MetricTriple {
    MetricTriple::new(cmi, sc, stat)
}

/// Decides whether a triple is one of the eight valid combinations.
pub fn validity_reason(triple: MetricTriple) -> Validity {
    use CmiLevel as C;
    use ScLevel as S;
    match (triple.cmi, triple.sc, triple.stat) {
        (C::Zero, S::Neg, _) => Validity::Invalid(InvalidCase::CaseA),
        (C::Zero, S::Zero, StatLevel::T | StatLevel::I) => Validity::Invalid(InvalidCase::CaseB),
        (C::Zero, S::Pos, StatLevel::T | StatLevel::I) => Validity::Invalid(InvalidCase::CaseC),
        (C::One, S::Zero, _) => Validity::Invalid(InvalidCase::CaseD),
        _ => Validity::Valid,
    }
}

/// Maps a point of the metric space to its class. Total on all 18 triples.
pub fn classify_triple(triple: MetricTriple) -> RelationClass {
    use CmiLevel as C;
    use ScLevel as S;
    use StatLevel as St;
    if let Validity::Invalid(case) = validity_reason(triple) {
        return RelationClass::Undefined(case);
    }
    match (triple.cmi, triple.sc, triple.stat) {
        (C::Zero, S::Zero, St::Equal) => RelationClass::Uncorrelated,
        (C::Zero, S::Pos, St::Equal) => RelationClass::Interdependent,
        (C::One, S::Pos, St::Equal) => RelationClass::Complementary,
        (C::One, S::Pos, St::T) => RelationClass::Illustration,
        (C::One, S::Pos, St::I) => RelationClass::Anchorage,
        (C::One, S::Neg, St::Equal) => RelationClass::Contrasting,
        (C::One, S::Neg, St::T) => RelationClass::BadIllustration,
        (C::One, S::Neg, St::I) => RelationClass::BadAnchorage,
        _ => unreachable!("validity_reason accepted {triple}"),
    }
}

/// Defining triple of a valid class.
pub fn triple_of_class(class: RelationClass) -> Result<MetricTriple, TaxonomyError> {
    use CmiLevel as C;
    use ScLevel as S;
    use StatLevel as St;
    Ok(match class {
        RelationClass::Uncorrelated => t(C::Zero, S::Zero, St::Equal),
        RelationClass::Interdependent => t(C::Zero, S::Pos, St::Equal),
        RelationClass::Complementary => t(C::One, S::Pos, St::Equal),
        RelationClass::Illustration => t(C::One, S::Pos, St::T),
        RelationClass::Anchorage => t(C::One, S::Pos, St::I),
        RelationClass::Contrasting => t(C::One, S::Neg, St::Equal),
        RelationClass::BadIllustration => t(C::One, S::Neg, St::T),
        RelationClass::BadAnchorage => t(C::One, S::Neg, St::I),
        RelationClass::Undefined(case) => return Err(TaxonomyError::UndefinedHasNoTriple(case)),
    })
}
