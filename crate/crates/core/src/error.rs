use thiserror::Error;

/// Every failure the library can report.
///
/// Soft failures (`BudgetExhausted`, `NormalizationNotFound`) mean a
/// randomized search gave up; they never claim that no answer exists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("row is not unimodular")]
    NotUnimodular,
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("ring has no declared Krull dimension")]
    MissingDimension,
    #[error("ring has no declared minimal primes")]
    MissingMinimalPrimes,
    #[error("ideals are not comaximal")]
    NotComaximal,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("matrix is not in generic position: zero pivot at step {step}")]
    NotGenericPosition { step: usize },
    #[error("matrix determinant is not 1")]
    NotSl,
    #[error("search budget exhausted after {0} attempts")]
    BudgetExhausted(u64),
    #[error("point is not in the open set: {0}")]
    NotInOpenSet(String),
    #[error("path search is not supported over finite fields")]
    FiniteFieldUnsupported,
    #[error("ring does not contain an infinite field")]
    NotInfiniteField,
    #[error("ring is too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("no normalized pair found within budget {0}")]
    NormalizationNotFound(u64),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("height precondition failed: {0}")]
    HeightPreconditionFailed(String),
    #[error("dimension hypothesis violated: {0}")]
    DimensionHypothesisViolated(String),
    #[error("row is not generic")]
    NotGeneric,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("witness construction failed: {0}")]
    WitnessConstructionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Soft failures come from exhausted randomized searches.
    pub fn is_soft(&self) -> bool {
        matches!(self, Error::BudgetExhausted(_) | Error::NormalizationNotFound(_))
    }

    /// Stable name used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotUnimodular => "NotUnimodular",
            Error::UnsupportedRing(_) => "UnsupportedRing",
            Error::MissingDimension => "MissingDimension",
            Error::MissingMinimalPrimes => "MissingMinimalPrimes",
            Error::NotComaximal => "NotComaximal",
            Error::SizeMismatch(_) => "SizeMismatch",
            Error::NotGenericPosition { .. } => "NotGenericPosition",
            Error::NotSl => "NotSl",
            Error::BudgetExhausted(_) => "BudgetExhausted",
            Error::NotInOpenSet(_) => "NotInOpenSet",
            Error::FiniteFieldUnsupported => "FiniteFieldUnsupported",
            Error::NotInfiniteField => "NotInfiniteField",
            Error::TooLarge(_) => "TooLarge",
            Error::NormalizationNotFound(_) => "NormalizationNotFound",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::HeightPreconditionFailed(_) => "HeightPreconditionFailed",
            Error::DimensionHypothesisViolated(_) => "DimensionHypothesisViolated",
            Error::NotGeneric => "NotGeneric",
            Error::NotApplicable(_) => "NotApplicable",
            Error::WitnessConstructionFailed(_) => "WitnessConstructionFailed",
            Error::Parse(_) => "Parse",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
