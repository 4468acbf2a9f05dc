//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inversion requires a unit constant term (= 1).
    #[error("cannot invert: constant term is {found}, expected 1")]
    NonUnitConstantTerm { found: String },

    /// A class carries a term of higher codimension than its support allows.
    #[error("degree-{degree} term exceeds support dimension {support_dim}")]
    DimensionOverflow { degree: u32, support_dim: u32 },

    /// Two bundles were combined over different bases.
    #[error("base dimensions differ: {left} vs {right}")]
    BaseMismatch { left: u32, right: u32 },

    /// Quotient by a bundle of larger rank.
    #[error("subbundle rank {sub} exceeds total rank {total}")]
    RankUnderflow { total: u32, sub: u32 },

    /// A twist class must be homogeneous of degree 1.
    #[error("twist class is not homogeneous of degree 1: {found}")]
    NotDegreeOne { found: String },

    #[error("empty bundle list")]
    EmptyList,

    #[error("grading mismatch: {0}")]
    GradingMismatch(String),

    #[error("transversality violated: {0}")]
    TransversalityViolated(String),

    #[error("hypothesis not declared: {0}")]
    HypothesisNotDeclared(String),

    #[error("rank inconsistency: {0}")]
    RankInconsistency(String),

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("oracle inapplicable: {0}")]
    OracleInapplicable(String),

    #[error("schema error: {0}")]
    SchemaError(String),

    #[error("semantic error: {0}")]
    SemanticError(String),

    #[error("no applicable formula: {0}")]
    NoApplicableFormula(String),
}

pub type Result<T> = std::result::Result<T, Error>;
