//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum KgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric: max asymmetry {max_asym:.3e} exceeds {tol:.3e}")]
    NotSymmetric { max_asym: f64, tol: f64 },

    #[error("kinetic operator U^2 is not positive definite (Cholesky pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("definiteness interval is empty: min_mu |(V - mu I) U^-1| >= 1")]
    DefinitenessEmpty,

    #[error("Cholesky factorization of L_mu failed at pivot {pivot}")]
    CholeskyFailure { pivot: usize },

    #[error("condition violated: |(V - mu I) U^-1| = {norm} >= 1")]
    ConditionViolated { norm: f64 },

    #[error("negative radicand {radicand:.6e}: |(V - mu I) U^-1| < 1 fails along psi")]
    NegativeRadicand { radicand: f64 },

    #[error("degenerate denominator {value:.6e} in eigenvalue derivative")]
    DegenerateDenominator { value: f64 },

    #[error("operators are not comparable: {0}")]
    NotComparable(String),

    #[error("operators do not commute: commutator norm {norm:.3e} exceeds {tol:.3e}")]
    NonCommuting { norm: f64, tol: f64 },

    #[error("eigenvalue family undefined at epsilon = {epsilon}: {reason}")]
    FamilyUndefined { epsilon: f64, reason: String },

    #[error("out of validity: {0}")]
    OutOfValidity(String),

    #[error("interpolation bound violated: {0}")]
    LemmaViolation(String),

    #[error("inclusion violated: {0}")]
    InclusionViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, KgError>;
