//! Numerical spectral theory of the abstract Klein-Gordon eigenproblem
//!
//! The library works with finite-dimensional operator pairs `(U^2, V)` where
//! `U^2` is symmetric positive definite (kinetic plus mass energy) and `V` is
//! symmetric (the potential). The quadratic eigenproblem
//!
//! ```text
//! (U^2 - (lambda*I - V)^2) psi = 0
//! ```
//!
//! is linearized into the phase-space operator `K = J*L`, which is selfadjoint
//! with respect to the indefinite product `[x, y] = (J x, y)`. The crate
//! computes the Krein-signed spectrum of `K`, traces eigenvalue curves along
//! potential homotopies `V_t = V_0 + t (V_1 - V_0)`, evaluates eigenvalue
//! perturbation enclosures (absolute, refined, relative, combined and the
//! competing norm-relative bound with its penalty factor), and validates all
//! of it against closed-form models (relativistic Coulomb ground state,
//! Klein-Gordon oscillator) and an independent radial finite-difference
//! oracle.

pub mod bounds;
pub mod error;
pub mod flow;
pub mod models;
pub mod pencil;
pub mod quadratic;
pub mod radial;
pub mod report;

pub use error::{KgError, Result};
pub use pencil::{
    DefinitenessInterval, EigenPoint, OperatorPair, PhaseSpaceSpectrum, Signature,
    SymmetricOperator,
};
