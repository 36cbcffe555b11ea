//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by curve construction, quadrature, flows and certificates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Branch points are not strictly increasing or are closer than the degeneracy floor.
    #[error("ordering violation: {0}")]
    OrderingViolation(String),
    /// Vector length disagrees with the genus.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A point lies on (or within the floor of) a branch point.
    #[error("point {0} coincides with a branch point")]
    BranchPointHit(f64),
    /// Node doubling did not stabilise an integral below tolerance.
    #[error("quadrature did not converge on [{lo}, {hi}] (last change {change:e})")]
    QuadratureNotConverged { lo: f64, hi: f64, change: f64 },
    /// A period matrix or linear system is numerically singular.
    #[error("singular period matrix (condition estimate {0:e})")]
    SingularPeriodMatrix(f64),
    /// Two ramification points coincide where distinct points are required.
    #[error("coincident ramification points")]
    CoincidentPoints,
    /// Ω_α vanishes at a dependent branch point.
    #[error("denominator vanishes at u_{0}")]
    DenominatorVanishes(usize),
    /// A rational denominator fell below the pole floor.
    #[error("pole hit: {0}")]
    PoleHit(String),
    /// The period corrector exhausted its iteration budget.
    #[error("Newton corrector diverged after {iterations} iterations (residual {residual:e})")]
    NewtonDiverged { iterations: usize, residual: f64 },
    /// The analytic period Jacobian is singular.
    #[error("singular Jacobian (|det| = {0:e})")]
    SingularJacobian(f64),
    /// A quantity required to be real acquired an imaginary part.
    #[error("reality lost: imaginary part {0:e}")]
    RealityLost(f64),
    /// The equilibrium measures are not k/N within tolerance.
    #[error("measures are not rational with the requested (N, k): {0}")]
    NotRational(String),
    /// (P^2 - 1)/Δ is not a polynomial square.
    #[error("quotient is not a perfect square (residue {0:e})")]
    NotPerfectSquare(f64),
    /// Coefficients of the wrong parity exceed tolerance.
    #[error("parity violation (max offending coefficient {0:e})")]
    ParityViolation(f64),
    /// A half-line interval endpoint is negative.
    #[error("negative endpoint {0}")]
    NegativeEndpoint(f64),
    /// The theta function nearly vanishes at a synthesis point.
    #[error("theta divisor hit (|theta| = {0:e})")]
    ThetaDivisorHit(f64),
    /// A structural invariant of computed data failed.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    /// Any other malformed argument.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
