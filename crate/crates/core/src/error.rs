//! Structured errors for every fallible operation in the crate.

use thiserror::Error;

/// Errors raised by spaces, polynomial transforms, estimators and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: space has dimension {expected}, vector has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable count mismatch: expected {expected}, got {got}")]
    VarCountMismatch { expected: usize, got: usize },

    #[error("exponent {0} is outside [1, inf]")]
    ExponentOutOfRange(f64),

    #[error("index {n} has prime factor {prime}, outside the first {n_primes} primes")]
    PrimeOutsideTable { n: u64, prime: u64, n_primes: usize },

    #[error("polynomial is not tetrahedral: variable {var} carries exponent {exponent}")]
    NotTetrahedral { var: usize, exponent: u32 },

    #[error("polynomial is not homogeneous: found total degrees {0} and {1}")]
    NotHomogeneous(u32, u32),

    #[error("point on the torus expected: |z_{index}| = {modulus} is not 1 within 1e-12")]
    NotOnTorus { index: usize, modulus: f64 },

    #[error("grid budget exceeded: {points} points > {budget}; use the Monte Carlo estimator")]
    GridBudgetExceeded { points: u128, budget: u128 },

    #[error("cube budget exceeded: {n_vars} variables > {max}; use the Monte Carlo estimator")]
    CubeBudgetExceeded { n_vars: usize, max: usize },

    #[error("exact Parseval needs a euclidean space and q = 2; use grid or Monte Carlo quadrature")]
    ParsevalUnavailable,

    #[error("degree {degree} exceeds the exact-rational guard {max}")]
    RationalGuardExceeded { degree: usize, max: usize },

    #[error("homogeneity degree {k} exceeds the polynomial bound {m}")]
    ProjectionDegree { k: usize, m: usize },

    #[error("stirling ratio needs n = k*m, got n={n}, m={m}, k={k}")]
    StirlingShape { n: u64, m: u64, k: u64 },

    #[error("subset member {member} outside [1..{n_vars}]")]
    SubsetOutOfRange { member: u32, n_vars: usize },

    #[error("subset members must be strictly increasing, found {0} after {1}")]
    SubsetNotSorted(u32, u32),

    #[error("index overflow: monomial does not fit a 64-bit Dirichlet index")]
    IndexOverflow,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
