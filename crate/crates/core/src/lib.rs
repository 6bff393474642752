//! Vector-valued harmonic analysis at desk scale.
//!
//! The crate evaluates norms of polynomials with coefficients in a
//! finite-dimensional normed space, on three index domains that are linked by
//! structural transforms:
//!
//! * the polytorus `T^n` (monomials `z^alpha`, [`poly::VPoly`]),
//! * the Boolean cube `{-1,1}^n` (Walsh characters `eps_A`, [`poly::WalshPoly`]),
//! * positive integers (Dirichlet polynomials `sum a_n n^-s`, [`poly::DirichletPoly`]).
//!
//! On top of the estimators, [`harness`] turns type/cotype-style inequalities
//! into falsifiable checks over generated instances and reports margins
//! together with the combined estimator error.

pub mod error;
pub mod harness;
pub mod norms;
pub mod poly;
pub mod primes;
pub mod projections;
pub mod spaces;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
