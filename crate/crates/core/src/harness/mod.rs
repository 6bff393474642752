//! Inequality-verification experiments: each theorem-backed inequality
//! becomes a falsifiable check over generated instances, reported with its
//! margin and the combined estimator error.
//!
//! A report never calls a near-miss a failure: when the point estimates
//! violate the inequality but the gap is within the combined error, the
//! status is `inconclusive`. A `fail` is a violation beyond the error bars,
//! which the theorems rule out for a correct implementation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::norms::NormEstimate;

mod checks;
mod convexity;
mod dirichlet;
mod experiment;
pub mod gen;

pub use checks::{
    check_cotype_def, check_hypercontractive_cotype, check_kahane_torus, check_kahane_walsh,
    check_lemma1_bridge, check_type_def, check_walsh_cotype_def, check_walsh_type_def,
    estimate_cotype_constant, estimate_type_constant,
};
pub use convexity::{check_isenbeck, check_plconvexity, isenbeck_search_rho};
pub use dirichlet::{check_corollary_delta, check_hy_dirichlet_cotype, check_hy_dirichlet_type};
pub use experiment::{
    run_experiment, write_outputs, BudgetConfig, CheckConfig, ExperimentConfig, RunBundle,
};

/// Relative float slack added to every combined error, covering pure
/// round-off in exact estimates.
pub const FLOAT_SLACK: f64 = 1e-9;

/// Outcome of one inequality instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// The point estimates already satisfy the inequality.
    Pass,
    /// Violated by less than the combined estimator error.
    Inconclusive,
    /// Violated beyond the combined error.
    Fail,
}

/// One verified inequality instance: `lhs <= constant * rhs` up to the
/// combined error of the two estimates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: NormEstimate,
    pub rhs: NormEstimate,
    pub constant: f64,
    pub exponent_m: u32,
    /// `constant * rhs.value - lhs.value`.
    pub margin: f64,
    /// `lhs` halfwidth plus `constant` times the `rhs` halfwidth plus float
    /// slack.
    pub combined_error: f64,
    /// `margin + combined_error >= 0`.
    pub pass: bool,
    pub status: CheckStatus,
    pub instance_digest: String,
    pub params: BTreeMap<String, Value>,
}

impl InequalityReport {
    pub fn build(
        name: impl Into<String>,
        lhs: NormEstimate,
        rhs: NormEstimate,
        constant: f64,
        exponent_m: u32,
        instance_digest: String,
        params: BTreeMap<String, Value>,
    ) -> Self {
        let margin = constant * rhs.value - lhs.value;
        let combined_error = lhs.halfwidth()
            + constant * rhs.halfwidth()
            + FLOAT_SLACK * (lhs.value.abs() + (constant * rhs.value).abs() + 1.0);
        let status = if margin >= 0.0 {
            CheckStatus::Pass
        } else if margin + combined_error >= 0.0 {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Fail
        };
        InequalityReport {
            name: name.into(),
            lhs,
            rhs,
            constant,
            exponent_m,
            margin,
            combined_error,
            pass: status != CheckStatus::Fail,
            status,
            instance_digest,
            params,
        }
    }

    /// Placeholder row for a check that could not run; never a failure.
    pub fn inconclusive(name: impl Into<String>, reason: &str) -> Self {
        let zero = NormEstimate::exact(0.0, crate::norms::EstimateMethod::CoeffSum);
        let mut params = BTreeMap::new();
        params.insert("error".to_string(), Value::String(reason.to_string()));
        InequalityReport {
            name: name.into(),
            lhs: zero.clone(),
            rhs: zero,
            constant: 0.0,
            exponent_m: 0,
            margin: 0.0,
            combined_error: 0.0,
            pass: true,
            status: CheckStatus::Inconclusive,
            instance_digest: String::new(),
            params,
        }
    }

    /// Observed ratio `lhs / rhs`, with `0/0` read as 1.
    pub fn ratio(&self) -> f64 {
        if self.rhs.value == 0.0 {
            if self.lhs.value == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs.value / self.rhs.value
        }
    }
}

/// Which constant a search estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    Cotype,
    Type,
    EmpiricalKahane,
    BohrRho,
    PlconvexLambda,
}

/// Search direction of a constant estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// A witnessed lower bound for the true constant.
    LowerBound,
    /// An upper bound witnessed by the minimizing instance.
    UpperWitness,
}

/// A searched constant with the instance witnessing it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub name: ConstantKind,
    pub value: f64,
    pub direction: Direction,
    pub search_budget: usize,
    pub seed: u64,
    pub witness: Value,
    pub params: BTreeMap<String, Value>,
}

/// Canonical SHA-256 hex digest of a JSON value.
pub fn digest_value(value: &Value) -> String {
    let canonical = serde_json::to_string(value).expect("serializable");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let bytes = hasher.finalize();
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
