//! Norm and expectation estimators: exact Parseval, tensor-grid quadrature on
//! the torus, Monte Carlo with confidence intervals, exact enumeration on the
//! Boolean cube, and grid suprema.
//!
//! Every estimate carries its method and an error tag: `exact` only where an
//! identity or exhaustive enumeration applies, a 99% confidence interval for
//! Monte Carlo, and `grid_gap_unknown` otherwise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::VPoly;
use crate::spaces::Vector;
use crate::Result;

mod cube;
mod grid;
mod mc;

pub use cube::{cube_lq_exact, cube_lq_exact_guarded, DEFAULT_CUBE_MAX_VARS};
pub use grid::{
    lq_norm_grid, lq_norm_grid_guarded, sup_grid, sup_grid_guarded, SupDomain,
    DEFAULT_GRID_BUDGET,
};
pub use mc::{cube_lq_mc, lq_norm_mc, Z_99};

/// How an estimate was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimateMethod {
    Parseval,
    Grid { points: usize },
    Mc { samples: usize, seed: u64 },
    CubeExact,
    CubeMc { samples: usize, seed: u64 },
    SupGrid { points: usize, domain: SupDomain },
    /// Exact weighted sum over the coefficient side of an inequality.
    CoeffSum,
}

/// What is known about the estimate's error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorBound {
    /// Exact up to float evaluation.
    Exact,
    /// Normal-approximation confidence interval on the final value.
    Ci { halfwidth: f64, level: f64 },
    /// Deterministic estimate without a quantitative gap bound.
    GridGapUnknown,
}

/// The result of any `L_q` or expectation computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub method: EstimateMethod,
    pub error: ErrorBound,
}

impl NormEstimate {
    pub fn exact(value: f64, method: EstimateMethod) -> Self {
        NormEstimate {
            value,
            method,
            error: ErrorBound::Exact,
        }
    }

    /// Quantified halfwidth: zero unless a confidence interval is attached.
    pub fn halfwidth(&self) -> f64 {
        match &self.error {
            ErrorBound::Ci { halfwidth, .. } => *halfwidth,
            ErrorBound::Exact | ErrorBound::GridGapUnknown => 0.0,
        }
    }
}

/// Deterministic sampling plan for the Monte Carlo estimators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub seed: u64,
    pub samples: usize,
    /// Grid points per variable, for estimators that mix grid and sampling.
    pub grid_points: usize,
}

impl SamplerSpec {
    pub fn new(seed: u64, samples: usize) -> Self {
        SamplerSpec {
            seed,
            samples: samples.max(1),
            grid_points: 1,
        }
    }
}

/// Evaluates `sum x_alpha z^alpha` at a point of the torus; each coordinate
/// must have unit modulus within `1e-12`.
pub fn eval_at(poly: &VPoly, z: &[Complex64]) -> Result<Vector> {
    if z.len() != poly.n_vars() {
        return Err(Error::VarCountMismatch {
            expected: poly.n_vars(),
            got: z.len(),
        });
    }
    for (i, zi) in z.iter().enumerate() {
        let modulus = zi.norm();
        if (modulus - 1.0).abs() > 1e-12 {
            return Err(Error::NotOnTorus { index: i, modulus });
        }
    }
    Ok(eval_unchecked(poly, z))
}

/// Evaluation without the torus check, shared with box and cube grids.
pub(crate) fn eval_unchecked(poly: &VPoly, z: &[Complex64]) -> Vector {
    let prepared = Prepared::new(poly);
    let mut acc = vec![Complex64::new(0.0, 0.0); poly.space().dim()];
    prepared.eval_into(z, &mut acc);
    Vector::new(acc)
}

/// One monomial as `(variable, exponent)` pairs plus its coefficient.
type TermProgram = (Vec<(usize, u32)>, Vec<Complex64>);

/// A polynomial compiled to sparse term programs, so the evaluation loops
/// allocate nothing per point.
pub(crate) struct Prepared {
    dim: usize,
    terms: Vec<TermProgram>,
    used_vars: Vec<usize>,
}

impl Prepared {
    pub(crate) fn new(poly: &VPoly) -> Self {
        let mut used = vec![false; poly.n_vars()];
        let terms = poly
            .terms()
            .map(|(alpha, coeff)| {
                let exps: Vec<(usize, u32)> = alpha
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        used[i] = true;
                        (i, e)
                    })
                    .collect();
                (exps, coeff.coords().to_vec())
            })
            .collect();
        Prepared {
            dim: poly.space().dim(),
            terms,
            used_vars: used
                .iter()
                .enumerate()
                .filter(|&(_, &u)| u)
                .map(|(i, _)| i)
                .collect(),
        }
    }

    /// Variables that occur in some monomial; the rest integrate out and
    /// never need sampling.
    pub(crate) fn used_vars(&self) -> &[usize] {
        &self.used_vars
    }

    /// Accumulates `P(z)` into `acc`, which must have length `dim`.
    pub(crate) fn eval_into(&self, z: &[Complex64], acc: &mut [Complex64]) {
        debug_assert_eq!(acc.len(), self.dim);
        for a in acc.iter_mut() {
            *a = Complex64::new(0.0, 0.0);
        }
        for (exps, coeff) in &self.terms {
            let mut monomial = Complex64::new(1.0, 0.0);
            for &(var, e) in exps {
                monomial *= z[var].powu(e);
            }
            for (a, c) in acc.iter_mut().zip(coeff) {
                *a += c * monomial;
            }
        }
    }
}

/// Exact `L_2` norm on a euclidean space: `sqrt(sum ||x_alpha||_2^2)` by
/// orthonormality of the monomials.
pub fn l2_parseval(poly: &VPoly) -> Result<NormEstimate> {
    if !poly.space().is_euclidean() {
        return Err(Error::ParsevalUnavailable);
    }
    let sum: f64 = poly
        .terms()
        .map(|(_, coeff)| coeff.coords().iter().map(|c| c.norm_sqr()).sum::<f64>())
        .sum();
    Ok(NormEstimate::exact(sum.sqrt(), EstimateMethod::Parseval))
}

/// Budget knobs shared by the automatic estimator selection.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EstimatorBudget {
    pub grid_max_points: u128,
    pub cube_max_vars: usize,
    pub mc_samples: usize,
}

impl Default for EstimatorBudget {
    fn default() -> Self {
        EstimatorBudget {
            grid_max_points: DEFAULT_GRID_BUDGET,
            cube_max_vars: DEFAULT_CUBE_MAX_VARS,
            mc_samples: 20_000,
        }
    }
}

/// Soft point cap for automatically chosen grids; larger jobs go to Monte
/// Carlo, whose cost does not grow with the variable count.
const AUTO_GRID_SOFT_CAP: u128 = 1 << 18;

/// Picks the best available `L_q(T^n)` estimator: Parseval when exact, a
/// roots-of-unity grid when it is small enough, Monte Carlo otherwise.
/// Polynomials with at most one term short-circuit: a single monomial has
/// constant modulus on the torus, so every `L_q` norm is the coefficient
/// norm exactly.
pub fn lq_norm_auto(poly: &VPoly, q: f64, seed: u64, budget: &EstimatorBudget) -> Result<NormEstimate> {
    if poly.term_count() <= 1 {
        let value = poly
            .terms()
            .next()
            .map(|(_, c)| poly.space().norm_slice(c.coords()))
            .unwrap_or(0.0);
        return Ok(NormEstimate::exact(value, EstimateMethod::CoeffSum));
    }
    if q == 2.0 && poly.space().is_euclidean() {
        return l2_parseval(poly);
    }
    let max_deg = poly.max_var_degree() as usize;
    let m_exact = (q.ceil() as usize) * max_deg + 1;
    let m = m_exact.max(8);
    let n = poly.n_vars() as u32;
    let cap = AUTO_GRID_SOFT_CAP.min(budget.grid_max_points);
    if (m as u128).checked_pow(n).is_some_and(|p| p <= cap) {
        return lq_norm_grid_guarded(poly, q, m, budget.grid_max_points);
    }
    lq_norm_mc(poly, q, &SamplerSpec::new(seed, budget.mc_samples))
}
