//! Tensor grids of roots of unity on the torus, and grid suprema on the
//! torus, the sign cube and the real box.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::VPoly;
use crate::Result;

use super::{ErrorBound, EstimateMethod, NormEstimate, Prepared};

/// Hard cap on the number of grid evaluations.
pub const DEFAULT_GRID_BUDGET: u128 = 100_000_000;

/// Fixed chunk length so parallel and serial reductions sum in one order.
const CHUNK: u128 = 4096;

/// Where a supremum grid lives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupDomain {
    Torus,
    Cube,
    Box,
}

fn grid_size(m: usize, n_vars: usize, budget: u128) -> Result<u128> {
    let total = (m as u128)
        .checked_pow(n_vars as u32)
        .ok_or(Error::GridBudgetExceeded {
            points: u128::MAX,
            budget,
        })?;
    if total > budget {
        return Err(Error::GridBudgetExceeded {
            points: total,
            budget,
        });
    }
    Ok(total)
}

/// Sums `f` over the full tensor grid deterministically: fixed-size chunks are
/// reduced in parallel and folded in index order, so the result does not
/// depend on the worker count.
fn chunked_grid_sum<F>(total: u128, fold: F) -> f64
where
    F: Fn(u128, u128) -> f64 + Sync,
{
    let chunks: Vec<(u128, u128)> = {
        let mut v = Vec::new();
        let mut start = 0u128;
        while start < total {
            let end = (start + CHUNK).min(total);
            v.push((start, end));
            start = end;
        }
        v
    };
    let partials: Vec<f64> = chunks
        .par_iter()
        .map(|&(start, end)| fold(start, end))
        .collect();
    partials.iter().sum()
}

/// `((1/M^n) * sum_grid ||P(z)||^q)^(1/q)` over the tensor grid of `M`-th
/// roots of unity. Exact when `q` is an even integer, the space is euclidean
/// and `M > q * maxdeg`: the integrand is then a trigonometric polynomial of
/// per-variable degree at most `q * maxdeg`, integrated exactly by the
/// `M`-point rule. Labeled `grid_gap_unknown` otherwise.
pub fn lq_norm_grid(poly: &VPoly, q: f64, m: usize) -> Result<NormEstimate> {
    lq_norm_grid_guarded(poly, q, m, DEFAULT_GRID_BUDGET)
}

/// Same as [`lq_norm_grid`] with an explicit evaluation budget.
pub fn lq_norm_grid_guarded(
    poly: &VPoly,
    q: f64,
    m: usize,
    budget: u128,
) -> Result<NormEstimate> {
    if q < 1.0 {
        return Err(Error::InvalidParameter(format!("q = {q} must be >= 1")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("grid needs M >= 1".into()));
    }
    let n = poly.n_vars();
    let total = grid_size(m, n, budget)?;
    let roots = unit_roots(m);
    let space = poly.space();
    let prepared = Prepared::new(poly);
    let dim = space.dim();

    let sum = chunked_grid_sum(total, |start, end| {
        let mut digits = decode_digits(start, m, n);
        let mut point = vec![Complex64::new(0.0, 0.0); n];
        let mut value = vec![Complex64::new(0.0, 0.0); dim];
        let mut acc = 0.0f64;
        let mut idx = start;
        while idx < end {
            for (zi, &d) in point.iter_mut().zip(&digits) {
                *zi = roots[d];
            }
            prepared.eval_into(&point, &mut value);
            acc += space.norm_slice(&value).powf(q);
            idx += 1;
            if idx < end {
                increment_digits(&mut digits, m);
            }
        }
        acc
    });

    let mean = sum / total as f64;
    let value = mean.powf(1.0 / q);
    let q_int = q as u64;
    let exact = q.fract() == 0.0
        && q_int.is_multiple_of(2)
        && poly.space().is_euclidean()
        && m as u64 > q_int * poly.max_var_degree() as u64;
    Ok(NormEstimate {
        value,
        method: EstimateMethod::Grid { points: m },
        error: if exact {
            ErrorBound::Exact
        } else {
            ErrorBound::GridGapUnknown
        },
    })
}

/// Max of `||P||` over a finite grid: a lower bound for the true supremum.
/// `Cube` enumerates all of `{-1,1}^n` exhaustively (`M` ignored); `Box` uses
/// `M` equispaced points of `[-1,1]` per variable.
pub fn sup_grid(poly: &VPoly, m: usize, domain: SupDomain) -> Result<NormEstimate> {
    sup_grid_guarded(poly, m, domain, DEFAULT_GRID_BUDGET)
}

/// Same as [`sup_grid`] with an explicit evaluation budget.
pub fn sup_grid_guarded(
    poly: &VPoly,
    m: usize,
    domain: SupDomain,
    budget: u128,
) -> Result<NormEstimate> {
    let n = poly.n_vars();
    let space = poly.space();
    let (points_per_var, point_table): (usize, Vec<Complex64>) = match domain {
        SupDomain::Torus => (m, unit_roots(m)),
        SupDomain::Cube => (
            2,
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        ),
        SupDomain::Box => {
            if m < 2 {
                return Err(Error::InvalidParameter("box grid needs M >= 2".into()));
            }
            let step = 2.0 / (m as f64 - 1.0);
            (
                m,
                (0..m)
                    .map(|j| Complex64::new(-1.0 + step * j as f64, 0.0))
                    .collect(),
            )
        }
    };
    if points_per_var == 0 {
        return Err(Error::InvalidParameter("grid needs M >= 1".into()));
    }
    let total = grid_size(points_per_var, n, budget)?;

    let chunks: Vec<(u128, u128)> = {
        let mut v = Vec::new();
        let mut start = 0u128;
        while start < total {
            let end = (start + CHUNK).min(total);
            v.push((start, end));
            start = end;
        }
        v
    };
    let prepared = Prepared::new(poly);
    let dim = space.dim();
    let max = chunks
        .par_iter()
        .map(|&(start, end)| {
            let mut digits = decode_digits(start, points_per_var, n);
            let mut point = vec![Complex64::new(0.0, 0.0); n];
            let mut value = vec![Complex64::new(0.0, 0.0); dim];
            let mut best = 0.0f64;
            let mut idx = start;
            while idx < end {
                for (zi, &d) in point.iter_mut().zip(&digits) {
                    *zi = point_table[d];
                }
                prepared.eval_into(&point, &mut value);
                best = best.max(space.norm_slice(&value));
                idx += 1;
                if idx < end {
                    increment_digits(&mut digits, points_per_var);
                }
            }
            best
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);

    Ok(NormEstimate {
        value: max,
        method: EstimateMethod::SupGrid {
            points: points_per_var,
            domain,
        },
        error: ErrorBound::GridGapUnknown,
    })
}

fn unit_roots(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}

fn decode_digits(mut index: u128, base: usize, n: usize) -> Vec<usize> {
    let mut digits = vec![0usize; n];
    for d in digits.iter_mut() {
        *d = (index % base as u128) as usize;
        index /= base as u128;
    }
    digits
}

fn increment_digits(digits: &mut [usize], base: usize) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return;
        }
        *d = 0;
    }
}
