//! Exact expectations over the Boolean cube by exhaustive sign enumeration.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::poly::WalshPoly;
use crate::spaces::Vector;
use crate::Result;

use super::{ErrorBound, EstimateMethod, NormEstimate};

/// Enumeration guard: `2^n` sign patterns.
pub const DEFAULT_CUBE_MAX_VARS: usize = 24;

const CHUNK: u64 = 4096;

/// `((1/2^n) * sum_eps ||W(eps)||^q)^(1/q)`, exact up to float evaluation.
pub fn cube_lq_exact(poly: &WalshPoly, q: f64) -> Result<NormEstimate> {
    cube_lq_exact_guarded(poly, q, DEFAULT_CUBE_MAX_VARS)
}

/// Same as [`cube_lq_exact`] with an explicit variable guard.
pub fn cube_lq_exact_guarded(poly: &WalshPoly, q: f64, max_vars: usize) -> Result<NormEstimate> {
    if q < 1.0 {
        return Err(Error::InvalidParameter(format!("q = {q} must be >= 1")));
    }
    let n = poly.n_vars();
    if n > max_vars {
        return Err(Error::CubeBudgetExceeded { n_vars: n, max: max_vars });
    }
    let space = poly.space();
    let dim = space.dim();
    let masks: Vec<(u64, &Vector)> = poly.terms().map(|(a, c)| (a.mask(), c)).collect();
    let total: u64 = 1u64 << n;

    let n_chunks = total.div_ceil(CHUNK);
    let partials: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut acc_sum = 0.0f64;
            let mut acc = vec![Complex64::new(0.0, 0.0); dim];
            for eps in start..end {
                for a in acc.iter_mut() {
                    *a = Complex64::new(0.0, 0.0);
                }
                for &(mask, coeff) in &masks {
                    let sign = if (mask & eps).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    for (a, b) in acc.iter_mut().zip(coeff.coords()) {
                        *a += b * sign;
                    }
                }
                acc_sum += space.norm_slice(&acc).powf(q);
            }
            acc_sum
        })
        .collect();
    let sum: f64 = partials.iter().sum();
    let mean = sum / total as f64;
    Ok(NormEstimate {
        value: mean.powf(1.0 / q),
        method: EstimateMethod::CubeExact,
        error: ErrorBound::Exact,
    })
}
