//! Monte Carlo estimators with deterministic, splittable random streams.
//!
//! Samples are drawn in fixed batches; batch `b` always reads stream `b` of a
//! ChaCha generator seeded with the caller's seed, so parallel and serial runs
//! produce bit-identical results.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::poly::{VPoly, WalshPoly};
use crate::spaces::Vector;
use crate::Result;

use super::{ErrorBound, EstimateMethod, NormEstimate, Prepared, SamplerSpec};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

const BATCH: usize = 1024;

fn batch_rng(seed: u64, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64 + 1);
    rng
}

/// Mean and 99% CI from per-batch `(sum, sum_sq)` folds, reduced in fixed
/// batch order.
fn mc_batches<F>(seed: u64, samples: usize, batch_fold: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng, usize) -> (f64, f64) + Sync,
{
    let n_batches = samples.div_ceil(BATCH);
    let partials: Vec<(f64, f64)> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(seed, b);
            let count = BATCH.min(samples - b * BATCH);
            batch_fold(&mut rng, count)
        })
        .collect();
    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), &(s, s2)| (a + s, b + s2));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    let ci_mean = Z_99 * (var / n).sqrt();
    (mean, ci_mean)
}

/// Delta method for the `1/q` root: a CI for `E[Y]` becomes a CI for
/// `E[Y]^{1/q}`.
fn root_with_ci(mean: f64, ci_mean: f64, q: f64) -> (f64, f64) {
    if mean <= 0.0 {
        return (0.0, ci_mean.powf(1.0 / q));
    }
    let value = mean.powf(1.0 / q);
    let halfwidth = value / (q * mean) * ci_mean;
    (value, halfwidth)
}

/// Empirical `L_q(T^n)` norm over i.i.d. uniform torus points, with a 99%
/// confidence interval on the final value.
pub fn lq_norm_mc(poly: &VPoly, q: f64, spec: &SamplerSpec) -> Result<NormEstimate> {
    if spec.samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs at least 100 samples, got {}",
            spec.samples
        )));
    }
    if q < 1.0 {
        return Err(Error::InvalidParameter(format!("q = {q} must be >= 1")));
    }
    let n = poly.n_vars();
    let space = poly.space().clone();
    let prepared = Prepared::new(poly);
    let dim = space.dim();
    let (mean, ci_mean) = mc_batches(spec.seed, spec.samples, |rng, count| {
        let mut point = vec![Complex64::new(1.0, 0.0); n];
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        for _ in 0..count {
            for &v in prepared.used_vars() {
                let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                let (sin, cos) = theta.sin_cos();
                point[v] = Complex64::new(cos, sin);
            }
            prepared.eval_into(&point, &mut acc);
            let y = space.norm_slice(&acc).powf(q);
            sum += y;
            sum_sq += y * y;
        }
        (sum, sum_sq)
    });
    let (value, halfwidth) = root_with_ci(mean, ci_mean, q);
    Ok(NormEstimate {
        value,
        method: EstimateMethod::Mc {
            samples: spec.samples,
            seed: spec.seed,
        },
        error: ErrorBound::Ci {
            halfwidth,
            level: 0.99,
        },
    })
}

/// Empirical `L_q({-1,1}^n)` norm over uniform sign vectors; the fallback when
/// exhaustive enumeration is over budget.
pub fn cube_lq_mc(poly: &WalshPoly, q: f64, spec: &SamplerSpec) -> Result<NormEstimate> {
    if spec.samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs at least 100 samples, got {}",
            spec.samples
        )));
    }
    let n = poly.n_vars();
    if n >= 64 {
        return Err(Error::InvalidParameter(format!(
            "sign masks cap the cube sampler at 63 variables, got {n}"
        )));
    }
    let space = poly.space().clone();
    let masks: Vec<(u64, &Vector)> = poly.terms().map(|(a, c)| (a.mask(), c)).collect();
    let dim = space.dim();
    let (mean, ci_mean) = mc_batches(spec.seed, spec.samples, |rng, count| {
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        for _ in 0..count {
            let eps: u64 = rng.gen::<u64>() & ((1u64 << n) - 1);
            for a in acc.iter_mut() {
                *a = Complex64::new(0.0, 0.0);
            }
            for &(mask, coeff) in &masks {
                let sign = if (mask & eps).count_ones().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                for (a, b) in acc.iter_mut().zip(coeff.coords()) {
                    *a += b * sign;
                }
            }
            let y = space.norm_slice(&acc).powf(q);
            sum += y;
            sum_sq += y * y;
        }
        (sum, sum_sq)
    });
    let (value, halfwidth) = root_with_ci(mean, ci_mean, q);
    Ok(NormEstimate {
        value,
        method: EstimateMethod::CubeMc {
            samples: spec.samples,
            seed: spec.seed,
        },
        error: ErrorBound::Ci {
            halfwidth,
            level: 0.99,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{l2_parseval, lq_norm_grid};
    use crate::poly::{MultiIndex, SubsetIndex};
    use crate::spaces::NormedSpace;

    fn scalar_poly(n_vars: usize, terms: &[(&[u32], f64)]) -> VPoly {
        let mut p = VPoly::new(n_vars, NormedSpace::euclidean(1));
        for (exps, c) in terms {
            p.add_term(
                MultiIndex::new(exps.to_vec()),
                Vector::new(vec![Complex64::new(*c, 0.0)]),
            )
            .unwrap();
        }
        p
    }

    #[test]
    fn constant_polynomial_has_zero_ci() {
        let p = scalar_poly(2, &[(&[0, 0], 2.0)]);
        let est = lq_norm_mc(&p, 3.0, &SamplerSpec::new(7, 500)).unwrap();
        assert!((est.value - 2.0).abs() < 1e-12);
        assert_eq!(est.halfwidth(), 0.0);
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let p = scalar_poly(2, &[(&[1, 0], 1.0), (&[1, 2], 0.5)]);
        let a = lq_norm_mc(&p, 2.0, &SamplerSpec::new(42, 5000)).unwrap();
        let b = lq_norm_mc(&p, 2.0, &SamplerSpec::new(42, 5000)).unwrap();
        assert_eq!(a, b);
        let c = lq_norm_mc(&p, 2.0, &SamplerSpec::new(43, 5000)).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn agrees_with_grid_within_the_interval() {
        let p = scalar_poly(2, &[(&[1, 0], 1.0), (&[0, 1], -0.5), (&[1, 1], 0.25)]);
        let exact = l2_parseval(&p).unwrap().value;
        let grid = lq_norm_grid(&p, 2.0, 5).unwrap().value;
        assert!((grid - exact).abs() < 1e-12);
        let mc = lq_norm_mc(&p, 2.0, &SamplerSpec::new(11, 40_000)).unwrap();
        assert!(
            (mc.value - exact).abs() <= mc.halfwidth(),
            "mc {} vs exact {} outside ci {}",
            mc.value,
            exact,
            mc.halfwidth()
        );
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let p = scalar_poly(1, &[(&[1], 1.0)]);
        assert!(lq_norm_mc(&p, 2.0, &SamplerSpec::new(1, 99)).is_err());
    }

    #[test]
    fn cube_mc_rejects_oversized_masks() {
        let w = WalshPoly::new(70, NormedSpace::euclidean(1));
        assert!(cube_lq_mc(&w, 2.0, &SamplerSpec::new(1, 200)).is_err());
    }

    #[test]
    fn cube_mc_matches_known_expectation() {
        // E|eps1 + eps2| = 1, so the L_1 estimate converges to 1
        let mut w = WalshPoly::new(2, NormedSpace::euclidean(1));
        for m in [1u32, 2] {
            w.add_term(
                SubsetIndex::new(vec![m]).unwrap(),
                Vector::new(vec![Complex64::new(1.0, 0.0)]),
            )
            .unwrap();
        }
        let est = cube_lq_mc(&w, 1.0, &SamplerSpec::new(3, 30_000)).unwrap();
        assert!((est.value - 1.0).abs() <= est.halfwidth() + 1e-9);
    }
}
