//! Homogeneous projections on the Boolean cube, two ways: direct coefficient
//! filtering and the biorthogonal-integral formula driven by the exact
//! Hilbert inverse. The two must agree coefficient-exactly, which the tests
//! and the acceptance suite enforce.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::norms::cube_lq_exact;
use crate::poly::{SubsetIndex, WalshPoly};
use crate::spaces::{NormedSpace, Vector};
use crate::Result;

mod rational;

pub use rational::{
    hilbert_inverse, hilbert_matrix, lemma3_envelope, projection_polynomials,
    ProjectionPolynomial, RationalMatrix, RATIONAL_DEGREE_GUARD,
};

/// Terms with `|A| = k` only: the `k`-homogeneous Walsh projection `P_k`.
pub fn walsh_homog_filter(poly: &WalshPoly, k: usize) -> WalshPoly {
    let mut out = WalshPoly::new(poly.n_vars(), poly.space().clone());
    for (subset, coeff) in poly.terms() {
        if subset.card() == k {
            out.add_term(subset.clone(), coeff.clone()).expect("same shape");
        }
    }
    out
}

/// The `k`-homogeneous projection through the integral
/// `P_k(eps) = int_0^1 P(t * eps) p_{k+1}(t) dt`: substituting `t * eps` into
/// the tetrahedral lift scales the degree-`j` part by `t^j`, so the integral
/// reduces to exact rational moment weights on the degree parts. The weights
/// are `delta_{jk}` in exact arithmetic, hence the result equals
/// [`walsh_homog_filter`] coefficient-exactly.
pub fn lemma3_projection(poly: &WalshPoly, k: usize, m: usize) -> Result<WalshPoly> {
    let degree = poly.degree() as usize;
    if degree > m {
        return Err(Error::ProjectionDegree { k: degree, m });
    }
    if k > m {
        return Err(Error::ProjectionDegree { k, m });
    }
    let basis = projection_polynomials(m)?;
    let p_next = &basis[k];
    // weight on the degree-j part: int_0^1 t^j p_{k+1}(t) dt, exact
    let weights: Vec<f64> = (0..=m)
        .map(|j| p_next.moment(j).to_f64().expect("finite weight"))
        .collect();
    let mut out = WalshPoly::new(poly.n_vars(), poly.space().clone());
    for (subset, coeff) in poly.terms() {
        let w = weights[subset.card()];
        if w != 0.0 {
            out.add_term(subset.clone(), coeff.scaled(Complex64::new(w, 0.0)))?;
        }
    }
    Ok(out)
}

/// Empirical lower bound on the norm of the degree-`m` Walsh projection on
/// `L_2({-1,1}^n, X)`: the best ratio
/// `||P_m W||_2 / ||W||_2` over random polynomials, refined by coordinate
/// ascent on the coefficients. The true operator norm is a supremum over an
/// infinite ball, so only the lower-bound direction is claimed.
pub fn rademacher_projection_norm(
    space: &NormedSpace,
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if n > crate::norms::DEFAULT_CUBE_MAX_VARS {
        return Err(Error::CubeBudgetExceeded {
            n_vars: n,
            max: crate::norms::DEFAULT_CUBE_MAX_VARS,
        });
    }
    let dim = space.dim();
    let ratio_of = |w: &WalshPoly| -> Result<f64> {
        let denom = cube_lq_exact(w, 2.0)?.value;
        if denom < 1e-12 {
            return Ok(0.0);
        }
        let numer = cube_lq_exact(&walsh_homog_filter(w, m), 2.0)?.value;
        Ok(numer / denom)
    };
    let mut best = 0.0f64;
    for trial in 0..trials.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64 + 1);
        let mut w = random_walsh_for_projection(&mut rng, space, n, m)?;
        let mut current = ratio_of(&w)?;
        let mut step = 0.5f64;
        for _ in 0..40 {
            let candidate = perturb_one_coefficient(&mut rng, &w, dim, step)?;
            let value = ratio_of(&candidate)?;
            if value > current {
                current = value;
                w = candidate;
            } else {
                step *= 0.85;
            }
        }
        best = best.max(current);
    }
    Ok(best)
}

fn random_walsh_for_projection(
    rng: &mut ChaCha8Rng,
    space: &NormedSpace,
    n: usize,
    m: usize,
) -> Result<WalshPoly> {
    let mut w = WalshPoly::new(n, space.clone());
    let full: u64 = (1u64 << n) - 1;
    let n_terms = 2 * n + 2;
    let mut has_degree_m = false;
    for _ in 0..n_terms {
        let mask = rng.gen::<u64>() & full;
        if mask.count_ones() as usize == m {
            has_degree_m = true;
        }
        w.add_term(SubsetIndex::from_mask(mask), random_vector(rng, space.dim()))?;
    }
    if !has_degree_m && m <= n {
        // guarantee a nonzero numerator
        let mask = (1u64 << m) - 1;
        w.add_term(SubsetIndex::from_mask(mask), random_vector(rng, space.dim()))?;
    }
    Ok(w)
}

fn perturb_one_coefficient(
    rng: &mut ChaCha8Rng,
    w: &WalshPoly,
    dim: usize,
    step: f64,
) -> Result<WalshPoly> {
    let terms: Vec<(SubsetIndex, Vector)> =
        w.terms().map(|(a, c)| (a.clone(), c.clone())).collect();
    if terms.is_empty() {
        return Ok(w.clone());
    }
    let pick = rng.gen_range(0..terms.len());
    let coord = rng.gen_range(0..dim);
    let delta = Complex64::new(
        step * (rng.gen::<f64>() * 2.0 - 1.0),
        step * (rng.gen::<f64>() * 2.0 - 1.0),
    );
    let mut out = WalshPoly::new(w.n_vars(), w.space().clone());
    for (i, (subset, mut coeff)) in terms.into_iter().enumerate() {
        if i == pick {
            coeff.coords_mut()[coord] += delta;
        }
        out.add_term(subset, coeff)?;
    }
    Ok(out)
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::new(
        (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect(),
    )
}
