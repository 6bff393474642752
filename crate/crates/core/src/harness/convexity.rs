//! Uniform PL-convexity modulus estimation and the weighted Bohr-radius
//! inequality for multivariate polynomials, with its Dirichlet reformulation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::error::Error;
use crate::norms::{lq_norm_auto, EstimateMethod, EstimatorBudget, NormEstimate};
use crate::poly::{bohr_push, omega, VPoly};
use crate::spaces::{NormedSpace, Vector};
use crate::Result;

use super::gen::{gaussian_vector, nonzero_gaussian_vector, rng_for};
use super::{digest_value, ConstantEstimate, ConstantKind, Direction, InequalityReport};

fn mixed_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// One-variable circle quadrature `int_T ||x + z y||^q dz` on `m` roots of
/// unity.
fn circle_moment(space: &NormedSpace, x: &Vector, y: &Vector, q: f64, m: usize) -> f64 {
    let mut sum = 0.0;
    for j in 0..m {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let z = Complex64::new(theta.cos(), theta.sin());
        let mut point = x.clone();
        point.accumulate(y, z);
        sum += space.norm_slice(point.coords()).powf(q);
    }
    sum / m as f64
}

/// Largest `lambda` valid on the sampled pairs for
/// `||x||^q + lambda ||y||^q <= int_T ||x + z y||^q dz`: the minimum of the
/// observed quotients, an upper bound for the true modulus.
pub fn check_plconvexity(
    space: &NormedSpace,
    q: f64,
    samples: usize,
    seed: u64,
) -> Result<ConstantEstimate> {
    if q < 2.0 {
        return Err(Error::InvalidParameter(format!(
            "PL-convexity is stated for q >= 2, got {q}"
        )));
    }
    let grid = 64usize;
    let dim = space.dim();
    let mut best = f64::INFINITY;
    let mut witness = None;
    for i in 0..samples.max(1) {
        let mut rng = rng_for(seed, i as u64 + 1);
        let x = gaussian_vector(&mut rng, dim);
        let y = nonzero_gaussian_vector(&mut rng, dim);
        let nx = space.norm_slice(x.coords());
        let ny = space.norm_slice(y.coords());
        let integral = circle_moment(space, &x, &y, q, grid);
        let lambda = (integral - nx.powf(q)) / ny.powf(q);
        if lambda < best {
            best = lambda;
            witness = Some((x, y));
        }
    }
    let (wx, wy) = witness.expect("at least one sample");
    let mut params = BTreeMap::new();
    params.insert("q".into(), json!(q));
    params.insert("grid_points".into(), json!(grid));
    params.insert("space".into(), serde_json::to_value(space)?);
    Ok(ConstantEstimate {
        name: ConstantKind::PlconvexLambda,
        value: best,
        direction: Direction::UpperWitness,
        search_budget: samples,
        seed,
        witness: json!({ "x": wx, "y": wy }),
        params,
    })
}

fn weighted_coeff_lhs(poly: &VPoly, q: f64, rho: f64) -> NormEstimate {
    let space = poly.space().clone();
    let sum: f64 = poly
        .terms()
        .map(|(alpha, c)| {
            space.norm_slice(c.coords()).powf(q) * rho.powf(alpha.degree() as f64 * q)
        })
        .sum();
    NormEstimate::exact(sum.powf(1.0 / q), EstimateMethod::CoeffSum)
}

/// The Bohr-radius inequality
/// `(sum ||x_alpha||^q rho^{|alpha| q})^{1/q} <= ||P||_{L_q}` at a given
/// `rho`, plus the Dirichlet reformulation through the Bohr push-forward,
/// which must agree with the polynomial side exactly.
pub fn check_isenbeck(
    space: &NormedSpace,
    q: f64,
    rho: f64,
    instances: &[VPoly],
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    let _ = space;
    if !(0.0..=1.0).contains(&rho) || rho == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < rho <= 1, got {rho}"
        )));
    }
    let nested: Vec<Vec<InequalityReport>> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, poly)| -> Result<Vec<InequalityReport>> {
            let rhs = lq_norm_auto(poly, q, mixed_seed(seed, idx), budget)?;
            let lhs = weighted_coeff_lhs(poly, q, rho);
            let digest = digest_value(&json!({
                "check": "isenbeck", "poly": poly.to_json(), "q": q, "rho": rho,
            }));
            let mut params = BTreeMap::new();
            params.insert("q".into(), json!(q));
            params.insert("rho".into(), json!(rho));
            let mut reports = vec![InequalityReport::build(
                "isenbeck",
                lhs.clone(),
                rhs.clone(),
                1.0,
                poly.degree(),
                digest.clone(),
                params.clone(),
            )];

            // Dirichlet reformulation: the same weighted sum through Omega(n)
            let d = bohr_push(poly)?;
            let space = d.space().clone();
            let radio_sum: f64 = d
                .terms()
                .map(|(n, a)| {
                    space.norm_slice(a.coords()).powf(q) * rho.powf(omega(n) as f64 * q)
                })
                .sum();
            let lhs_radio =
                NormEstimate::exact(radio_sum.powf(1.0 / q), EstimateMethod::CoeffSum);
            params.insert(
                "poly_side_lhs".into(),
                json!(lhs.value),
            );
            reports.push(InequalityReport::build(
                "isenbeck_radio",
                lhs_radio,
                rhs,
                1.0,
                poly.degree(),
                digest,
                params,
            ));
            Ok(reports)
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// Largest `rho` surviving every instance: per instance the weighted left
/// side is increasing in `rho`, so a bisection finds the crossing; the
/// minimum over instances is an empirical Bohr radius (an upper bound for
/// the true one).
pub fn isenbeck_search_rho(
    space: &NormedSpace,
    q: f64,
    instances: &[VPoly],
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<ConstantEstimate> {
    let _ = space;
    let per_instance: Vec<(f64, usize)> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, poly)| -> Result<(f64, usize)> {
            let rhs = lq_norm_auto(poly, q, mixed_seed(seed, idx), budget)?.value;
            if weighted_coeff_lhs(poly, q, 1.0).value <= rhs {
                return Ok((1.0, idx));
            }
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if weighted_coeff_lhs(poly, q, mid).value <= rhs {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok((lo, idx))
        })
        .collect::<Result<_>>()?;
    let (value, arg) = per_instance
        .iter()
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((1.0, 0));
    let mut params = BTreeMap::new();
    params.insert("q".into(), json!(q));
    params.insert("instances".into(), json!(instances.len()));
    Ok(ConstantEstimate {
        name: ConstantKind::BohrRho,
        value,
        direction: Direction::UpperWitness,
        search_budget: instances.len(),
        seed,
        witness: instances
            .get(arg)
            .map(|p| p.to_json())
            .unwrap_or(serde_json::Value::Null),
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::gen::{corner_vpolys, random_vpoly, DegreeSpec};
    use crate::poly::MultiIndex;

    fn budget() -> EstimatorBudget {
        EstimatorBudget::default()
    }

    #[test]
    fn euclidean_modulus_is_one() {
        // the cross term integrates away: int ||x + zy||^2 = ||x||^2 + ||y||^2
        let space = NormedSpace::euclidean(2);
        let est = check_plconvexity(&space, 2.0, 40, 3).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6, "lambda {}", est.value);
        assert_eq!(est.direction, Direction::UpperWitness);
    }

    #[test]
    fn ell1_modulus_is_positive_and_recorded() {
        let space = NormedSpace::ellp_f(1.0, 2);
        let est = check_plconvexity(&space, 2.0, 60, 5).unwrap();
        assert!(est.value > 0.0, "lambda {}", est.value);
        assert!(est.witness.get("x").is_some() && est.witness.get("y").is_some());
    }

    #[test]
    fn plconvexity_rejects_small_q() {
        let space = NormedSpace::euclidean(1);
        assert!(check_plconvexity(&space, 1.0, 10, 1).is_err());
    }

    #[test]
    fn euclidean_rho_one_is_parseval_equality() {
        let space = NormedSpace::euclidean(2);
        let mut instances = corner_vpolys(&space, 2, DegreeSpec::AtMost(2));
        instances.push(random_vpoly(&mut rng_for(3, 1), &space, 2, DegreeSpec::AtMost(2), 4));
        let reports = check_isenbeck(&space, 2.0, 1.0, &instances, &budget(), 3).unwrap();
        for r in &reports {
            assert!((r.ratio() - 1.0).abs() < 1e-9, "{}: ratio {}", r.name, r.ratio());
            assert!(r.pass);
        }
    }

    #[test]
    fn single_monomial_passes_for_any_rho() {
        let space = NormedSpace::linf(2);
        let mut p = VPoly::new(2, space.clone());
        p.add_term(MultiIndex::new(vec![2, 1]), Vector::from_reals(&[1.0, -0.5]))
            .unwrap();
        for rho in [0.1, 0.5, 1.0] {
            let reports = check_isenbeck(&space, 2.0, rho, &[p.clone()], &budget(), 1).unwrap();
            // both sides are ||x|| rho^{|alpha|} vs ||x||
            assert!(reports.iter().all(|r| r.pass));
        }
    }

    #[test]
    fn radio_side_equals_the_polynomial_side() {
        let space = NormedSpace::ellp_f(1.0, 2);
        let poly = random_vpoly(&mut rng_for(9, 2), &space, 3, DegreeSpec::AtMost(3), 5);
        let reports = check_isenbeck(&space, 2.0, 0.7, &[poly], &budget(), 9).unwrap();
        let basic = reports.iter().find(|r| r.name == "isenbeck").unwrap();
        let radio = reports.iter().find(|r| r.name == "isenbeck_radio").unwrap();
        assert!((basic.lhs.value - radio.lhs.value).abs() < 1e-12);
    }

    #[test]
    fn rho_search_shrinks_with_more_instances() {
        let space = NormedSpace::linf(2);
        let all: Vec<VPoly> = (0..8)
            .map(|i| random_vpoly(&mut rng_for(15, i + 1), &space, 2, DegreeSpec::AtMost(2), 4))
            .collect();
        let small = isenbeck_search_rho(&space, 2.0, &all[..3], &budget(), 15).unwrap();
        let large = isenbeck_search_rho(&space, 2.0, &all, &budget(), 15).unwrap();
        assert!(large.value <= small.value + 1e-12);

        // re-verify at 0.9 * rho on fresh instances
        let rho = (0.9 * large.value).max(1e-3);
        let fresh: Vec<VPoly> = (0..6)
            .map(|i| random_vpoly(&mut rng_for(16, i + 1), &space, 2, DegreeSpec::AtMost(2), 4))
            .collect();
        let reports = check_isenbeck(&space, 2.0, rho, &fresh, &budget(), 16).unwrap();
        // holdout instances may still bite at the searched radius, but at
        // 0.9x the observed one violations beyond error would be surprising;
        // record rather than assert tightness
        assert!(reports.iter().all(|r| r.pass || r.status == crate::harness::CheckStatus::Inconclusive));
    }
}
