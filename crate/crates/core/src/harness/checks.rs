//! Checks for the type/cotype definitions, their hypercontractive polynomial
//! versions, the torus/cube bridge and the Kahane-type norm comparisons.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::norms::{
    lq_norm_auto, sup_grid, EstimateMethod, EstimatorBudget, NormEstimate, SupDomain,
};
use crate::poly::{homogeneous_part, tetra_to_walsh, VPoly, WalshPoly};
use crate::projections::lemma3_envelope;
use crate::spaces::{conjugate_exponent, NormedSpace, Vector};
use crate::Result;

use super::gen::{degree_one_coeffs, degree_one_poly, rng_for};
use super::{digest_value, ConstantEstimate, ConstantKind, Direction, InequalityReport};

const ONE_PLUS_SQRT2: f64 = 2.414_213_562_373_095;

/// Exact `(sum v_i^q)^{1/q}` labeled as a coefficient-side sum.
pub(crate) fn coeff_sum_estimate(values: impl Iterator<Item = f64>, q: f64) -> NormEstimate {
    let sum: f64 = values.map(|v| v.powf(q)).sum();
    NormEstimate::exact(sum.powf(1.0 / q), EstimateMethod::CoeffSum)
}

/// `(sum_alpha ||x_alpha||^q)^{1/q}` over the support.
pub(crate) fn vpoly_coeff_lq(poly: &VPoly, q: f64) -> NormEstimate {
    let space = poly.space().clone();
    coeff_sum_estimate(poly.terms().map(move |(_, c)| space.norm_slice(c.coords())), q)
}

fn walsh_coeff_lq(poly: &WalshPoly, q: f64) -> NormEstimate {
    let space = poly.space().clone();
    coeff_sum_estimate(poly.terms().map(move |(_, c)| space.norm_slice(c.coords())), q)
}

fn mixed_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// The cotype definition on degree-one polynomials: coefficient `l_q` sum
/// against the `L_q` norm of `sum x_i z_i`. With no constant supplied, the
/// row records the observed ratio as its constant, making it a measurement;
/// with a constant it is a falsifiable check.
pub fn check_cotype_def(
    space: &NormedSpace,
    q: f64,
    instances: &[Vec<Vector>],
    constant: Option<f64>,
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    if q < 2.0 {
        return Err(crate::error::Error::InvalidParameter(format!(
            "cotype needs q >= 2, got {q}"
        )));
    }
    instances
        .par_iter()
        .enumerate()
        .map(|(idx, coeffs)| {
            let poly = degree_one_poly(space, coeffs);
            let lhs = coeff_sum_estimate(
                coeffs.iter().map(|x| space.norm_slice(x.coords())),
                q,
            );
            let rhs = lq_norm_auto(&poly, q, mixed_seed(seed, idx), budget)?;
            let ratio = if rhs.value > 0.0 { lhs.value / rhs.value } else { 1.0 };
            let c = constant.unwrap_or(ratio);
            let digest = digest_value(&json!({
                "check": "cotype_def", "coeffs": coeffs, "q": q,
            }));
            let mut params = BTreeMap::new();
            params.insert("q".into(), json!(q));
            params.insert("n".into(), json!(coeffs.len()));
            params.insert("ratio".into(), json!(ratio));
            Ok(InequalityReport::build(
                "cotype_def", lhs, rhs, c, 1, digest, params,
            ))
        })
        .collect()
}

/// The type definition, inequality reversed: `L_p` norm of the degree-one
/// polynomial against the coefficient `l_p` sum.
pub fn check_type_def(
    space: &NormedSpace,
    p: f64,
    instances: &[Vec<Vector>],
    constant: Option<f64>,
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    if !(1.0..=2.0).contains(&p) {
        return Err(crate::error::Error::InvalidParameter(format!(
            "type needs 1 <= p <= 2, got {p}"
        )));
    }
    instances
        .par_iter()
        .enumerate()
        .map(|(idx, coeffs)| {
            let poly = degree_one_poly(space, coeffs);
            let lhs = lq_norm_auto(&poly, p, mixed_seed(seed, idx), budget)?;
            let rhs = coeff_sum_estimate(
                coeffs.iter().map(|x| space.norm_slice(x.coords())),
                p,
            );
            let ratio = if rhs.value > 0.0 { lhs.value / rhs.value } else { 1.0 };
            let c = constant.unwrap_or(ratio);
            let digest = digest_value(&json!({
                "check": "type_def", "coeffs": coeffs, "p": p,
            }));
            let mut params = BTreeMap::new();
            params.insert("p".into(), json!(p));
            params.insert("n".into(), json!(coeffs.len()));
            params.insert("ratio".into(), json!(ratio));
            Ok(InequalityReport::build(
                "type_def", lhs, rhs, c, 1, digest, params,
            ))
        })
        .collect()
}

fn ascent_ratio(
    space: &NormedSpace,
    q: f64,
    coeffs: &[Vector],
    cotype_side: bool,
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<f64> {
    let poly = degree_one_poly(space, coeffs);
    let norm = lq_norm_auto(&poly, q, seed, budget)?.value;
    let sum = coeff_sum_estimate(coeffs.iter().map(|x| space.norm_slice(x.coords())), q).value;
    Ok(if cotype_side {
        if norm > 1e-12 { sum / norm } else { 0.0 }
    } else if sum > 1e-12 {
        norm / sum
    } else {
        0.0
    })
}

fn estimate_best_ratio(
    space: &NormedSpace,
    q: f64,
    n: usize,
    budget_instances: usize,
    seed: u64,
    cotype_side: bool,
    est_budget: &EstimatorBudget,
) -> Result<(f64, Vec<Vector>)> {
    let mut best = 0.0f64;
    let mut witness: Vec<Vector> = Vec::new();
    for i in 0..budget_instances.max(1) {
        let mut rng = rng_for(seed, i as u64 + 1);
        let coeffs = degree_one_coeffs(&mut rng, space, n);
        let r = ascent_ratio(space, q, &coeffs, cotype_side, est_budget, seed)?;
        if r > best {
            best = r;
            witness = coeffs;
        }
    }
    // coordinate ascent around the best random start
    if !witness.is_empty() {
        let mut rng = rng_for(seed, 0);
        let mut step = 0.5f64;
        for _ in 0..80 {
            let mut candidate = witness.clone();
            let pick = rng.gen_range(0..candidate.len());
            let coord = rng.gen_range(0..space.dim());
            let delta = Complex64::new(
                step * (rng.gen::<f64>() * 2.0 - 1.0),
                step * (rng.gen::<f64>() * 2.0 - 1.0),
            );
            candidate[pick].coords_mut()[coord] += delta;
            let r = ascent_ratio(space, q, &candidate, cotype_side, est_budget, seed)?;
            if r > best {
                best = r;
                witness = candidate;
            } else {
                step *= 0.9;
            }
        }
    }
    Ok((best, witness))
}

/// Witnessed lower bound on the cotype constant `C_q(X)`: the best ratio over
/// random degree-one instances plus coordinate-ascent refinement.
pub fn estimate_cotype_constant(
    space: &NormedSpace,
    q: f64,
    n: usize,
    budget: usize,
    seed: u64,
    est_budget: &EstimatorBudget,
) -> Result<ConstantEstimate> {
    if q < 2.0 {
        return Err(crate::error::Error::InvalidParameter(format!(
            "cotype needs q >= 2, got {q}"
        )));
    }
    let (value, witness) = estimate_best_ratio(space, q, n, budget, seed, true, est_budget)?;
    let mut params = BTreeMap::new();
    params.insert("q".into(), json!(q));
    params.insert("n".into(), json!(n));
    params.insert("space".into(), serde_json::to_value(space)?);
    Ok(ConstantEstimate {
        name: ConstantKind::Cotype,
        value,
        direction: Direction::LowerBound,
        search_budget: budget,
        seed,
        witness: json!({ "coeffs": witness }),
        params,
    })
}

/// Witnessed lower bound on the type constant `T_p(X)`.
pub fn estimate_type_constant(
    space: &NormedSpace,
    p: f64,
    n: usize,
    budget: usize,
    seed: u64,
    est_budget: &EstimatorBudget,
) -> Result<ConstantEstimate> {
    if !(1.0..=2.0).contains(&p) {
        return Err(crate::error::Error::InvalidParameter(format!(
            "type needs 1 <= p <= 2, got {p}"
        )));
    }
    let (value, witness) = estimate_best_ratio(space, p, n, budget, seed, false, est_budget)?;
    let mut params = BTreeMap::new();
    params.insert("p".into(), json!(p));
    params.insert("n".into(), json!(n));
    params.insert("space".into(), serde_json::to_value(space)?);
    Ok(ConstantEstimate {
        name: ConstantKind::Type,
        value,
        direction: Direction::LowerBound,
        search_budget: budget,
        seed,
        witness: json!({ "coeffs": witness }),
        params,
    })
}

/// The hypercontractive cotype inequality on degree-`m` polynomials:
/// coefficient `l_q` sum against `C^m` times the `L_q` norm. `C` defaults to
/// the theorem-chain value `20 * B * C_q` with `B` and `C_q` measured.
pub fn check_hypercontractive_cotype(
    space: &NormedSpace,
    q: f64,
    instances: &[VPoly],
    c_hyp: Option<f64>,
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    let c_q_est = match c_hyp {
        Some(_) => None,
        None => Some(estimate_cotype_constant(space, q, 3, 24, seed, budget)?.value),
    };
    instances
        .par_iter()
        .enumerate()
        .map(|(idx, poly)| {
            let m = poly.degree();
            let per_degree = match c_hyp {
                Some(c) => c,
                None => {
                    let envelope = lemma3_envelope(m.max(1) as usize)?;
                    let b = envelope.powf(1.0 / m.max(1) as f64);
                    20.0 * b * c_q_est.unwrap_or(1.0).max(1.0)
                }
            };
            let constant = per_degree.powi(m as i32);
            let lhs = vpoly_coeff_lq(poly, q);
            let rhs = lq_norm_auto(poly, q, mixed_seed(seed, idx), budget)?;
            let digest = digest_value(&json!({
                "check": "hypercontractive_cotype", "poly": poly.to_json(), "q": q,
            }));
            let mut params = BTreeMap::new();
            params.insert("q".into(), json!(q));
            params.insert("c_per_degree".into(), json!(per_degree));
            if let Some(cq) = c_q_est {
                params.insert("c_q_estimate".into(), json!(cq));
            }
            Ok(InequalityReport::build(
                "hypercontractive_cotype", lhs, rhs, constant, m, digest, params,
            ))
        })
        .collect()
}

/// Both directions of the torus/cube norm bridge for tetrahedral polynomials,
/// with constant `(1 + sqrt 2)^m`. Scalar instances also exercise the
/// supremum comparison; the torus grid is even, so the sign vectors are grid
/// points and the cube supremum never exceeds the torus grid supremum.
pub fn check_lemma1_bridge(
    space: &NormedSpace,
    q: f64,
    instances: &[VPoly],
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    let nested: Vec<Vec<InequalityReport>> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, poly)| -> Result<Vec<InequalityReport>> {
            let walsh = tetra_to_walsh(poly)?;
            let m = poly.degree();
            let bound = ONE_PLUS_SQRT2.powi(m as i32);
            let torus = lq_norm_auto(poly, q, mixed_seed(seed, idx), budget)?;
            let cube = cube_lq_exact_with_guard(&walsh, q, budget)?;
            let digest = digest_value(&json!({
                "check": "lemma1_bridge", "poly": poly.to_json(), "q": q,
            }));
            let mut params = BTreeMap::new();
            params.insert("q".into(), json!(q));
            params.insert(
                "ratio_torus_over_cube".into(),
                json!(if cube.value > 0.0 { torus.value / cube.value } else { 1.0 }),
            );
            let mut reports = vec![
                InequalityReport::build(
                    "lemma1_torus_le_cube",
                    torus.clone(),
                    cube.clone(),
                    bound,
                    m,
                    digest.clone(),
                    params.clone(),
                ),
                InequalityReport::build(
                    "lemma1_cube_le_torus",
                    cube,
                    torus,
                    bound,
                    m,
                    digest.clone(),
                    params.clone(),
                ),
            ];
            if space.dim() == 1 {
                let sup_torus = sup_grid(poly, 16, SupDomain::Torus)?;
                let sup_cube = sup_grid(poly, 2, SupDomain::Cube)?;
                reports.push(InequalityReport::build(
                    "lemma1_sup_torus_le_cube",
                    sup_torus.clone(),
                    sup_cube.clone(),
                    bound,
                    m,
                    digest.clone(),
                    params.clone(),
                ));
                reports.push(InequalityReport::build(
                    "lemma1_sup_cube_le_torus",
                    sup_cube,
                    sup_torus,
                    1.0,
                    m,
                    digest,
                    params,
                ));
            }
            Ok(reports)
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn cube_lq_exact_with_guard(
    walsh: &WalshPoly,
    q: f64,
    budget: &EstimatorBudget,
) -> Result<NormEstimate> {
    crate::norms::cube_lq_exact_guarded(walsh, q, budget.cube_max_vars)
}

/// Polynomial Kahane on the torus: `||P||_r <= (r/s)^{m/2} ||P||_s` for
/// `m`-homogeneous instances.
pub fn check_kahane_torus(
    space: &NormedSpace,
    pairs: &[(f64, f64)],
    instances: &[VPoly],
    budget: &EstimatorBudget,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    let _ = space;
    let nested: Vec<Vec<InequalityReport>> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, poly)| -> Result<Vec<InequalityReport>> {
            let m = poly.homogeneous_degree()?;
            let digest = digest_value(&json!({
                "check": "kahane_torus", "poly": poly.to_json(),
            }));
            pairs
                .iter()
                .map(|&(s, r)| {
                    let lhs = lq_norm_auto(poly, r, mixed_seed(seed, idx), budget)?;
                    let rhs = lq_norm_auto(poly, s, mixed_seed(seed, idx) ^ 0xA5A5, budget)?;
                    let constant = (r / s).powf(m as f64 / 2.0);
                    let mut params = BTreeMap::new();
                    params.insert("s".into(), json!(s));
                    params.insert("r".into(), json!(r));
                    Ok(InequalityReport::build(
                        "kahane_torus", lhs, rhs, constant, m, digest.clone(), params,
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// Walsh Kahane on the cube with constant `((1 + sqrt 2) sqrt(r/s))^m` for
/// degree-`m` Walsh polynomials.
pub fn check_kahane_walsh(
    pairs: &[(f64, f64)],
    instances: &[WalshPoly],
    budget: &EstimatorBudget,
) -> Result<Vec<InequalityReport>> {
    let nested: Vec<Vec<InequalityReport>> = instances
        .par_iter()
        .map(|poly| -> Result<Vec<InequalityReport>> {
            let m = poly.degree();
            let digest = digest_value(&json!({
                "check": "kahane_walsh", "poly": poly.to_json(),
            }));
            pairs
                .iter()
                .map(|&(s, r)| {
                    let lhs = cube_lq_exact_with_guard(poly, r, budget)?;
                    let rhs = cube_lq_exact_with_guard(poly, s, budget)?;
                    let constant = (ONE_PLUS_SQRT2 * (r / s).sqrt()).powi(m as i32);
                    let mut params = BTreeMap::new();
                    params.insert("s".into(), json!(s));
                    params.insert("r".into(), json!(r));
                    Ok(InequalityReport::build(
                        "kahane_walsh", lhs, rhs, constant, m, digest.clone(), params,
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// The Walsh cotype predicate: coefficient `l_q` sum against the `L_{q'}`
/// cube norm. Constant semantics as in [`check_cotype_def`].
pub fn check_walsh_cotype_def(
    q: f64,
    instances: &[WalshPoly],
    constant: Option<f64>,
    budget: &EstimatorBudget,
) -> Result<Vec<InequalityReport>> {
    if q < 2.0 {
        return Err(crate::error::Error::InvalidParameter(format!(
            "Walsh cotype needs q >= 2, got {q}"
        )));
    }
    let q_conj = conjugate_exponent(q)?;
    instances
        .par_iter()
        .map(|poly| {
            let lhs = walsh_coeff_lq(poly, q);
            let rhs = cube_lq_exact_with_guard(poly, q_conj, budget)?;
            let ratio = if rhs.value > 0.0 { lhs.value / rhs.value } else { 1.0 };
            let digest = digest_value(&json!({
                "check": "walsh_cotype_def", "poly": poly.to_json(), "q": q,
            }));
            let mut params = BTreeMap::new();
            params.insert("q".into(), json!(q));
            params.insert("q_conjugate".into(), json!(q_conj));
            params.insert("ratio".into(), json!(ratio));
            Ok(InequalityReport::build(
                "walsh_cotype_def",
                lhs,
                rhs,
                constant.unwrap_or(ratio),
                poly.degree(),
                digest,
                params,
            ))
        })
        .collect()
}

/// The Walsh type predicate: `L_{p'}` cube norm against the coefficient
/// `l_p` sum.
pub fn check_walsh_type_def(
    p: f64,
    instances: &[WalshPoly],
    constant: Option<f64>,
    budget: &EstimatorBudget,
) -> Result<Vec<InequalityReport>> {
    if !(1.0..=2.0).contains(&p) {
        return Err(crate::error::Error::InvalidParameter(format!(
            "Walsh type needs 1 <= p <= 2, got {p}"
        )));
    }
    let p_conj = conjugate_exponent(p)?;
    if p_conj.is_infinite() {
        return Err(crate::error::Error::InvalidParameter(
            "p = 1 has an unbounded conjugate; use p > 1".into(),
        ));
    }
    instances
        .par_iter()
        .map(|poly| {
            let lhs = cube_lq_exact_with_guard(poly, p_conj, budget)?;
            let rhs = walsh_coeff_lq(poly, p);
            let ratio = if rhs.value > 0.0 { lhs.value / rhs.value } else { 1.0 };
            let digest = digest_value(&json!({
                "check": "walsh_type_def", "poly": poly.to_json(), "p": p,
            }));
            let mut params = BTreeMap::new();
            params.insert("p".into(), json!(p));
            params.insert("p_conjugate".into(), json!(p_conj));
            params.insert("ratio".into(), json!(ratio));
            Ok(InequalityReport::build(
                "walsh_type_def",
                lhs,
                rhs,
                constant.unwrap_or(ratio),
                poly.degree(),
                digest,
                params,
            ))
        })
        .collect()
}

/// Coefficient `l_q` sums of every homogeneous part, indexed by degree.
pub(crate) fn homogeneous_coeff_sums(poly: &VPoly, q: f64) -> Vec<f64> {
    let maxd = poly.degree();
    (0..=maxd)
        .map(|m| vpoly_coeff_lq(&homogeneous_part(poly, m), q).value)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::gen::{corner_vpolys, random_vpoly, random_walsh, DegreeSpec};
    use crate::harness::CheckStatus;

    fn budget() -> EstimatorBudget {
        EstimatorBudget::default()
    }

    #[test]
    fn euclidean_cotype_ratio_is_one() {
        let space = NormedSpace::euclidean(2);
        let instances: Vec<Vec<Vector>> = (0..5)
            .map(|i| degree_one_coeffs(&mut rng_for(3, i + 1), &space, 3))
            .collect();
        let reports =
            check_cotype_def(&space, 2.0, &instances, Some(1.0), &budget(), 3).unwrap();
        for r in &reports {
            assert!((r.ratio() - 1.0).abs() < 1e-9, "ratio {}", r.ratio());
            assert!(r.pass);
        }
    }

    #[test]
    fn single_vector_has_ratio_one_everywhere() {
        for space in [
            NormedSpace::ellp_f(1.0, 2),
            NormedSpace::euclidean(2),
            NormedSpace::linf(2),
        ] {
            let x = Vector::from_reals(&[0.7, -0.3]);
            let reports =
                check_cotype_def(&space, 2.0, &[vec![x]], None, &budget(), 1).unwrap();
            assert!((reports[0].ratio() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ell1_reference_instance() {
        // x1 = e1, x2 = e2 on l1^2: lhs = sqrt(2), rhs = 2
        let space = NormedSpace::ellp_f(1.0, 2);
        let e1 = Vector::from_reals(&[1.0, 0.0]);
        let e2 = Vector::from_reals(&[0.0, 1.0]);
        let reports =
            check_cotype_def(&space, 2.0, &[vec![e1, e2]], None, &budget(), 1).unwrap();
        let r = &reports[0];
        assert!((r.lhs.value - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((r.rhs.value - 2.0).abs() < 1e-6, "rhs {}", r.rhs.value);
    }

    #[test]
    fn cotype_rejects_small_q() {
        let space = NormedSpace::euclidean(1);
        assert!(check_cotype_def(&space, 1.5, &[], None, &budget(), 1).is_err());
        assert!(estimate_cotype_constant(&space, 1.0, 2, 4, 1, &budget()).is_err());
    }

    #[test]
    fn euclidean_constants_are_one() {
        let space = NormedSpace::euclidean(2);
        let cot = estimate_cotype_constant(&space, 2.0, 3, 16, 5, &budget()).unwrap();
        assert!((cot.value - 1.0).abs() < 1e-6, "cotype {}", cot.value);
        assert_eq!(cot.direction, Direction::LowerBound);
        let typ = estimate_type_constant(&space, 2.0, 3, 16, 5, &budget()).unwrap();
        assert!((typ.value - 1.0).abs() < 1e-6, "type {}", typ.value);

        // scalar space likewise
        let scalar = NormedSpace::euclidean(1);
        let c = estimate_cotype_constant(&scalar, 2.0, 2, 8, 5, &budget()).unwrap();
        assert!((c.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn linf_constant_is_at_least_one_with_witness() {
        let space = NormedSpace::linf(2);
        let est = estimate_cotype_constant(&space, 2.0, 2, 16, 7, &budget()).unwrap();
        assert!(est.value >= 1.0 - 1e-9);
        assert!(est.witness.get("coeffs").is_some());
    }

    #[test]
    fn hypercontractive_reduces_to_cotype_at_degree_one() {
        let space = NormedSpace::euclidean(2);
        let instances: Vec<VPoly> = (0..4)
            .map(|i| {
                degree_one_poly(&space, &degree_one_coeffs(&mut rng_for(11, i + 1), &space, 3))
            })
            .collect();
        let reports =
            check_hypercontractive_cotype(&space, 2.0, &instances, Some(1.0), &budget(), 11)
                .unwrap();
        for r in &reports {
            assert_eq!(r.exponent_m, 1);
            assert!((r.ratio() - 1.0).abs() < 1e-9);
            assert_eq!(r.status, CheckStatus::Pass);
        }
    }

    #[test]
    fn euclidean_homogeneous_instances_pass_any_constant() {
        let space = NormedSpace::euclidean(2);
        let mut instances = corner_vpolys(&space, 3, DegreeSpec::Homogeneous(2));
        instances.push(random_vpoly(
            &mut rng_for(13, 1),
            &space,
            3,
            DegreeSpec::Homogeneous(2),
            5,
        ));
        let reports =
            check_hypercontractive_cotype(&space, 2.0, &instances, Some(1.0), &budget(), 13)
                .unwrap();
        for r in &reports {
            assert!((r.ratio() - 1.0).abs() < 1e-9);
            assert!(r.pass);
        }
    }

    #[test]
    fn tetrahedral_instances_meet_the_cotawalsh_constant() {
        // 2-homogeneous tetrahedral over l1^2 with C = 4^{1/q} C_q estimate
        let space = NormedSpace::ellp_f(1.0, 2);
        let c_q = estimate_cotype_constant(&space, 2.0, 3, 24, 17, &budget())
            .unwrap()
            .value;
        let c = 4.0f64.powf(0.5) * c_q.max(1.0);
        let instances: Vec<VPoly> = (0..6)
            .map(|i| {
                random_vpoly(
                    &mut rng_for(17, i + 1),
                    &space,
                    4,
                    DegreeSpec::TetrahedralHomogeneous(2),
                    4,
                )
            })
            .collect();
        let reports =
            check_hypercontractive_cotype(&space, 2.0, &instances, Some(c), &budget(), 17)
                .unwrap();
        for r in &reports {
            assert!(r.pass, "margin {}", r.margin);
        }
    }

    #[test]
    fn bridge_holds_on_reference_cases() {
        let space = NormedSpace::euclidean(2);
        // m = 0: both sides equal
        let constant = corner_vpolys(&space, 2, DegreeSpec::Tetrahedral(0));
        let reports = check_lemma1_bridge(&space, 2.0, &constant, &budget(), 23).unwrap();
        for r in &reports {
            assert!(r.pass);
            assert!((r.ratio() - 1.0).abs() < 1e-9);
        }

        // m = 1 single character: both norms are the coefficient norm
        let mut single = VPoly::new(2, space.clone());
        single
            .add_term(
                crate::poly::MultiIndex::new(vec![1, 0]),
                Vector::from_reals(&[2.0, 1.0]),
            )
            .unwrap();
        let reports = check_lemma1_bridge(&space, 2.0, &[single], &budget(), 23).unwrap();
        for r in &reports {
            assert!((r.ratio() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bridge_ratio_stays_in_the_band_on_random_instances() {
        let space = NormedSpace::euclidean(2);
        for i in 0..10u64 {
            let poly = random_vpoly(
                &mut rng_for(29, i + 1),
                &space,
                3,
                DegreeSpec::TetrahedralHomogeneous(2),
                4,
            );
            let reports = check_lemma1_bridge(&space, 2.0, &[poly], &budget(), 29).unwrap();
            for r in &reports {
                assert!(r.pass, "instance {i}: margin {}", r.margin);
            }
            let ratio = reports[0].params["ratio_torus_over_cube"].as_f64().unwrap();
            let band = ONE_PLUS_SQRT2.powi(2);
            assert!(ratio <= band + 1e-9 && ratio >= 1.0 / band - 1e-9);
        }
    }

    #[test]
    fn scalar_bridge_also_checks_the_sup_comparison() {
        let space = NormedSpace::euclidean(1);
        let poly = random_vpoly(
            &mut rng_for(31, 1),
            &space,
            3,
            DegreeSpec::Tetrahedral(2),
            4,
        );
        let reports = check_lemma1_bridge(&space, 2.0, &[poly], &budget(), 31).unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
        assert!(names.contains(&"lemma1_sup_torus_le_cube"));
        assert!(names.contains(&"lemma1_sup_cube_le_torus"));
        for r in &reports {
            assert!(r.pass, "{}: margin {}", r.name, r.margin);
        }
    }

    #[test]
    fn non_tetrahedral_bridge_input_is_an_error() {
        let space = NormedSpace::euclidean(1);
        let mut p = VPoly::new(1, space.clone());
        p.add_term(crate::poly::MultiIndex::new(vec![2]), Vector::from_reals(&[1.0]))
            .unwrap();
        assert!(check_lemma1_bridge(&space, 2.0, &[p], &budget(), 1).is_err());
    }

    #[test]
    fn kahane_bounds_hold_on_random_instances() {
        let pairs = [(1.0, 2.0), (2.0, 4.0)];
        for space in [NormedSpace::euclidean(2), NormedSpace::ellp_f(1.0, 2)] {
            let instances: Vec<VPoly> = (0..6)
                .map(|i| {
                    random_vpoly(
                        &mut rng_for(37, i + 1),
                        &space,
                        3,
                        DegreeSpec::Homogeneous(2),
                        4,
                    )
                })
                .collect();
            let reports =
                check_kahane_torus(&space, &pairs, &instances, &budget(), 37).unwrap();
            assert_eq!(reports.len(), instances.len() * pairs.len());
            for r in &reports {
                assert!(r.pass, "kahane margin {}", r.margin);
            }

            let walsh: Vec<WalshPoly> = (0..6)
                .map(|i| random_walsh(&mut rng_for(41, i + 1), &space, 4, 3, 5))
                .collect();
            let reports = check_kahane_walsh(&pairs, &walsh, &budget()).unwrap();
            for r in &reports {
                assert!(r.pass, "walsh kahane margin {}", r.margin);
            }
        }
    }

    #[test]
    fn lq_monotonicity_within_error() {
        // estimated L_q norms are nondecreasing in q
        let space = NormedSpace::ellp_f(1.0, 2);
        for i in 0..5u64 {
            let poly = random_vpoly(&mut rng_for(43, i + 1), &space, 3, DegreeSpec::AtMost(2), 4);
            let mut prev = 0.0;
            for q in [1.0, 2.0, 3.0, 4.0] {
                let est = lq_norm_auto(&poly, q, 43, &budget()).unwrap();
                assert!(est.value >= prev - 1e-9 - est.halfwidth());
                prev = est.value;
            }
        }
    }
}
