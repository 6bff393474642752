//! The Bohr transform: Dirichlet coefficients indexed by `n` against monomial
//! coefficients indexed by the prime-exponent multi-index of `n`.

use crate::error::Error;
use crate::primes::default_table;
use crate::Result;

use super::{DirichletPoly, MultiIndex, VPoly};

/// Exponent vector of `n` over the first `n_primes` primes,
/// `n = prod p_i^{alpha_i}`.
pub fn factorize(n: u64, n_primes: usize) -> Result<MultiIndex> {
    let table = default_table();
    let pairs = table
        .factor_pairs(n)
        .map_err(|prime| Error::PrimeOutsideTable { n, prime, n_primes })?;
    let mut exponents = vec![0u32; n_primes];
    for (idx, e) in pairs {
        if idx >= n_primes {
            return Err(Error::PrimeOutsideTable {
                n,
                prime: table.primes()[idx],
                n_primes,
            });
        }
        exponents[idx] = e;
    }
    Ok(MultiIndex::new(exponents))
}

/// `Omega(n)`: prime divisors of `n` counted with multiplicity.
pub fn omega(n: u64) -> u32 {
    default_table().omega(n)
}

/// Smallest number of leading primes covering every support index of `d`.
pub fn min_primes_for(d: &DirichletPoly) -> Result<usize> {
    let table = default_table();
    let mut needed = 0usize;
    for (n, _) in d.terms() {
        let pairs = table.factor_pairs(n).map_err(|prime| Error::PrimeOutsideTable {
            n,
            prime,
            n_primes: table.primes().len(),
        })?;
        if let Some(&(idx, _)) = pairs.last() {
            needed = needed.max(idx + 1);
        }
    }
    Ok(needed)
}

/// Lifts a Dirichlet polynomial to the polytorus: the coefficient at `alpha`
/// is `a_n` for `n = prod p_i^{alpha_i}`.
pub fn bohr_lift(d: &DirichletPoly, n_primes: usize) -> Result<VPoly> {
    let mut out = VPoly::new(n_primes, d.space().clone());
    for (n, coeff) in d.terms() {
        out.add_term(factorize(n, n_primes)?, coeff.clone())?;
    }
    Ok(out)
}

/// Pushes a monomial polynomial back to Dirichlet coefficients,
/// `a_n = x_alpha` with `n = prod p_i^{alpha_i}`.
pub fn bohr_push(p: &VPoly) -> Result<DirichletPoly> {
    let table = default_table();
    let primes = table.primes();
    if p.n_vars() > primes.len() {
        return Err(Error::InvalidParameter(format!(
            "{} variables exceed the sieved prime count {}",
            p.n_vars(),
            primes.len()
        )));
    }
    let mut out = DirichletPoly::new(p.space().clone());
    for (alpha, coeff) in p.terms() {
        let mut n: u128 = 1;
        for (i, &e) in alpha.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = (primes[i] as u128)
                .checked_pow(e)
                .ok_or(Error::IndexOverflow)?;
            n = n.checked_mul(factor).ok_or(Error::IndexOverflow)?;
        }
        let n = u64::try_from(n).map_err(|_| Error::IndexOverflow)?;
        out.add_term(n, coeff.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{NormedSpace, Vector};
    use num_complex::Complex64;

    fn scalar(re: f64) -> Vector {
        Vector::new(vec![Complex64::new(re, 0.0)])
    }

    #[test]
    fn factorize_reference_values() {
        assert_eq!(factorize(12, 2).unwrap().exponents(), &[2, 1]);
        assert_eq!(factorize(1, 3).unwrap().exponents(), &[0, 0, 0]);
        assert_eq!(factorize(30, 3).unwrap().exponents(), &[1, 1, 1]);
    }

    #[test]
    fn factorize_names_the_offending_prime() {
        let err = factorize(30, 2).unwrap_err();
        match err {
            Error::PrimeOutsideTable { n, prime, n_primes } => {
                assert_eq!((n, prime, n_primes), (30, 5, 2));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn omega_counts_with_multiplicity() {
        assert_eq!(omega(1), 0);
        assert_eq!(omega(12), 3);
        assert_eq!(omega(64), 6);
    }

    #[test]
    fn lift_matches_the_definition() {
        let space = NormedSpace::euclidean(1);
        let mut d = DirichletPoly::new(space.clone());
        d.add_term(1, scalar(1.0)).unwrap();
        d.add_term(2, scalar(2.0)).unwrap();
        d.add_term(6, scalar(3.0)).unwrap();

        let p = bohr_lift(&d, 2).unwrap();
        assert_eq!(p.term_count(), d.term_count());
        assert_eq!(p.coefficient(&MultiIndex::new(vec![0, 0])), Some(&scalar(1.0)));
        assert_eq!(p.coefficient(&MultiIndex::new(vec![1, 0])), Some(&scalar(2.0)));
        assert_eq!(p.coefficient(&MultiIndex::new(vec![1, 1])), Some(&scalar(3.0)));

        // constant series lifts to a constant polynomial
        let mut c = DirichletPoly::new(space);
        c.add_term(1, scalar(5.0)).unwrap();
        let lifted = bohr_lift(&c, 3).unwrap();
        assert_eq!(lifted.coefficient(&MultiIndex::zero(3)), Some(&scalar(5.0)));
        assert_eq!(lifted.degree(), 0);
    }

    #[test]
    fn push_inverts_lift_exhaustively_to_1e4() {
        let space = NormedSpace::euclidean(1);
        for n in 1..=10_000u64 {
            let mut d = DirichletPoly::new(space.clone());
            d.add_term(n, scalar(1.0)).unwrap();
            let n_primes = min_primes_for(&d).unwrap().max(1);
            let lifted = bohr_lift(&d, n_primes).unwrap();
            let alpha = lifted.terms().next().unwrap().0;
            assert_eq!(alpha.degree(), omega(n), "Omega mismatch at {n}");
            assert_eq!(bohr_push(&lifted).unwrap(), d, "round trip failed at {n}");
        }
    }

    #[test]
    fn lift_then_push_on_a_random_block() {
        let space = NormedSpace::euclidean(2);
        let mut d = DirichletPoly::new(space.clone());
        for (i, n) in [3u64, 14, 97, 360, 1024].into_iter().enumerate() {
            d.add_term(n, Vector::new(vec![
                Complex64::new(i as f64 + 0.5, -1.0),
                Complex64::new(0.0, i as f64),
            ]))
            .unwrap();
        }
        let p = bohr_lift(&d, min_primes_for(&d).unwrap()).unwrap();
        assert_eq!(bohr_push(&p).unwrap(), d);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_dirichlet() -> impl Strategy<Value = DirichletPoly> {
            proptest::collection::btree_map(1u64..=1_000_000, -4.0f64..4.0, 1..8).prop_map(
                |terms| {
                    let space = NormedSpace::euclidean(1);
                    let mut d = DirichletPoly::new(space);
                    for (n, c) in terms {
                        d.add_term(n, scalar(c)).unwrap();
                    }
                    d
                },
            )
        }

        proptest! {
            #[test]
            fn push_inverts_lift_with_matching_omega(d in arb_dirichlet()) {
                if d.is_zero() { return Ok(()); }
                let n_primes = min_primes_for(&d).unwrap().max(1);
                let lifted = bohr_lift(&d, n_primes).unwrap();
                prop_assert_eq!(lifted.term_count(), d.term_count());
                for (n, _) in d.terms() {
                    let alpha = factorize(n, n_primes).unwrap();
                    prop_assert_eq!(alpha.degree(), omega(n));
                }
                prop_assert_eq!(bohr_push(&lifted).unwrap(), d);
            }

            #[test]
            fn lift_inverts_push_on_polynomials(
                exps in proptest::collection::vec(
                    proptest::collection::vec(0u32..4, 4), 1..6),
                coeffs in proptest::collection::vec(-3.0f64..3.0, 6),
            ) {
                let space = NormedSpace::euclidean(1);
                let mut p = VPoly::new(4, space);
                for (e, c) in exps.iter().zip(&coeffs) {
                    p.add_term(MultiIndex::new(e.clone()), scalar(*c)).unwrap();
                }
                if p.is_zero() { return Ok(()); }
                let d = bohr_push(&p).unwrap();
                prop_assert_eq!(bohr_lift(&d, 4).unwrap(), p);
            }
        }
    }
}
