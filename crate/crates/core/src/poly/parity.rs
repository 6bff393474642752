//! Parity decomposition of a homogeneous polynomial.
//!
//! Every exponent splits as `alpha = 2*beta + 2*gamma + 1_A` where `A` is the
//! set of variables with odd exponent, `gamma` lives on `A` and `beta` off it.
//! Grouping by `A` and by `l = |A|/2 rounded down + |gamma|` yields the parts
//! `P_{A,l}`; substituting `eps * z` turns the polynomial into a tetrahedral
//! polynomial in `eps` with the parts as coefficients.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::Result;

use super::{MultiIndex, SubsetIndex, VPoly};

/// Parity of the homogeneity degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The data of one exponent split: `alpha = 2*beta + 2*gamma + 1_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityComponents {
    pub odd_set: SubsetIndex,
    /// `k`: half the cardinality of the odd set, rounded down.
    pub k: u32,
    /// `l`: `k` plus the total degree of `gamma`.
    pub l: u32,
    /// Exponent supported off the odd set, `|beta| = floor(m/2) - l`.
    pub beta: MultiIndex,
    /// Exponent supported on the odd set, `|gamma| = l - k`.
    pub gamma: MultiIndex,
}

/// Splits one exponent by parity of its entries.
pub fn parity_components(alpha: &MultiIndex) -> ParityComponents {
    let n = alpha.n_vars();
    let odd_set = alpha.odd_support();
    let k = odd_set.card() as u32 / 2;
    let mut beta = vec![0u32; n];
    let mut gamma = vec![0u32; n];
    for (i, &e) in alpha.exponents().iter().enumerate() {
        if e % 2 == 1 {
            gamma[i] = (e - 1) / 2;
        } else {
            beta[i] = e / 2;
        }
    }
    let gamma = MultiIndex::new(gamma);
    let l = k + gamma.degree();
    ParityComponents {
        odd_set,
        k,
        l,
        beta: MultiIndex::new(beta),
        gamma,
    }
}

/// A homogeneous polynomial regrouped as `sum_A sum_l P_{A,l}`.
#[derive(Clone, Debug)]
pub struct ParityDecomposition {
    m: u32,
    parity: Parity,
    n_vars: usize,
    space: crate::spaces::NormedSpace,
    parts: BTreeMap<SubsetIndex, BTreeMap<u32, VPoly>>,
}

impl ParityDecomposition {
    /// Homogeneity degree of the source polynomial.
    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Iterates the parts as `(A, l, P_{A,l})`.
    pub fn parts(&self) -> impl Iterator<Item = (&SubsetIndex, u32, &VPoly)> {
        self.parts
            .iter()
            .flat_map(|(a, by_l)| by_l.iter().map(move |(&l, p)| (a, l, p)))
    }

    pub fn part(&self, odd_set: &SubsetIndex, l: u32) -> Option<&VPoly> {
        self.parts.get(odd_set).and_then(|by_l| by_l.get(&l))
    }

    /// The odd sets appearing, grouped by cardinality elsewhere when needed.
    pub fn odd_sets(&self) -> impl Iterator<Item = &SubsetIndex> {
        self.parts.keys()
    }

    /// Sums every part back into one polynomial.
    pub fn flatten(&self) -> VPoly {
        let mut out = VPoly::new(self.n_vars, self.space.clone());
        for (_, _, part) in self.parts() {
            for (alpha, coeff) in part.terms() {
                out.add_term(alpha.clone(), coeff.clone()).expect("same shape");
            }
        }
        out
    }
}

/// Decomposes an `m`-homogeneous polynomial into its parity parts. Both
/// parities of `m` are supported; the odd case differs only in `|A| = 2k + 1`.
pub fn parity_decompose(poly: &VPoly) -> Result<ParityDecomposition> {
    let m = poly.homogeneous_degree()?;
    if poly.is_zero() {
        return Err(Error::InvalidParameter(
            "parity decomposition needs a nonzero polynomial".into(),
        ));
    }
    let parity = if m % 2 == 0 { Parity::Even } else { Parity::Odd };
    let half = m / 2;
    let mut parts: BTreeMap<SubsetIndex, BTreeMap<u32, VPoly>> = BTreeMap::new();
    for (alpha, coeff) in poly.terms() {
        let c = parity_components(alpha);
        debug_assert_eq!(c.beta.degree(), half - c.l);
        debug_assert_eq!(c.gamma.degree(), c.l - c.k);
        parts
            .entry(c.odd_set)
            .or_default()
            .entry(c.l)
            .or_insert_with(|| VPoly::new(poly.n_vars(), poly.space().clone()))
            .add_term(alpha.clone(), coeff.clone())?;
    }
    Ok(ParityDecomposition {
        m,
        parity,
        n_vars: poly.n_vars(),
        space: poly.space().clone(),
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{NormedSpace, Vector};
    use num_complex::Complex64;

    fn scalar(re: f64) -> Vector {
        Vector::new(vec![Complex64::new(re, 0.0)])
    }

    fn poly_of(n_vars: usize, terms: &[(&[u32], f64)]) -> VPoly {
        let mut p = VPoly::new(n_vars, NormedSpace::euclidean(1));
        for (exps, c) in terms {
            p.add_term(MultiIndex::new(exps.to_vec()), scalar(*c)).unwrap();
        }
        p
    }

    #[test]
    fn all_even_exponents_collapse_to_the_empty_set() {
        // x * z1^2: A = {}, k = 0, l = 0, beta = (1), gamma = 0
        let p = poly_of(1, &[(&[2], 1.0)]);
        let d = parity_decompose(&p).unwrap();
        let parts: Vec<_> = d.parts().collect();
        assert_eq!(parts.len(), 1);
        let (a, l, part) = parts[0];
        assert_eq!(a, &SubsetIndex::empty());
        assert_eq!(l, 0);
        assert_eq!(part, &p);

        let c = parity_components(&MultiIndex::new(vec![2]));
        assert_eq!(c.beta.exponents(), &[1]);
        assert_eq!(c.gamma.exponents(), &[0]);
    }

    #[test]
    fn all_odd_exponents_collapse_to_the_full_set() {
        // x * z1 z2: A = {1,2}, k = 1, l = 1, beta = gamma = 0
        let p = poly_of(2, &[(&[1, 1], 1.0)]);
        let d = parity_decompose(&p).unwrap();
        let parts: Vec<_> = d.parts().collect();
        assert_eq!(parts.len(), 1);
        let (a, l, part) = parts[0];
        assert_eq!(a, &SubsetIndex::new(vec![1, 2]).unwrap());
        assert_eq!(l, 1);
        assert_eq!(part, &p);
    }

    #[test]
    fn mixed_degree_four_example() {
        // x * z1^3 z2 -> A = {1,2}, gamma = (1,0), beta = 0, l = 2
        // y * z1^2 z2^2 -> A = {}, beta = (1,1), l = 0
        let p = poly_of(2, &[(&[3, 1], 1.0), (&[2, 2], 2.0)]);
        let d = parity_decompose(&p).unwrap();
        assert_eq!(d.parity(), Parity::Even);

        let cx = parity_components(&MultiIndex::new(vec![3, 1]));
        assert_eq!(cx.odd_set, SubsetIndex::new(vec![1, 2]).unwrap());
        assert_eq!(cx.gamma.exponents(), &[1, 0]);
        assert_eq!(cx.beta.exponents(), &[0, 0]);
        assert_eq!(cx.l, 2);

        let cy = parity_components(&MultiIndex::new(vec![2, 2]));
        assert_eq!(cy.odd_set, SubsetIndex::empty());
        assert_eq!(cy.beta.exponents(), &[1, 1]);
        assert_eq!(cy.l, 0);

        assert!(d.part(&cx.odd_set, 2).is_some());
        assert!(d.part(&cy.odd_set, 0).is_some());
        assert_eq!(d.flatten(), p);
    }

    #[test]
    fn odd_degree_uses_odd_cardinalities() {
        // m = 3: z1^3 -> A = {1} (|A| = 2k+1, k = 0), gamma = (1), l = 1
        let p = poly_of(2, &[(&[3, 0], 1.0), (&[1, 2], 1.0), (&[1, 1], 0.0)]);
        let d = parity_decompose(&p).unwrap();
        assert_eq!(d.parity(), Parity::Odd);
        for (a, _, _) in d.parts() {
            assert_eq!(a.card() % 2, 1);
        }
        assert_eq!(d.flatten(), p);
    }

    #[test]
    fn non_homogeneous_input_is_rejected() {
        let p = poly_of(2, &[(&[1, 0], 1.0), (&[1, 1], 1.0)]);
        assert!(matches!(parity_decompose(&p), Err(Error::NotHomogeneous(1, 2))));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_homogeneous(n_vars: usize) -> impl Strategy<Value = VPoly> {
            // compositions of m over n_vars via repeated variable draws
            (1u32..7).prop_flat_map(move |m| {
                let term = proptest::collection::vec(0..n_vars, m as usize).prop_map(
                    move |vars| {
                        let mut exps = vec![0u32; n_vars];
                        for v in vars {
                            exps[v] += 1;
                        }
                        exps
                    },
                );
                proptest::collection::vec((term, -3.0f64..3.0), 1..6).prop_map(move |terms| {
                    let mut p = VPoly::new(n_vars, NormedSpace::euclidean(1));
                    for (exps, c) in terms {
                        p.add_term(MultiIndex::new(exps), scalar(c)).unwrap();
                    }
                    p
                })
            })
        }

        proptest! {
            #[test]
            fn reconstruction_and_bijection(p in arb_homogeneous(3)) {
                if p.is_zero() { return Ok(()); }
                let d = parity_decompose(&p).unwrap();
                // every source term appears in exactly one part
                let mut seen = 0usize;
                for (a, l, part) in d.parts() {
                    for (alpha, coeff) in part.terms() {
                        seen += 1;
                        let c = parity_components(alpha);
                        prop_assert_eq!(&c.odd_set, a);
                        prop_assert_eq!(c.l, l);
                        // alpha = 2 beta + 2 gamma + 1_A
                        let rebuilt: Vec<u32> = c
                            .beta
                            .exponents()
                            .iter()
                            .zip(c.gamma.exponents())
                            .enumerate()
                            .map(|(i, (&b, &g))| {
                                2 * b + 2 * g + u32::from(c.odd_set.contains(i as u32 + 1))
                            })
                            .collect();
                        prop_assert_eq!(rebuilt, alpha.exponents().to_vec());
                        prop_assert_eq!(p.coefficient(alpha), Some(coeff));
                    }
                }
                prop_assert_eq!(seen, p.term_count());
                prop_assert_eq!(d.flatten(), p);
            }
        }
    }
}
