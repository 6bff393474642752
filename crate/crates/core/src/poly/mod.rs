//! The three polynomial kinds and the structural transforms between them.
//!
//! Coefficient maps are sparse and ordered, so polynomials have a canonical
//! form: zero coefficients are dropped eagerly and equality is map equality.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::Error;
use crate::spaces::{NormedSpace, Vector};
use crate::Result;

mod bohr;
mod comb;
mod index;
mod parity;

pub use bohr::{bohr_lift, bohr_push, factorize, min_primes_for, omega};
pub use comb::{binomial, combinatorial_identity_check, stirling_ratio};
pub use index::{MultiIndex, SubsetIndex};
pub use parity::{parity_components, parity_decompose, Parity, ParityDecomposition};

/// A polynomial `sum_alpha x_alpha z^alpha` on `T^n` with coefficients in a
/// normed space.
#[derive(Clone, Debug, PartialEq)]
pub struct VPoly {
    n_vars: usize,
    space: NormedSpace,
    terms: BTreeMap<MultiIndex, Vector>,
}

impl VPoly {
    pub fn new(n_vars: usize, space: NormedSpace) -> Self {
        VPoly {
            n_vars,
            space,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `coeff * z^alpha`, merging with any existing term and dropping
    /// exact zeros.
    pub fn add_term(&mut self, alpha: MultiIndex, coeff: Vector) -> Result<()> {
        if alpha.n_vars() != self.n_vars {
            return Err(Error::VarCountMismatch {
                expected: self.n_vars,
                got: alpha.n_vars(),
            });
        }
        if coeff.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: coeff.dim(),
            });
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !coeff.is_zero() {
                    e.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().accumulate(&coeff, Complex64::new(1.0, 0.0));
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vector)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&Vector> {
        self.terms.get(alpha)
    }

    /// Maximum total degree over the support; zero for the empty polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Maximum per-variable exponent over the support.
    pub fn max_var_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|a| a.exponents().iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// The common degree, or an error naming two mismatched degrees.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        let mut degrees = self.terms.keys().map(MultiIndex::degree);
        let first = degrees.next().unwrap_or(0);
        for d in degrees {
            if d != first {
                return Err(Error::NotHomogeneous(first, d));
            }
        }
        Ok(first)
    }

    /// JSON in the wire shape `{"n_vars":…,"terms":[{"alpha":[…],"coeff":[[re,im],…]}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(a, c)| {
                json!({
                    "alpha": a.exponents(),
                    "coeff": coeff_json(c),
                })
            })
            .collect();
        json!({ "n_vars": self.n_vars, "terms": terms })
    }

    /// Rebuilds from the wire shape; the space is supplied by the caller.
    pub fn from_json(value: &Value, space: NormedSpace) -> Result<Self> {
        let n_vars = value["n_vars"]
            .as_u64()
            .ok_or_else(|| Error::Config("missing n_vars".into()))? as usize;
        let mut poly = VPoly::new(n_vars, space);
        for term in value["terms"].as_array().into_iter().flatten() {
            let alpha: Vec<u32> = serde_json::from_value(term["alpha"].clone())?;
            poly.add_term(MultiIndex::new(alpha), coeff_from_json(&term["coeff"])?)?;
        }
        Ok(poly)
    }
}

/// A Walsh polynomial `sum_A x_A eps_A` on `{-1,1}^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalshPoly {
    n_vars: usize,
    space: NormedSpace,
    terms: BTreeMap<SubsetIndex, Vector>,
}

impl WalshPoly {
    pub fn new(n_vars: usize, space: NormedSpace) -> Self {
        WalshPoly {
            n_vars,
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, subset: SubsetIndex, coeff: Vector) -> Result<()> {
        if let Some(max) = subset.max_member() {
            if max as usize > self.n_vars {
                return Err(Error::SubsetOutOfRange {
                    member: max,
                    n_vars: self.n_vars,
                });
            }
        }
        if coeff.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: coeff.dim(),
            });
        }
        match self.terms.entry(subset) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !coeff.is_zero() {
                    e.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().accumulate(&coeff, Complex64::new(1.0, 0.0));
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubsetIndex, &Vector)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, subset: &SubsetIndex) -> Option<&Vector> {
        self.terms.get(subset)
    }

    /// Maximum `|A|` over the support; zero for the empty polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|s| s.card() as u32).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(a, c)| json!({ "A": a.members(), "coeff": coeff_json(c) }))
            .collect();
        json!({ "n_vars": self.n_vars, "terms": terms })
    }

    pub fn from_json(value: &Value, space: NormedSpace) -> Result<Self> {
        let n_vars = value["n_vars"]
            .as_u64()
            .ok_or_else(|| Error::Config("missing n_vars".into()))? as usize;
        let mut poly = WalshPoly::new(n_vars, space);
        for term in value["terms"].as_array().into_iter().flatten() {
            let members: Vec<u32> = serde_json::from_value(term["A"].clone())?;
            poly.add_term(SubsetIndex::new(members)?, coeff_from_json(&term["coeff"])?)?;
        }
        Ok(poly)
    }
}

/// A Dirichlet polynomial `sum a_n n^-s` with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletPoly {
    space: NormedSpace,
    terms: BTreeMap<u64, Vector>,
}

impl DirichletPoly {
    pub fn new(space: NormedSpace) -> Self {
        DirichletPoly {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, n: u64, coeff: Vector) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "Dirichlet indices start at 1".into(),
            ));
        }
        if coeff.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: coeff.dim(),
            });
        }
        match self.terms.entry(n) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !coeff.is_zero() {
                    e.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().accumulate(&coeff, Complex64::new(1.0, 0.0));
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Vector)> {
        self.terms.iter().map(|(&n, v)| (n, v))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, n: u64) -> Option<&Vector> {
        self.terms.get(&n)
    }

    pub fn max_index(&self) -> Option<u64> {
        self.terms.keys().last().copied()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(n, c)| json!({ "n": n, "coeff": coeff_json(c) }))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(value: &Value, space: NormedSpace) -> Result<Self> {
        let mut poly = DirichletPoly::new(space);
        for term in value["terms"].as_array().into_iter().flatten() {
            let n = term["n"]
                .as_u64()
                .ok_or_else(|| Error::Config("missing Dirichlet index".into()))?;
            poly.add_term(n, coeff_from_json(&term["coeff"])?)?;
        }
        Ok(poly)
    }
}

fn coeff_json(v: &Vector) -> Value {
    Value::Array(
        v.coords()
            .iter()
            .map(|c| json!([c.re, c.im]))
            .collect(),
    )
}

fn coeff_from_json(value: &Value) -> Result<Vector> {
    let pairs: Vec<[f64; 2]> = serde_json::from_value(value.clone())?;
    Ok(Vector::new(
        pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect(),
    ))
}

/// Terms of total degree exactly `m`.
pub fn homogeneous_part(poly: &VPoly, m: u32) -> VPoly {
    let mut out = VPoly::new(poly.n_vars, poly.space.clone());
    for (alpha, coeff) in poly.terms() {
        if alpha.degree() == m {
            out.add_term(alpha.clone(), coeff.clone()).expect("same shape");
        }
    }
    out
}

/// True when no variable carries an exponent above one.
pub fn is_tetrahedral(poly: &VPoly) -> bool {
    poly.terms.keys().all(MultiIndex::is_tetrahedral)
}

/// Identifies a tetrahedral polynomial with its Walsh counterpart,
/// `x_alpha -> x_A` for `A = {i : alpha_i = 1}`.
pub fn tetra_to_walsh(poly: &VPoly) -> Result<WalshPoly> {
    let mut out = WalshPoly::new(poly.n_vars, poly.space.clone());
    for (alpha, coeff) in poly.terms() {
        if let Some((var, exponent)) = alpha.first_non_tetrahedral() {
            return Err(Error::NotTetrahedral { var, exponent });
        }
        let subset: SubsetIndex = alpha
            .exponents()
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e == 1)
            .map(|(i, _)| i as u32 + 1)
            .collect();
        out.add_term(subset, coeff.clone())?;
    }
    Ok(out)
}

/// Inverse of [`tetra_to_walsh`].
pub fn walsh_to_tetra(poly: &WalshPoly) -> VPoly {
    let mut out = VPoly::new(poly.n_vars, poly.space.clone());
    for (subset, coeff) in poly.terms() {
        out.add_term(subset.indicator(poly.n_vars), coeff.clone())
            .expect("indicator has n_vars entries");
    }
    out
}
