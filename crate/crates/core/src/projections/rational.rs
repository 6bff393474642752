//! Exact rational matrices: the Hilbert matrix, its inverse, and the
//! biorthogonal projection polynomials built from the inverse's columns.
//!
//! The Hilbert matrix is catastrophically ill-conditioned, so everything here
//! stays in arbitrary-precision rationals; floats appear only when a caller
//! converts the final coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::Error;
use crate::Result;

/// Guard on the matrix degree for exact inversion.
pub const RATIONAL_DEGREE_GUARD: usize = 20;

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A rectangular matrix of exact rationals, kept in lowest terms.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    entries: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn from_rows(entries: Vec<Vec<BigRational>>) -> Self {
        if let Some(first) = entries.first() {
            let cols = first.len();
            assert!(entries.iter().all(|r| r.len() == cols), "ragged rows");
        }
        RationalMatrix { entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![vec![BigRational::zero(); n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = BigRational::one();
        }
        RationalMatrix { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn is_identity(&self) -> bool {
        self.rows() == self.cols()
            && self.entries.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, v)| {
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    #[allow(clippy::needless_range_loop)]
    pub fn matmul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols(), other.rows());
        let rows = self.rows();
        let cols = other.cols();
        let inner = self.cols();
        let mut out = vec![vec![BigRational::zero(); cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = BigRational::zero();
                for k in 0..inner {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out[i][j] = acc;
            }
        }
        RationalMatrix::from_rows(out)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigRational {
        self.entries
            .iter()
            .flatten()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Largest absolute entry as a float.
    pub fn max_abs_f64(&self) -> f64 {
        self.max_abs().to_f64().unwrap_or(f64::INFINITY)
    }

    /// Exact inverse by rational Gauss-Jordan elimination.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        let n = self.rows();
        if n != self.cols() {
            return None;
        }
        let mut a = self.entries.clone();
        let mut inv = RationalMatrix::identity(n).entries;
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot_row);
            inv.swap(col, pivot_row);
            let pivot = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &pivot;
                inv[col][j] /= &pivot;
            }
            for row in 0..n {
                if row == col || a[row][col].is_zero() {
                    continue;
                }
                let factor = a[row][col].clone();
                for j in 0..n {
                    let t = &factor * &a[col][j];
                    a[row][j] -= t;
                    let t = &factor * &inv[col][j];
                    inv[row][j] -= t;
                }
            }
        }
        Some(RationalMatrix::from_rows(inv))
    }
}

impl Serialize for RationalMatrix {
    /// Rows of `"num/den"` strings, keeping exactness in reports.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows()))?;
        for row in &self.entries {
            let strings: Vec<String> = row
                .iter()
                .map(|r| format!("{}/{}", r.numer(), r.denom()))
                .collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }
}

/// The `(m+1) x (m+1)` Hilbert matrix, `H_ij = 1/(i + j - 1)` one-based.
pub fn hilbert_matrix(m: usize) -> RationalMatrix {
    let n = m + 1;
    let entries = (1..=n)
        .map(|i| (1..=n).map(|j| ratio(1, (i + j - 1) as i64)).collect())
        .collect();
    RationalMatrix::from_rows(entries)
}

/// Exact inverse of the Hilbert matrix; guarded at `m <= 20` against rational
/// blow-up.
pub fn hilbert_inverse(m: usize) -> Result<RationalMatrix> {
    if m > RATIONAL_DEGREE_GUARD {
        return Err(Error::RationalGuardExceeded {
            degree: m,
            max: RATIONAL_DEGREE_GUARD,
        });
    }
    Ok(hilbert_matrix(m)
        .inverse()
        .expect("the Hilbert matrix is nonsingular"))
}

/// A polynomial with exact rational coefficients, `coeffs[k]` on `t^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionPolynomial {
    coeffs: Vec<BigRational>,
}

impl ProjectionPolynomial {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap())
    }

    /// Exact moment `int_0^1 t^j p(t) dt = sum_k coeffs[k] / (j + k + 1)`.
    pub fn moment(&self, j: usize) -> BigRational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * ratio(1, (j + k + 1) as i64))
            .sum()
    }
}

/// The biorthogonal family `p_1 .. p_{m+1}`: `int_0^1 t^{i-1} p_j(t) dt` is
/// exactly `delta_ij`. Column `j` of the Hilbert inverse supplies the
/// coefficients of `p_j`.
pub fn projection_polynomials(m: usize) -> Result<Vec<ProjectionPolynomial>> {
    let inv = hilbert_inverse(m)?;
    let n = m + 1;
    Ok((0..n)
        .map(|j| ProjectionPolynomial {
            coeffs: (0..n).map(|k| inv.get(k, j).clone()).collect(),
        })
        .collect())
}

/// `(m+1) * max|a_ij|` from the Hilbert inverse: the measured bound on
/// `sup_t |p_j(t)|` over `(0,1)`.
pub fn lemma3_envelope(m: usize) -> Result<f64> {
    let inv = hilbert_inverse(m)?;
    let max = inv.max_abs().to_f64().expect("finite envelope");
    Ok((m as f64 + 1.0) * max)
}
