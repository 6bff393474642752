//! Finite-dimensional complex normed spaces with evaluable norms.
//!
//! A [`NormedSpace`] plays the role of the Banach space the coefficients live
//! in. The built-in families are `l_p^d` for `p` in `[1, inf]` (with the
//! euclidean space as the `p = 2` alias) plus user-supplied norm oracles for
//! everything else.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// An exponent in `[1, inf]`, with infinity kept as a distinguished value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Validates the range and builds a finite exponent.
    pub fn finite(p: f64) -> Result<Self> {
        if !(1.0..f64::INFINITY).contains(&p) {
            return Err(Error::ExponentOutOfRange(p));
        }
        Ok(Exponent::Finite(p))
    }

    /// Accepts `f64::INFINITY` as the infinite exponent.
    pub fn from_f64(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else {
            Self::finite(p)
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// The conjugate exponent, `1 <-> inf` and `2 -> 2`.
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if *p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(1.0 / (1.0 - 1.0 / p)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(p) => Exponent::from_f64(p).map_err(de::Error::custom),
            Raw::Text(s) if s == "inf" || s == "infinity" => Ok(Exponent::Infinity),
            Raw::Text(s) => Err(de::Error::custom(format!("bad exponent {s:?}"))),
        }
    }
}

/// Conjugate exponent `r'` with `1/r + 1/r' = 1`; `1 -> inf`, `inf -> 1`.
pub fn conjugate_exponent(r: f64) -> Result<f64> {
    Ok(Exponent::from_f64(r)?.conjugate().as_f64())
}

/// Evaluates a norm on raw coordinates.
pub type NormOracle = Box<dyn Fn(&[Complex64]) -> f64 + Send + Sync>;

/// A norm oracle for spaces outside the built-in families.
pub struct CustomNorm {
    pub name: String,
    pub oracle: NormOracle,
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomNorm({:?})", self.name)
    }
}

/// The norm family of a space.
#[derive(Clone, Debug)]
pub enum SpaceFamily {
    Ellp(Exponent),
    Euclidean,
    Custom(Arc<CustomNorm>),
}

/// A finite-dimensional complex vector space with an evaluable norm.
#[derive(Clone, Debug)]
pub struct NormedSpace {
    dim: usize,
    family: SpaceFamily,
}

impl PartialEq for NormedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && match (&self.family, &other.family) {
                (SpaceFamily::Ellp(p), SpaceFamily::Ellp(q)) => p == q,
                (SpaceFamily::Euclidean, SpaceFamily::Euclidean) => true,
                (SpaceFamily::Custom(a), SpaceFamily::Custom(b)) => a.name == b.name,
                _ => false,
            }
    }
}

impl NormedSpace {
    /// `l_p^dim` for `p` in `[1, inf]`.
    pub fn ellp(p: Exponent, dim: usize) -> Self {
        NormedSpace {
            dim,
            family: SpaceFamily::Ellp(p),
        }
    }

    /// Shorthand for a finite exponent; panics on `p < 1`.
    pub fn ellp_f(p: f64, dim: usize) -> Self {
        Self::ellp(Exponent::from_f64(p).expect("exponent in [1, inf]"), dim)
    }

    /// `l_2^dim` under its own tag; norms agree with `ellp(2)` exactly.
    pub fn euclidean(dim: usize) -> Self {
        NormedSpace {
            dim,
            family: SpaceFamily::Euclidean,
        }
    }

    /// `l_inf^dim`.
    pub fn linf(dim: usize) -> Self {
        Self::ellp(Exponent::Infinity, dim)
    }

    /// A space defined by a norm oracle. The invariants (homogeneity,
    /// triangle inequality) are the caller's responsibility; the test suite
    /// spot-checks them on samples.
    pub fn custom<F>(name: &str, dim: usize, oracle: F) -> Self
    where
        F: Fn(&[Complex64]) -> f64 + Send + Sync + 'static,
    {
        NormedSpace {
            dim,
            family: SpaceFamily::Custom(Arc::new(CustomNorm {
                name: name.to_string(),
                oracle: Box::new(oracle),
            })),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &SpaceFamily {
        &self.family
    }

    /// True when the norm is the euclidean one (`euclidean` or `ellp(2)`).
    pub fn is_euclidean(&self) -> bool {
        match &self.family {
            SpaceFamily::Euclidean => true,
            SpaceFamily::Ellp(Exponent::Finite(p)) => *p == 2.0,
            _ => false,
        }
    }

    /// Evaluates the norm, checking the dimension.
    pub fn norm(&self, v: &Vector) -> Result<f64> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        Ok(self.norm_slice(v.coords()))
    }

    /// Norm of a raw coordinate slice; the length must already match.
    pub fn norm_slice(&self, coords: &[Complex64]) -> f64 {
        debug_assert_eq!(coords.len(), self.dim);
        match &self.family {
            SpaceFamily::Euclidean => euclidean_norm(coords),
            SpaceFamily::Ellp(Exponent::Infinity) => coords
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max),
            SpaceFamily::Ellp(Exponent::Finite(p)) => {
                if *p == 2.0 {
                    euclidean_norm(coords)
                } else if *p == 1.0 {
                    coords.iter().map(|c| c.norm()).sum()
                } else {
                    coords
                        .iter()
                        .map(|c| c.norm().powf(*p))
                        .sum::<f64>()
                        .powf(1.0 / *p)
                }
            }
            SpaceFamily::Custom(custom) => (custom.oracle)(coords),
        }
    }
}

fn euclidean_norm(coords: &[Complex64]) -> f64 {
    coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

impl Serialize for NormedSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.family {
            SpaceFamily::Ellp(p) => {
                let mut s = serializer.serialize_struct("NormedSpace", 3)?;
                s.serialize_field("family", "ellp")?;
                s.serialize_field("p", p)?;
                s.serialize_field("dim", &self.dim)?;
                s.end()
            }
            SpaceFamily::Euclidean => {
                let mut s = serializer.serialize_struct("NormedSpace", 2)?;
                s.serialize_field("family", "euclidean")?;
                s.serialize_field("dim", &self.dim)?;
                s.end()
            }
            SpaceFamily::Custom(c) => {
                let mut s = serializer.serialize_struct("NormedSpace", 3)?;
                s.serialize_field("family", "custom")?;
                s.serialize_field("name", &c.name)?;
                s.serialize_field("dim", &self.dim)?;
                s.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for NormedSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            family: String,
            #[serde(default)]
            p: Option<Exponent>,
            dim: usize,
        }
        let raw = Raw::deserialize(deserializer)?;
        match raw.family.as_str() {
            "euclidean" => Ok(NormedSpace::euclidean(raw.dim)),
            "ellp" => {
                let p = raw.p.ok_or_else(|| de::Error::custom("ellp needs \"p\""))?;
                Ok(NormedSpace::ellp(p, raw.dim))
            }
            other => Err(de::Error::custom(format!(
                "space family {other:?} cannot be built from a descriptor"
            ))),
        }
    }
}

/// An element of a [`NormedSpace`]: a fixed-length array of complex coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    coords: Vec<Complex64>,
}

impl Vector {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Vector { coords }
    }

    /// Real coordinate list, imaginary parts zero.
    pub fn from_reals(reals: &[f64]) -> Self {
        Vector {
            coords: reals.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            coords: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [Complex64] {
        &mut self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// `self + w * factor`, in place.
    pub fn accumulate(&mut self, w: &Vector, factor: Complex64) {
        debug_assert_eq!(self.dim(), w.dim());
        for (a, b) in self.coords.iter_mut().zip(w.coords.iter()) {
            *a += b * factor;
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coords.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(deserializer)?;
        Ok(Vector {
            coords: pairs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        })
    }
}
