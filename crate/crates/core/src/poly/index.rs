//! Monomial indices: exponent multi-indices on the torus side and finite
//! subsets of `[1..n]` on the Boolean-cube side.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// An exponent vector `alpha` in `N_0^n` with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MultiIndex {
    exponents: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        MultiIndex { exponents, degree }
    }

    pub fn zero(n_vars: usize) -> Self {
        MultiIndex {
            exponents: vec![0; n_vars],
            degree: 0,
        }
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn n_vars(&self) -> usize {
        self.exponents.len()
    }

    /// True when every exponent is at most one.
    pub fn is_tetrahedral(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    /// First variable (zero-based) carrying an exponent above one, with the
    /// exponent itself.
    pub fn first_non_tetrahedral(&self) -> Option<(usize, u32)> {
        self.exponents
            .iter()
            .enumerate()
            .find(|&(_, &e)| e > 1)
            .map(|(i, &e)| (i, e))
    }

    /// Set of variables (1-based) with odd exponent.
    pub fn odd_support(&self) -> SubsetIndex {
        SubsetIndex {
            members: self
                .exponents
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e % 2 == 1)
                .map(|(i, _)| i as u32 + 1)
                .collect(),
        }
    }
}

/// A finite `A` inside `[1..n]`, kept strictly increasing and 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SubsetIndex {
    members: Vec<u32>,
}

impl SubsetIndex {
    /// Validates strict increase and positivity.
    pub fn new(members: Vec<u32>) -> Result<Self> {
        for pair in members.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::SubsetNotSorted(pair[1], pair[0]));
            }
        }
        if members.first().is_some_and(|&m| m == 0) {
            return Err(Error::SubsetOutOfRange {
                member: 0,
                n_vars: 0,
            });
        }
        Ok(SubsetIndex { members })
    }

    pub fn empty() -> Self {
        SubsetIndex { members: vec![] }
    }

    /// Builds from a bitmask, bit `i` standing for member `i + 1`.
    pub fn from_mask(mask: u64) -> Self {
        let members = (0..64)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i as u32 + 1)
            .collect();
        SubsetIndex { members }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    /// Cardinality `|A|`.
    pub fn card(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn max_member(&self) -> Option<u32> {
        self.members.last().copied()
    }

    /// Bitmask with bit `i - 1` set per member `i`; members must be <= 64.
    pub fn mask(&self) -> u64 {
        self.members
            .iter()
            .fold(0u64, |acc, &m| acc | 1u64 << (m - 1))
    }

    /// The 0/1 exponent vector `1_A` of length `n_vars`.
    pub fn indicator(&self, n_vars: usize) -> MultiIndex {
        let mut exps = vec![0u32; n_vars];
        for &m in &self.members {
            exps[m as usize - 1] = 1;
        }
        MultiIndex::new(exps)
    }
}

impl FromIterator<u32> for SubsetIndex {
    /// Sorts and dedups, so any iterator of positive members is accepted.
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        let mut members: Vec<u32> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        assert!(members.first().is_none_or(|&m| m > 0), "members are 1-based");
        SubsetIndex { members }
    }
}
