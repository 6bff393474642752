//! Subset-counting identity and the Stirling binomial ratio, both in exact
//! integer arithmetic.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Counts `|{B in [n] : |B| = k, |A cap B| = 1}|` by brute force for every
/// `|A| = m` and compares with `m * C(n-m, k-1)`. Returns the pair
/// `(enumerated count, closed form)`; they must agree for every `A`, which is
/// asserted, and the count for one representative `A` is returned.
pub fn combinatorial_identity_check(n: u32, m: u32, k: u32) -> Result<(u64, u64)> {
    if !(1..=n).contains(&m) || !(1..=n).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m,k <= n, got n={n}, m={m}, k={k}"
        )));
    }
    if n > 20 {
        return Err(Error::InvalidParameter(format!(
            "brute-force enumeration capped at n = 20, got {n}"
        )));
    }
    let closed = (m as u64)
        * binomial((n - m) as u64, (k - 1) as u64)
            .to_u64()
            .expect("fits at n <= 20");
    let full: u32 = (1u32 << n) - 1;
    let mut representative = None;
    for a in 0..=full {
        if a.count_ones() != m {
            continue;
        }
        let mut count = 0u64;
        for b in 0..=full {
            if b.count_ones() == k && (a & b).count_ones() == 1 {
                count += 1;
            }
        }
        assert_eq!(count, closed, "identity failed for A mask {a:#b}");
        representative.get_or_insert(count);
    }
    Ok((representative.unwrap_or(0), closed))
}

/// `C(n,k) / (m * C(n-m, k-1))` for `n = k*m`, computed exactly and then
/// converted to a float.
pub fn stirling_ratio(n: u64, m: u64, k: u64) -> Result<f64> {
    if n != k * m || m == 0 || k == 0 {
        return Err(Error::StirlingShape { n, m, k });
    }
    let numer = binomial(n, k);
    let denom = BigUint::from(m) * binomial(n - m, k - 1);
    let ratio = BigRational::new(numer.into(), denom.into());
    Ok(ratio.to_f64().expect("finite ratio"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn identity_small_cases() {
        assert_eq!(combinatorial_identity_check(2, 1, 1).unwrap(), (1, 1));
        assert_eq!(combinatorial_identity_check(4, 2, 2).unwrap(), (4, 4));
        // k - 1 > n - m empties both sides
        assert_eq!(combinatorial_identity_check(4, 3, 3).unwrap(), (0, 0));
    }

    #[test]
    fn identity_rejects_bad_shapes() {
        assert!(combinatorial_identity_check(3, 0, 1).is_err());
        assert!(combinatorial_identity_check(3, 1, 4).is_err());
    }

    /// The weighted form of the identity: for arbitrary weights `v_A`,
    /// `sum_B sum_{A1 in B, |A1|=1} sum_{A2 in B^c, |A2|=m-1} v_{A1 u A2}`
    /// equals `m * C(n-m, k-1) * sum_A v_A`.
    #[test]
    fn weighted_triple_sum_matches_closed_form() {
        let (n, m, k) = (6u32, 3u32, 2u32);
        let full: u32 = (1 << n) - 1;
        // deterministic pseudo-random weights
        let weight = |mask: u32| -> i64 { ((mask as i64) * 2654435761 % 97) - 48 };

        let mut lhs = 0i64;
        for b in 0..=full {
            if b.count_ones() != k {
                continue;
            }
            let bc = full & !b;
            for a1 in 0..=full {
                if a1.count_ones() != 1 || a1 & b != a1 {
                    continue;
                }
                for a2 in 0..=full {
                    if a2.count_ones() == m - 1 && a2 & bc == a2 {
                        lhs += weight(a1 | a2);
                    }
                }
            }
        }
        let mut total = 0i64;
        for a in 0..=full {
            if a.count_ones() == m {
                total += weight(a);
            }
        }
        let factor = (m as i64)
            * binomial((n - m) as u64, (k - 1) as u64)
                .to_u64()
                .unwrap() as i64;
        assert_eq!(lhs, factor * total);
    }

    #[test]
    fn stirling_reference_values() {
        assert_eq!(stirling_ratio(5, 1, 5).unwrap(), 1.0);
        assert_eq!(stirling_ratio(4, 2, 2).unwrap(), 1.5);
        assert!(matches!(
            stirling_ratio(5, 2, 2),
            Err(Error::StirlingShape { n: 5, m: 2, k: 2 })
        ));
    }

    #[test]
    fn stirling_bound_over_the_desk_range() {
        for m in 1..=40u64 {
            for k in 1..=40u64 {
                let n = k * m;
                if n > 40 {
                    continue;
                }
                let r = stirling_ratio(n, m, k).unwrap();
                assert!((0.5..=4.0).contains(&r), "ratio {r} at n={n}, m={m}, k={k}");
            }
        }
    }
}
