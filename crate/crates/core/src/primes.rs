//! Prime sieve backing the Bohr transform.
//!
//! The table is built once by a smallest-prime-factor sieve (default bound
//! `10^6`) so factorizations are exact, never probabilistic. Indices above the
//! bound fall back to trial division by the sieved primes.

use std::sync::OnceLock;

/// Default sieve bound; covers every Dirichlet index the experiments use.
pub const DEFAULT_SIEVE_BOUND: u64 = 1_000_000;

/// Smallest-prime-factor table plus the ordered prime list.
pub struct PrimeTable {
    bound: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(bound: u64) -> Self {
        let bound = bound.max(2);
        let mut spf = vec![0u32; bound as usize + 1];
        let mut primes = Vec::new();
        for i in 2..=bound as usize {
            if spf[i] == 0 {
                primes.push(i as u64);
                let mut j = i;
                while j <= bound as usize {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        PrimeTable { bound, spf, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Ordered primes up to the bound.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Zero-based index of `p` in the prime list, if `p` is a sieved prime.
    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// Prime factorization as `(prime index, exponent)` pairs in increasing
    /// prime order. Assumes every prime factor is within the sieve bound;
    /// fails with the offending cofactor otherwise.
    pub fn factor_pairs(&self, n: u64) -> Result<Vec<(usize, u32)>, u64> {
        assert!(n >= 1, "factorization needs n >= 1");
        let mut pairs = Vec::new();
        let mut rest = n;
        if rest <= self.bound {
            // spf walk: exact and O(log n)
            while rest > 1 {
                let p = self.spf[rest as usize] as u64;
                let mut e = 0u32;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                pairs.push((self.prime_index(p).expect("sieved prime"), e));
            }
            return Ok(pairs);
        }
        for (idx, &p) in self.primes.iter().enumerate() {
            if p.saturating_mul(p) > rest {
                break;
            }
            if rest.is_multiple_of(p) {
                let mut e = 0u32;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                pairs.push((idx, e));
            }
        }
        if rest > 1 {
            if rest <= self.bound {
                let idx = self.prime_index(rest).expect("sieved prime");
                pairs.push((idx, 1));
            } else {
                return Err(smallest_prime_factor_beyond(rest, self.bound));
            }
        }
        Ok(pairs)
    }

    /// Number of prime divisors counted with multiplicity.
    pub fn omega(&self, n: u64) -> u32 {
        match self.factor_pairs(n) {
            Ok(pairs) => pairs.iter().map(|&(_, e)| e).sum(),
            Err(p) => {
                let mut rest = n;
                let mut count = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    count += 1;
                }
                count + self.omega(rest)
            }
        }
    }
}

/// Smallest prime factor of `rest`, all of whose prime factors exceed `bound`.
fn smallest_prime_factor_beyond(rest: u64, bound: u64) -> u64 {
    let mut d = bound + 1 + (bound % 2);
    while d.saturating_mul(d) <= rest {
        if rest.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    rest
}

/// The shared default table, built on first use.
pub fn default_table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::new(DEFAULT_SIEVE_BOUND))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table_layout() {
        let t = PrimeTable::new(30);
        assert_eq!(t.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(t.prime_index(7), Some(3));
        assert_eq!(t.prime_index(9), None);
    }

    #[test]
    fn factor_pairs_recompose() {
        let t = PrimeTable::new(1000);
        for n in 1..=1000u64 {
            let pairs = t.factor_pairs(n).unwrap();
            let back: u64 = pairs
                .iter()
                .map(|&(i, e)| t.primes()[i].pow(e))
                .product();
            assert_eq!(back, n);
        }
    }

    #[test]
    fn factor_above_bound_uses_trial_division() {
        let t = PrimeTable::new(100);
        // 101 * 97 is above the bound but 97 is sieved and 101 is below 100^2
        assert_eq!(t.factor_pairs(9797), Err(101));
        assert_eq!(t.omega(9797), 2);
        let pairs = t.factor_pairs(2 * 2 * 97).unwrap();
        assert_eq!(pairs, vec![(0, 2), (t.prime_index(97).unwrap(), 1)]);
    }

    #[test]
    fn omega_reference_values() {
        let t = default_table();
        assert_eq!(t.omega(1), 0);
        assert_eq!(t.omega(12), 3);
        assert_eq!(t.omega(64), 6);
        assert_eq!(t.omega(999_983), 1); // largest prime below 10^6
    }
}
