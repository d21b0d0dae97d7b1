//! Classical power sums `S_k(n) = 1^k + 2^k + ⋯ + n^k` reduced mod `n`.

use crate::arith::{crt, factorize, mod_pow};
use crate::error::{Error, Result};

/// A `(k, n)` pair for `S_k(n) mod n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerSumQuery {
    pub k: u64,
    pub n: u64,
}

impl PowerSumQuery {
    pub fn new(k: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                value: n,
                reason: "modulus n must be at least 1",
            });
        }
        Ok(Self { k, n })
    }

    pub fn naive(&self) -> u64 {
        s_mod_naive(self.k, self.n)
    }

    pub fn closed(&self) -> Result<u64> {
        s_mod_closed(self.k, self.n)
    }
}

/// `S_k(n) mod n` by direct summation. `S_0(n) = n ≡ 0`.
pub fn s_mod_naive(k: u64, n: u64) -> u64 {
    assert!(n >= 1, "n must be positive");
    (1..=n).fold(0u64, |acc, i| {
        let t = mod_pow(i, k, n);
        // acc, t < n ≤ u64::MAX, so add through u128 to stay exact
        ((acc as u128 + t as u128) % n as u128) as u64
    })
}

/// `S_k(p^r) mod p^r` for a prime power.
///
/// Odd `p`: `−p^{r−1}` when `p − 1 | k`, else `0`. For `p = 2` the sum is
/// `2^{r−1}` except when `k > 1` is odd and `4 | 2^r`, where it vanishes.
fn s_prime_power(k: u64, p: u64, r: u32) -> u64 {
    let pr = p.pow(r);
    let half = p.pow(r - 1);
    if p == 2 {
        if k > 1 && k % 2 == 1 && r >= 2 {
            0
        } else {
            half % pr
        }
    } else if k % (p - 1) == 0 {
        pr - half
    } else {
        0
    }
}

/// `S_k(n) mod n` without summation: evaluate on each `p^r ∥ n` from the
/// prime-power congruences, scale by `n/p^r`, recombine by CRT.
pub fn s_mod_closed(k: u64, n: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    let f = factorize(n)?;
    let parts: Vec<(u64, u64)> = f
        .prime_powers()
        .map(|(p, r, pr)| {
            // i^k mod p^r has period p^r in i, so S_k(n) ≡ (n/p^r)·S_k(p^r).
            let cofactor = (n / pr) % pr;
            let residue = (cofactor as u128 * s_prime_power(k, p, r) as u128 % pr as u128) as u64;
            (residue, pr)
        })
        .collect();
    Ok(crt(&parts).0)
}

/// Parity of `r` in `S_k(n) = r·n/2` for odd `k > 2`: `1` iff `n ≡ 2 (mod 4)`.
pub fn carlitz_r_parity(k: u64, n: u64) -> Result<u8> {
    if k <= 2 || k % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "parity of r needs an odd k > 2, got {k}"
        )));
    }
    if n == 0 {
        return Err(Error::OutOfRange {
            value: n,
            reason: "n must be at least 1",
        });
    }
    Ok(u8::from(n % 4 == 2))
}

/// Whether `n | S_k(n)`: either `n` is odd and no prime `p | n` has
/// `p − 1 | k`, or `4 | n` and `k > 1` is odd.
pub fn divides_s(k: u64, n: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if n % 2 == 1 {
        let f = factorize(n)?;
        let coprime = f.primes().all(|p| k % (p - 1) != 0);
        Ok(coprime)
    } else {
        Ok(n % 4 == 0 && k > 1 && k % 2 == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_examples() {
        assert_eq!(s_mod_naive(2, 6), 1);
        assert_eq!(s_mod_naive(5, 1), 0);
        assert_eq!(s_mod_naive(0, 5), 0);
        assert_eq!(s_mod_naive(0, 7), 0);
    }

    #[test]
    fn closed_examples() {
        assert_eq!(s_mod_closed(2, 6).unwrap(), 1);
        assert_eq!(s_mod_closed(4, 10).unwrap(), 3);
        assert_eq!(s_mod_closed(3, 4).unwrap(), 0);
        assert_eq!(s_mod_closed(0, 4), Err(Error::ZeroExponent));
        // 25333 = 1^4 + ⋯ + 10^4
        assert_eq!((1..=10u64).map(|i| i.pow(4)).sum::<u64>(), 25333);
    }

    #[test]
    fn closed_matches_naive_on_grid() {
        for k in 1..=40 {
            for n in 1..=200 {
                assert_eq!(s_mod_closed(k, n).unwrap(), s_mod_naive(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn odd_exponent_sums_are_multiples_of_half_n() {
        for k in (3..=40).step_by(2) {
            for n in 1..=200u64 {
                let s = s_mod_naive(k, n);
                assert_eq!(2 * s % n, 0, "k={k} n={n}");
                let r_parity = if s == 0 { 0 } else { 1 };
                assert_eq!(carlitz_r_parity(k, n).unwrap(), r_parity, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn parity_examples_and_rejections() {
        assert_eq!(carlitz_r_parity(3, 6).unwrap(), 1);
        assert_eq!(carlitz_r_parity(3, 8).unwrap(), 0);
        assert_eq!(carlitz_r_parity(5, 10).unwrap(), 1);
        assert_eq!(2 * s_mod_naive(5, 10) / 10 % 2, 1);
        assert!(carlitz_r_parity(4, 10).is_err());
        assert!(carlitz_r_parity(1, 10).is_err());
    }

    #[test]
    fn divisibility_examples() {
        assert!(divides_s(2, 5).unwrap());
        assert!(!divides_s(4, 5).unwrap());
        assert!(divides_s(3, 4).unwrap());
        assert_eq!((1..=5u64).map(|i| i.pow(4)).sum::<u64>() % 5, 4);
    }

    #[test]
    fn divisibility_matches_naive_on_grid() {
        for k in 1..=40 {
            for n in 1..=200 {
                assert_eq!(divides_s(k, n).unwrap(), s_mod_naive(k, n) == 0, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn query_wrapper() {
        let q = PowerSumQuery::new(4, 10).unwrap();
        assert_eq!(q.naive(), q.closed().unwrap());
        assert!(PowerSumQuery::new(1, 0).is_err());
    }
}
