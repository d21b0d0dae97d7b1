//! Closed form of `σ_k(n) mod n`.
//!
//! ```text
//! σ_k(n) ≡ (n/2)(1+i)                 if k > 1 is odd and n ≡ 2 (mod 4)
//!        ≡ −Σ_{p ∈ P(k,n)} n²/p²       otherwise
//! P(k,n) = { p prime : ν_p(n) = 1, p² − 1 | k, p ≡ 3 (mod 4) }
//! ```
//!
//! Alongside [`sigma_closed`] this module keeps two independent routes: the
//! binomial expansion through classical power sums ([`sigma_via_binomial_expansion`]) and
//! the per-part case analysis ([`re_case`], [`im_case`]) that recombines the
//! real part by CRT over prime powers.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{crt, factorize, mul_mod};
use crate::classical::s_mod_naive;
use crate::error::{Error, Result};
use crate::gaussian::GaussianResidue;

/// Which branch of the closed formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// `k > 1` odd and `n ≡ 2 (mod 4)`.
    OddKN2Mod4,
    General,
}

pub fn case_tag(k: u64, n: u64) -> CaseTag {
    if k > 1 && k % 2 == 1 && n % 4 == 2 {
        CaseTag::OddKN2Mod4
    } else {
        CaseTag::General
    }
}

/// The primes of `P(k, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianPrimeWitnessSet {
    pub k: u64,
    pub n: u64,
    pub primes: Vec<u64>,
}

fn check_inputs(k: u64, n: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if n == 0 {
        return Err(Error::OutOfRange {
            value: n,
            reason: "n must be at least 1",
        });
    }
    Ok(())
}

pub fn gaussian_prime_set(k: u64, n: u64) -> Result<GaussianPrimeWitnessSet> {
    check_inputs(k, n)?;
    let primes = factorize(n)?
        .pairs()
        .iter()
        .filter(|&&(p, e)| e == 1 && p % 4 == 3 && k % (p * p - 1) == 0)
        .map(|&(p, _)| p)
        .collect();
    Ok(GaussianPrimeWitnessSet { k, n, primes })
}

/// `σ_k(n) mod n` from the closed formula.
pub fn sigma_closed(k: u64, n: u64) -> Result<GaussianResidue> {
    check_inputs(k, n)?;
    if case_tag(k, n) == CaseTag::OddKN2Mod4 {
        let half = (n / 2) as i128;
        return Ok(GaussianResidue::new(half, half, n));
    }
    let witnesses = gaussian_prime_set(k, n)?;
    // n²/p² = (n/p)², integral because p ∥ n
    let sum = witnesses.primes.iter().fold(0u64, |acc, &p| {
        let q = (n / p) % n;
        ((acc as u128 + mul_mod(q, q, n) as u128) % n as u128) as u64
    });
    Ok(GaussianResidue::new(-(sum as i128), 0, n))
}

/// Exact binomial row `C(k, 0..=k)`.
fn binomial_row(k: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(k as usize + 1);
    let mut c = BigUint::from(1u32);
    row.push(c.clone());
    for m in 0..k {
        c = c * (k - m) / (m + 1);
        row.push(c.clone());
    }
    row
}

/// Real and imaginary parts from the binomial expansion
/// `σ_k(n) = Σ_m C(k,m) i^m S_{k−m}(n) S_m(n)`, with each `S_m(n)` summed
/// directly and the binomials computed exactly.
pub fn sigma_via_binomial_expansion(k: u64, n: u64) -> Result<GaussianResidue> {
    check_inputs(k, n)?;
    let sums: Vec<u64> = (0..=k).map(|m| s_mod_naive(m, n)).collect();
    let modulus = BigUint::from(n);
    let binom: Vec<u64> = binomial_row(k)
        .iter()
        .map(|c| (c % &modulus).to_u64().expect("reduced below n"))
        .collect();
    let mut re: i128 = 0;
    let mut im: i128 = 0;
    let n128 = n as i128;
    for m in 0..=k as usize {
        let term = mul_mod(mul_mod(binom[m], sums[m], n), sums[k as usize - m], n) as i128;
        // i^m cycles through 1, i, −1, −i
        match m % 4 {
            0 => re += term,
            1 => im += term,
            2 => re -= term,
            _ => im -= term,
        }
        re %= n128;
        im %= n128;
    }
    Ok(GaussianResidue::new(re, im, n))
}

/// Imaginary part: `n/2` when `n ≡ 2 (mod 4)` and `k > 1` is odd, else `0`.
pub fn im_case(k: u64, n: u64) -> Result<u64> {
    check_inputs(k, n)?;
    Ok(match case_tag(k, n) {
        CaseTag::OddKN2Mod4 => n / 2,
        CaseTag::General => 0,
    })
}

/// Real part by case: `n/2` for odd `k > 1` with `n ≡ 2 (mod 4)`; `0` for
/// `k = 1` or the remaining odd `k`; for even `k`, CRT of `−(n/p)² mod p` on
/// each witness prime and `0 mod p^r` on every other prime power.
pub fn re_case(k: u64, n: u64) -> Result<u64> {
    check_inputs(k, n)?;
    if n == 1 {
        return Ok(0);
    }
    if k % 2 == 1 {
        return Ok(match case_tag(k, n) {
            CaseTag::OddKN2Mod4 => n / 2,
            CaseTag::General => 0,
        });
    }
    let f = factorize(n)?;
    let parts: Vec<(u64, u64)> = f
        .prime_powers()
        .map(|(p, r, pr)| {
            if r == 1 && p % 4 == 3 && k % (p * p - 1) == 0 {
                let q = (n / p) % p;
                let sq = mul_mod(q, q, p);
                ((p - sq) % p, p)
            } else {
                (0, pr)
            }
        })
        .collect();
    Ok(crt(&parts).0)
}

/// `lcm{p² − 1 : p | n, p ≡ 3 (mod 4)}`; `σ_k(n)` is unchanged when `k`
/// moves by a multiple of this period within the same parity class.
pub fn exponent_period(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    let mut l = 1u64;
    for p in f.primes().filter(|p| p % 4 == 3) {
        let v = p * p - 1;
        l = l / gcd(l, v) * v;
    }
    Ok(l)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while !b.is_zero() {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::sigma_bruteforce;

    fn g(re: i128, im: i128, n: u64) -> GaussianResidue {
        GaussianResidue::new(re, im, n)
    }

    #[test]
    fn witness_set_examples() {
        assert_eq!(gaussian_prime_set(8, 6).unwrap().primes, vec![3]);
        assert!(gaussian_prime_set(8, 9).unwrap().primes.is_empty());
        for n in 1..=500 {
            assert!(gaussian_prime_set(2, n).unwrap().primes.is_empty());
        }
        assert_eq!(gaussian_prime_set(48 * 8, 21).unwrap().primes, vec![3, 7]);
    }

    #[test]
    fn closed_examples() {
        assert_eq!(sigma_closed(3, 6).unwrap(), g(3, 3, 6));
        assert_eq!(sigma_closed(8, 24).unwrap(), g(8, 0, 24));
        assert_eq!(sigma_closed(8, 12).unwrap(), g(8, 0, 12));
        assert_eq!(sigma_closed(8, 15).unwrap(), g(5, 0, 15));
        assert_eq!(sigma_bruteforce(8, 12).unwrap(), g(8, 0, 12));
        assert_eq!(sigma_bruteforce(8, 15).unwrap(), g(5, 0, 15));
        assert_eq!(sigma_closed(0, 15), Err(Error::ZeroExponent));
    }

    #[test]
    fn binomial_expansion_examples() {
        assert_eq!(sigma_via_binomial_expansion(3, 2).unwrap(), g(1, 1, 2));
        for n in 1..=24 {
            assert!(sigma_via_binomial_expansion(2, n).unwrap().is_zero());
        }
        assert_eq!(sigma_via_binomial_expansion(8, 3).unwrap(), g(2, 0, 3));
    }

    #[test]
    fn case_examples() {
        assert_eq!(im_case(5, 10).unwrap(), 5);
        assert_eq!(im_case(4, 10).unwrap(), 0);
        assert_eq!(im_case(7, 8).unwrap(), 0);
        assert_eq!(re_case(9, 14).unwrap(), 7);
        assert_eq!(re_case(1, 17).unwrap(), 0);
        assert_eq!(re_case(16, 21).unwrap(), 14);
    }

    #[test]
    fn triple_agreement() {
        for k in 1..=40 {
            for n in 1..=40 {
                let brute = sigma_bruteforce(k, n).unwrap();
                assert_eq!(sigma_closed(k, n).unwrap(), brute, "closed k={k} n={n}");
                assert_eq!(sigma_via_binomial_expansion(k, n).unwrap(), brute, "expansion k={k} n={n}");
                assert_eq!((re_case(k, n).unwrap(), im_case(k, n).unwrap()), (brute.re(), brute.im()));
            }
        }
    }

    #[test]
    fn imaginary_part_is_zero_or_half() {
        for k in 1..=60 {
            for n in 1..=60 {
                let s = sigma_bruteforce(k, n).unwrap();
                let expect_half = k > 1 && k % 2 == 1 && n % 4 == 2;
                assert_eq!(s.im(), if expect_half { n / 2 } else { 0 }, "k={k} n={n}");
                if s.im() != 0 {
                    assert_eq!(s.re(), n / 2);
                }
            }
        }
    }

    #[test]
    fn closed_formula_is_periodic_in_k() {
        for n in 1..=200 {
            let period = exponent_period(n).unwrap();
            // k = 1 sits outside the odd case, so start from 2
            for k in 2..=60 {
                let shift = 2 * period;
                assert_eq!(sigma_closed(k, n).unwrap(), sigma_closed(k + shift, n).unwrap(), "k={k} n={n}");
            }
        }
        // spot-check the shifted exponent by brute force where it stays cheap
        for n in [3u64, 6, 12, 21, 42] {
            let period = exponent_period(n).unwrap();
            assert_eq!(sigma_bruteforce(8, n).unwrap(), sigma_bruteforce(8 + period, n).unwrap());
        }
    }
}
