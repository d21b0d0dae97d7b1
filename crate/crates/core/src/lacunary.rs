//! Lacunary binomial sums modulo a prime: Hermite's vanishing sum, Dilcher's
//! alternating sum, and the signed sum used for the real part of `σ_k(n)`.
//!
//! Every sum is evaluated term by term with binomials reduced by Lucas'
//! theorem, and each comes with the closed case table it is expected to
//! match, so the two can be compared independently.

use crate::arith::{is_prime, mod_inverse};
use crate::error::{Error, Result};

/// `(k, p)` input shared by the sums in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LacunaryQuery {
    pub k: u64,
    pub p: u64,
}

impl LacunaryQuery {
    /// Requires `k ≥ 1` and `p` an odd prime.
    pub fn new(k: u64, p: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        require_odd_prime(p)?;
        Ok(Self { k, p })
    }
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidInput("p must be an odd prime".into()));
    }
    Ok(())
}

/// `C(n, m) mod p` for `n, m < p`.
fn small_binom(n: u64, m: u64, p: u64) -> u64 {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    let (mut num, mut den) = (1u128, 1u128);
    let p128 = p as u128;
    for i in 0..m {
        num = num * ((n - i) as u128 % p128) % p128;
        den = den * ((i + 1) as u128 % p128) % p128;
    }
    let inv = mod_inverse(den as u64, p).expect("factorials below p are units");
    (num * inv as u128 % p128) as u64
}

/// `C(n, m) mod p` via Lucas' theorem on the base-`p` digits.
pub fn binom_mod_p(n: u64, m: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    Ok(lucas(n, m, p))
}

fn lucas(mut n: u64, mut m: u64, p: u64) -> u64 {
    if m > n {
        return 0;
    }
    let mut acc = 1u64;
    while m > 0 {
        let (nd, md) = (n % p, m % p);
        if md > nd {
            return 0;
        }
        acc = (acc as u128 * small_binom(nd, md, p) as u128 % p as u128) as u64;
        n /= p;
        m /= p;
    }
    acc % p
}

/// Signed accumulator mod `p`.
fn add_signed(acc: u64, term: u64, negative: bool, p: u64) -> u64 {
    if negative {
        (acc + p - term) % p
    } else {
        (acc + term) % p
    }
}

/// `Σ_{0 < j(p−1) < k} C(k, j(p−1)) mod p`. Empty for `k ≤ p − 1`.
pub fn hermite_sum(k: u64, p: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    require_prime(p)?;
    let gap = p - 1;
    let mut acc = 0;
    let mut idx = gap;
    while idx < k {
        acc = (acc + lucas(k, idx, p)) % p;
        idx += gap;
    }
    Ok(acc)
}

/// `Σ_{j=0}^{k} (−1)^j C(k(p−1), j(p−1)) mod p`.
pub fn dilcher_sum(k: u64, p: u64) -> Result<u64> {
    let q = LacunaryQuery::new(k, p)?;
    let gap = q.p - 1;
    let top = q.k * gap;
    Ok((0..=q.k).fold(0, |acc, j| {
        add_signed(acc, lucas(top, j * gap, q.p), j % 2 == 1, q.p)
    }))
}

/// Closed value of [`dilcher_sum`]: `0` for odd `k`, `1` when `p + 1 | k`,
/// otherwise `2` (reduced mod `p`).
pub fn dilcher_expected(k: u64, p: u64) -> u64 {
    if k % 2 == 1 {
        0
    } else if k % (p + 1) == 0 {
        1 % p
    } else {
        2 % p
    }
}

/// `Σ_{j=1}^{n/(p−1) − 1} (−1)^{j(p−1)/2} C(n, j(p−1)) mod p`, for `p − 1 | n`.
pub fn signed_lacunary_sum(n: u64, p: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroExponent);
    }
    require_odd_prime(p)?;
    let gap = p - 1;
    if n % gap != 0 {
        return Err(Error::InvalidInput(format!("p - 1 = {gap} does not divide n = {n}")));
    }
    let blocks = n / gap;
    Ok((1..blocks).fold(0, |acc, j| {
        let negative = (j * gap / 2) % 2 == 1;
        add_signed(acc, lucas(n, j * gap, p), negative, p)
    }))
}

/// Closed value of [`signed_lacunary_sum`]: `p − 1` when `p ≡ 3 (mod 4)` and
/// `p + 1 | n/(p−1)`, else `0`.
pub fn signed_lacunary_expected(n: u64, p: u64) -> u64 {
    if p % 4 == 3 && (n / (p - 1)) % (p + 1) == 0 {
        p - 1
    } else {
        0
    }
}
