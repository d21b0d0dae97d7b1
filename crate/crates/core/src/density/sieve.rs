//! Direct count of `∪ U_p ∩ [1, N]`, for checking densities empirically.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SubsetTerm;
use crate::arith::{ExactRational, PrimeFamily};
use crate::error::{Error, Result};

pub const SIEVE_MAX: u64 = 1_000_000_000;

/// `#{n ≤ bound : n ∈ U_p for some p ∈ P}` using a bitset over `[1, bound]`.
pub fn empirical_complement_count(bound: u64, family: &PrimeFamily) -> Result<u64> {
    if bound > SIEVE_MAX {
        return Err(Error::OutOfRange {
            value: bound,
            reason: "sieve bound above 10^9",
        });
    }
    let mut bits = vec![0u64; (bound as usize >> 6) + 1];
    for &p in family.primes() {
        let Some(u) = p.checked_mul(p).and_then(|x| x.checked_mul(p)).map(|c| c - p) else {
            continue;
        };
        if u > bound {
            continue;
        }
        // n = u·t has ν_p(n) = 1 + ν_p(t)
        for t in (1..=bound / u).filter(|t| t % p != 0) {
            let n = (t * u) as usize;
            bits[n >> 6] |= 1 << (n & 63);
        }
    }
    Ok(bits.iter().map(|w| w.count_ones() as u64).sum())
}

/// Worst-case gap `|count − bound·δ|` as a density, summed over the
/// inclusion–exclusion terms. A term whose set is empty on `[1, bound]`
/// (its least element `lcm{q³ − q}` exceeds `bound`) contributes its full
/// expected count; any other contributes at most its `φ(S)` progressions.
pub fn sieve_error_bound(bound: u64, family: &PrimeFamily) -> Result<ExactRational> {
    let primes = family.primes();
    if primes.len() > 20 {
        return Err(Error::SizeCap {
            size: primes.len(),
            cap: 20,
        });
    }
    if bound == 0 {
        return Err(Error::InvalidInput("bound must be positive".into()));
    }
    let n = BigUint::from(bound);
    let mut total = BigRational::zero();
    for mask in 1u32..1 << primes.len() {
        let subset: Vec<u64> = (0..primes.len()).filter(|&i| mask >> i & 1 == 1).map(|i| primes[i]).collect();
        let term = SubsetTerm::new(&subset);
        if term.has_incompatible_pair() {
            continue;
        }
        let least = subset
            .iter()
            .fold(BigUint::one(), |acc, &q| acc.lcm(&BigUint::from(q * q * q - q)));
        total += if least > n {
            term.density()
        } else {
            BigRational::new(term.phi_product.into(), n.clone().into())
        };
    }
    Ok(total)
}
