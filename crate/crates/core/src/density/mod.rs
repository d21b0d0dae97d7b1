//! Exact asymptotic densities.
//!
//! `U_p = {n : p³ − p | n, p² ∤ n}` for inert `p`; the complement of
//! `M = {n : n | σ_n(n)}` is the union of all `U_p`. The density of that union
//! over a finite family comes from [`density_union`], and [`density_m_bracket`]
//! turns it into a rigorous interval for `δ(M)` using [`tail_bound`] for the
//! primes left out.

mod sieve;
mod tail;
mod union;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{factorize, is_prime, one, ratio, sieve_inert_primes, ExactRational, PrimeFamily};
use crate::error::{Error, Result};

pub use sieve::{empirical_complement_count, sieve_error_bound, SIEVE_MAX};
pub use tail::{
    tail_bound, TailBound, UnreducedFraction, REMAINDER_BOUND_AT_1299689, TAIL_BOUND_ABOVE_263, THETA_DIGITS,
};
pub use union::{
    density_union, density_union_preview, density_union_report, default_workers, UnionReport,
    MAX_FAMILY, MAX_UNION_PRIME,
};

/// Closed interval `[lower, upper]` inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityInterval {
    pub lower: ExactRational,
    pub upper: ExactRational,
}

impl DensityInterval {
    pub fn new(lower: ExactRational, upper: ExactRational) -> Result<Self> {
        if lower < BigRational::zero() || upper > one() || lower > upper {
            return Err(Error::InvalidInput(format!("not a sub-interval of [0, 1]: [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// `self ⊆ [lo, hi]`.
    pub fn within(&self, lo: &ExactRational, hi: &ExactRational) -> bool {
        lo <= &self.lower && &self.upper <= hi
    }

    pub fn width(&self) -> ExactRational {
        &self.upper - &self.lower
    }
}

/// `δ(N_k)`: `3/4` for odd `k > 1`, otherwise `Π (p² − p + 1)/p²` over inert
/// `p` with `p² − 1 | k`.
pub fn density_nk(k: u64) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if k > 1 && k % 2 == 1 {
        return Ok(ratio(3, 4));
    }
    let mut acc = one();
    let mut p = 3u64;
    while p * p - 1 <= k {
        if k % (p * p - 1) == 0 && is_prime(p) {
            acc *= ratio(p * p - p + 1, p * p);
        }
        p += 4;
    }
    Ok(acc)
}

/// `δ(U_p) = 1/(p²(p + 1))`.
pub fn density_up(p: u64) -> Result<ExactRational> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p = BigInt::from(p);
    Ok(BigRational::new(BigInt::one(), &p * &p * (&p + 1u32)))
}

/// Whether `U_q ∩ U_p` is empty, i.e. the smaller square divides the larger
/// `p² − 1`.
pub fn incompatible(q: u64, p: u64) -> bool {
    let (small, large) = if q < p { (q, p) } else { (p, q) };
    let (s, l) = (small as u128, large as u128);
    (l * l - 1) % (s * s) == 0
}

/// One inclusion–exclusion term: a set `S` of inert primes with
/// `φ = Π (q − 1)` and `lcm{q⁴ − q²}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTerm {
    pub primes: Vec<u64>,
    pub phi_product: BigUint,
    pub lcm_value: BigUint,
    /// `+1` for odd `|S|`, `−1` for even.
    pub sign: i8,
}

impl SubsetTerm {
    pub fn new(primes: &[u64]) -> Self {
        let mut phi_product = BigUint::one();
        let mut lcm_value = BigUint::one();
        for &q in primes {
            let q = BigUint::from(q);
            phi_product *= &q - 1u32;
            let q2 = &q * &q;
            lcm_value = lcm_value.lcm(&(&q2 * &q2 - &q2));
        }
        let sign = if primes.len() % 2 == 1 { 1 } else { -1 };
        Self {
            primes: primes.to_vec(),
            phi_product,
            lcm_value,
            sign,
        }
    }

    pub fn has_incompatible_pair(&self) -> bool {
        self.primes
            .iter()
            .enumerate()
            .any(|(i, &q)| self.primes[i + 1..].iter().any(|&p| incompatible(q, p)))
    }

    /// `δ(∩ U_q)`: `0` on an incompatible pair, else `φ / lcm`.
    pub fn density(&self) -> ExactRational {
        if self.has_incompatible_pair() {
            return BigRational::zero();
        }
        BigRational::new(self.phi_product.clone().into(), self.lcm_value.clone().into())
    }
}

/// `δ(∩_{q∈P} U_q)`.
pub fn density_intersection(family: &PrimeFamily) -> Result<ExactRational> {
    if family.is_empty() {
        return Err(Error::InvalidInput("intersection over an empty family".into()));
    }
    Ok(SubsetTerm::new(family.primes()).density())
}

/// `ϑ(m)` for squarefree `m > 1` whose prime factors are all `≡ 3 (mod 4)`.
pub fn theta_of(m: u64) -> Result<ExactRational> {
    if m <= 1 {
        return Err(Error::InvalidInput(format!("theta needs m > 1, got {m}")));
    }
    let f = factorize(m)?;
    if !f.is_squarefree() {
        return Err(Error::InvalidInput(format!("{m} is not squarefree")));
    }
    let family = PrimeFamily::new(f.primes().collect())?;
    density_intersection(&family)
}

/// Bracket for `δ(M)` together with the pieces it was built from.
#[derive(Debug, Clone)]
pub struct MBracket {
    pub primes_used: PrimeFamily,
    /// Density of the union of `U_p` over `primes_used`.
    pub ell: ExactRational,
    pub tail: TailBound,
    pub interval: DensityInterval,
}

/// `[1 − ℓ − tail, 1 − ℓ]` with `ℓ` the union density over the first
/// `num_primes` inert primes and `tail` bounding every larger inert prime.
pub fn density_m_bracket(num_primes: usize, p_limit: u64) -> Result<MBracket> {
    density_m_bracket_with(num_primes, p_limit, default_workers())
}

pub fn density_m_bracket_with(num_primes: usize, p_limit: u64, workers: usize) -> Result<MBracket> {
    if num_primes == 0 {
        return Err(Error::InvalidInput("num_primes must be at least 1".into()));
    }
    if num_primes > MAX_FAMILY {
        return Err(Error::SizeCap {
            size: num_primes,
            cap: MAX_FAMILY,
        });
    }
    let family = sieve_inert_primes(num_primes);
    let ell = density_union_report(&family, workers)?.value;
    bracket_from_union(family, ell, p_limit)
}

/// Bracket from an already computed union density `ell` over `family`.
pub fn bracket_from_union(family: PrimeFamily, ell: ExactRational, p_limit: u64) -> Result<MBracket> {
    let largest = family
        .largest()
        .ok_or_else(|| Error::InvalidInput("empty prime family".into()))?;
    let tail = tail_bound(largest, p_limit)?;
    let upper = one() - &ell;
    let lower = &upper - &tail.total;
    Ok(MBracket {
        primes_used: family,
        ell,
        tail,
        interval: DensityInterval::new(lower, upper)?,
    })
}
