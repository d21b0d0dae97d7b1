//! Upper bound on the density contributed by inert primes above a cutoff.
//!
//! Since `δ(U_p) = 1/(p³ + p²)`, the primes in `(p_min, p_limit]` are summed
//! exactly by binary splitting. Everything beyond `p_limit` is bounded by
//! `Σ_{p > p_limit} 1/p³`, obtained from a 40-digit value of
//! `Θ = Σ_{p ≡ 3 (4)} 1/p³` minus a certified lower bound of the partial sum
//! up to `p_limit`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{parse_decimal, primes_up_to, ratio, ExactRational};
use crate::error::{Error, Result};

/// `Θ` truncated to 40 digits; the true value lies within `10⁻⁴⁰` above it.
pub const THETA_DIGITS: &str = "0.0410075565664730319288865488519600259243";
/// Reference bound on `Σ_{p > 1299689} 1/p³` over inert `p`.
pub const REMAINDER_BOUND_AT_1299689: f64 = 2e-14;
/// Reference bound on the whole tail above the 30th inert prime, `263`.
pub const TAIL_BOUND_ABOVE_263: (u64, u64) = (53_539, 100_000_000_000);

const SIEVE_CAP: u64 = 100_000_000;
const GRID_DIGITS: u32 = 60;

/// A fraction kept without gcd reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnreducedFraction {
    pub numer: BigUint,
    pub denom: BigUint,
}

impl UnreducedFraction {
    /// `self < a/b` by cross multiplication.
    pub fn lt(&self, other: &ExactRational) -> bool {
        let lhs = BigInt::from(self.numer.clone()) * other.denom();
        let rhs = other.numer() * BigInt::from(self.denom.clone());
        lhs < rhs
    }

    /// Smallest multiple of `10^-digits` that is at least `self`.
    pub fn ceil_to_grid(&self, digits: u32) -> ExactRational {
        let scale = BigUint::from(10u32).pow(digits);
        let scaled = (&self.numer * &scale).div_ceil(&self.denom);
        BigRational::new(scaled.into(), scale.into())
    }

    pub fn reduce(&self) -> ExactRational {
        BigRational::new(self.numer.clone().into(), self.denom.clone().into())
    }
}

/// Certified tail bound.
#[derive(Debug, Clone)]
pub struct TailBound {
    pub p_min: u64,
    pub p_limit: u64,
    /// Inert primes in `(p_min, p_limit]`.
    pub primes_counted: usize,
    /// `Σ 1/(p³ + p²)` over those primes.
    pub exact_sum: UnreducedFraction,
    /// `exact_sum` rounded up to the 60-digit grid.
    pub sum_upper: ExactRational,
    /// Upper bound for `Σ_{p > p_limit} 1/p³`.
    pub remainder_upper: ExactRational,
    pub total: ExactRational,
}

/// `Σ 1/d` over the slice, as one unreduced fraction.
fn split_sum(ds: &[BigUint]) -> (BigUint, BigUint) {
    match ds.len() {
        0 => (BigUint::zero(), BigUint::one()),
        1 => (BigUint::one(), ds[0].clone()),
        n => {
            let (a, b) = split_sum(&ds[..n / 2]);
            let (c, d) = split_sum(&ds[n / 2..]);
            (a * &d + c * &b, b * d)
        }
    }
}

/// `Θ_upper − Σ_{p ≤ p_limit} ⌊10^60/p³⌋/10^60` over inert primes.
fn remainder_upper(inert: &[u64]) -> Result<ExactRational> {
    let scale = BigUint::from(10u32).pow(GRID_DIGITS);
    let mut floor_sum = BigUint::zero();
    for &p in inert {
        let cube = BigUint::from(p).pow(3);
        floor_sum += &scale / cube;
    }
    let theta_upper = parse_decimal(THETA_DIGITS)? + ratio(1, 1) / BigRational::from_integer(BigInt::from(10u32).pow(40));
    let r = theta_upper - BigRational::new(floor_sum.into(), scale.into());
    if r < BigRational::zero() {
        return Err(Error::InvalidInput("partial sum exceeds the stored constant".into()));
    }
    Ok(r)
}

/// Bound on `Σ_{p > p_min, p ≡ 3 (4)} δ(U_p)`.
pub fn tail_bound(p_min: u64, p_limit: u64) -> Result<TailBound> {
    if p_min >= p_limit {
        return Err(Error::InvalidInput(format!("need p_min < p_limit, got {p_min} and {p_limit}")));
    }
    if p_limit > SIEVE_CAP {
        return Err(Error::OutOfRange {
            value: p_limit,
            reason: "p_limit above the sieve cap of 10^8",
        });
    }
    let inert: Vec<u64> = primes_up_to(p_limit).into_iter().filter(|p| p % 4 == 3).collect();
    let window: Vec<BigUint> = inert
        .iter()
        .filter(|&&p| p > p_min)
        .map(|&p| {
            let p = p as u128;
            BigUint::from(p * p * p + p * p)
        })
        .collect();
    let (numer, denom) = split_sum(&window);
    let exact_sum = UnreducedFraction { numer, denom };
    let sum_upper = exact_sum.ceil_to_grid(GRID_DIGITS);
    let remainder_upper = remainder_upper(&inert)?;
    let total = &sum_upper + &remainder_upper;
    Ok(TailBound {
        p_min,
        p_limit,
        primes_counted: window.len(),
        exact_sum,
        sum_upper,
        remainder_upper,
        total,
    })
}
