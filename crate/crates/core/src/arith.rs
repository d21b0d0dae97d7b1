//! Shared arithmetic: primes, factorization, modular and exact rational
//! helpers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Largest value accepted by [`factorize`].
pub const FACTORIZE_MAX: u64 = (1 << 63) - 1;

/// All primes `≤ limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut i = 2;
    while i * i <= limit {
        if !composite[i] {
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=limit)
        .filter(|&n| !composite[n])
        .map(|n| n as u64)
        .collect()
}

/// `a·b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod modulus`, canonical in `[0, modulus)`.
///
/// `exp = 0` gives `1 mod modulus`, so the result is `0` when `modulus = 1`.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    let mut base = base % modulus;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Combine `x ≡ r_i (mod m_i)` for pairwise coprime `m_i` whose product fits
/// in a `u64`. Returns `(x, Π m_i)` with `x` canonical.
pub fn crt(parts: &[(u64, u64)]) -> (u64, u64) {
    let mut x: u64 = 0;
    let mut m: u64 = 1;
    for &(r, mi) in parts {
        let r = r % mi;
        // x + m·t ≡ r (mod mi)  ⇒  t ≡ (r − x)·m⁻¹ (mod mi)
        let inv = mod_inverse(m % mi, mi).expect("CRT moduli must be coprime");
        let diff = (r + mi - x % mi) % mi;
        let t = mul_mod(diff, inv, mi);
        x += m * t;
        m *= mi;
    }
    (x, m)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`. Every residue is its own
/// inverse modulo 1, so that case yields `Some(0)`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Prime factorization `n = Π p^e`, primes strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// `ν_p(n)`.
    pub fn valuation(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// Prime powers `p^e ∥ n`.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.pairs.iter().map(|&(p, e)| (p, e, p.pow(e)))
    }
}

/// Complete factorization of `1 ≤ n < 2^63` by trial division.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 || n > FACTORIZE_MAX {
        return Err(Error::OutOfRange {
            value: n,
            reason: "factorize expects 1 <= n < 2^63",
        });
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    // 6k ± 1 wheel
    let mut d = 5u64;
    while d.saturating_mul(d) <= rest {
        push(d, &mut rest);
        push(d + 2, &mut rest);
        d += 6;
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Ok(Factorization { pairs })
}

/// Ascending set of distinct primes, each `≡ 3 (mod 4)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PrimeFamily {
    primes: Vec<u64>,
}

impl PrimeFamily {
    /// Validates and sorts `primes`.
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        for w in primes.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput(format!("duplicate prime {}", w[0])));
            }
        }
        for &p in &primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p % 4 != 3 {
                return Err(Error::InvalidInput(format!("{p} is not congruent to 3 mod 4")));
            }
        }
        Ok(Self { primes })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn largest(&self) -> Option<u64> {
        self.primes.last().copied()
    }

    /// The first `count` members.
    pub fn prefix(&self, count: usize) -> Self {
        Self {
            primes: self.primes[..count.min(self.primes.len())].to_vec(),
        }
    }
}

/// The `count` smallest primes `≡ 3 (mod 4)`.
pub fn sieve_inert_primes(count: usize) -> PrimeFamily {
    assert!(count >= 1, "count must be positive");
    let mut limit = 64u64.max(count as u64 * 16);
    loop {
        let inert: Vec<u64> = primes_up_to(limit)
            .into_iter()
            .filter(|p| p % 4 == 3)
            .take(count)
            .collect();
        if inert.len() == count {
            return PrimeFamily { primes: inert };
        }
        limit *= 2;
    }
}

/// `lcm(acc, v)`.
pub fn rational_lcm_accumulate(acc: &BigUint, v: u64) -> BigUint {
    acc.lcm(&BigUint::from(v))
}

/// Rounding direction for [`decimal_render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Down => "down",
            Direction::Up => "up",
        })
    }
}

/// Fixed-point decimal with `digits` fractional digits.
///
/// `Down` is the largest such decimal `≤ q`; `Up` is the smallest one
/// strictly greater than `q`, so the two always bracket `q` with a gap of
/// exactly `10^-digits`.
pub fn decimal_render(q: &ExactRational, digits: u32, direction: Direction) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    let mut units = scaled.floor().to_integer();
    if direction == Direction::Up {
        units += 1;
    }
    let negative = units.is_negative();
    let (int_part, frac_part) = units.abs().div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits as usize));
    }
    out
}

/// Parse a plain decimal literal such as `"0.971000169"` exactly.
pub fn parse_decimal(text: &str) -> Result<ExactRational> {
    let bad = || Error::InvalidInput(format!("not a decimal literal: {text:?}"));
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits: String = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Number of decimal digits of `|x|` (`0` has one digit).
pub fn decimal_digits(x: &BigInt) -> usize {
    if x.is_zero() {
        1
    } else {
        x.abs().to_string().len()
    }
}

/// `p/q` as an exact rational from small integers.
pub fn ratio(p: u64, q: u64) -> ExactRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `1` as an exact rational.
pub fn one() -> ExactRational {
    BigRational::one()
}
