//! Gaussian integers: residues in `ℤ[i]/nℤ[i]`, exact values in `ℤ[i]`, and
//! the literal double sums defining `σ_k(n)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::arith::mul_mod;
use crate::error::{Error, Result};

/// An element `re + im·i` of `ℤ[i]/nℤ[i]`, both parts in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianResidue {
    re: u64,
    im: u64,
    modulus: u64,
}

impl GaussianResidue {
    /// Canonicalizes `re`, `im` into `[0, modulus)`.
    pub fn new(re: i128, im: i128, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let m = modulus as i128;
        Self {
            re: re.rem_euclid(m) as u64,
            im: im.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        Self::new(0, 0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        Self::new(1, 0, modulus)
    }

    pub fn re(&self) -> u64 {
        self.re
    }

    pub fn im(&self) -> u64 {
        self.im
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.modulus as u128;
        Ok(Self {
            re: ((self.re as u128 + other.re as u128) % n) as u64,
            im: ((self.im as u128 + other.im as u128) % n) as u64,
            modulus: self.modulus,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.modulus;
        let ac = mul_mod(self.re, other.re, n);
        let bd = mul_mod(self.im, other.im, n);
        let ad = mul_mod(self.re, other.im, n);
        let bc = mul_mod(self.im, other.re, n);
        Self {
            re: if ac >= bd { ac - bd } else { n - (bd - ac) },
            im: ((ad as u128 + bc as u128) % n as u128) as u64,
            modulus: n,
        }
    }

    /// `self^k` by binary exponentiation; `k = 0` gives `1 mod n`.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one(self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for GaussianResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i (mod {})", self.re, self.im, self.modulus)
    }
}

pub fn gauss_mul(x: &GaussianResidue, y: &GaussianResidue) -> Result<GaussianResidue> {
    x.mul(y)
}

pub fn gauss_pow(x: &GaussianResidue, k: u64) -> GaussianResidue {
    x.pow(k)
}

/// Exact Gaussian integer with arbitrary-precision parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactGaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl ExactGaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Canonical residue modulo `n`.
    pub fn reduce(&self, n: u64) -> GaussianResidue {
        let m = BigInt::from(n);
        let part = |x: &BigInt| -> i128 {
            let r = ((x % &m) + &m) % &m;
            i128::try_from(r).expect("residue below modulus fits")
        };
        GaussianResidue::new(part(&self.re), part(&self.im), n)
    }
}

impl fmt::Display for ExactGaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.sign() == num_bigint::Sign::Minus {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a ExactGaussianInt> for &'a ExactGaussianInt {
    type Output = ExactGaussianInt;
    fn add(self, rhs: Self) -> ExactGaussianInt {
        ExactGaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a ExactGaussianInt> for &'a ExactGaussianInt {
    type Output = ExactGaussianInt;
    fn sub(self, rhs: Self) -> ExactGaussianInt {
        ExactGaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a ExactGaussianInt> for &'a ExactGaussianInt {
    type Output = ExactGaussianInt;
    fn mul(self, rhs: Self) -> ExactGaussianInt {
        ExactGaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for ExactGaussianInt {
    type Output = ExactGaussianInt;
    fn neg(self) -> ExactGaussianInt {
        ExactGaussianInt {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl AddAssign<&ExactGaussianInt> for ExactGaussianInt {
    fn add_assign(&mut self, rhs: &ExactGaussianInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

fn sigma_over(k: u64, n: u64, range: impl Iterator<Item = u64> + Clone) -> GaussianResidue {
    let mut re: u128 = 0;
    let mut im: u128 = 0;
    let m = n as u128;
    for a in range.clone() {
        for b in range.clone() {
            let z = GaussianResidue::new(a as i128, b as i128, n).pow(k);
            re = (re + z.re as u128) % m;
            im = (im + z.im as u128) % m;
        }
    }
    GaussianResidue::new(re as i128, im as i128, n)
}

/// `Σ_{1≤a,b≤n} (a+bi)^k mod n`, summed literally. Cost `O(n² log k)`.
pub fn sigma_bruteforce(k: u64, n: u64) -> Result<GaussianResidue> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if n == 0 {
        return Err(Error::OutOfRange {
            value: n,
            reason: "n must be at least 1",
        });
    }
    Ok(sigma_over(k, n, 1..=n))
}

/// Same double sum taken over the residue system `0 ≤ a, b < n`.
pub fn sigma_bruteforce_from_zero(k: u64, n: u64) -> Result<GaussianResidue> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if n == 0 {
        return Err(Error::OutOfRange {
            value: n,
            reason: "n must be at least 1",
        });
    }
    Ok(sigma_over(k, n, 0..n))
}

/// Exact `Σ_{1≤a,b≤m} (a+bi)^k` with no reduction.
pub fn sigma_exact(k: u64, m: u64) -> ExactGaussianInt {
    let mut acc = ExactGaussianInt::zero();
    for a in 1..=m {
        for b in 1..=m {
            acc += &ExactGaussianInt::new(a, b).pow(k);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i128, im: i128, n: u64) -> GaussianResidue {
        GaussianResidue::new(re, im, n)
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(gauss_mul(&g(1, 1, 5), &g(1, 1, 5)).unwrap(), g(0, 2, 5));
        let x = g(3, 4, 11);
        assert_eq!(gauss_mul(&x, &g(1, 0, 11)).unwrap(), x);
        assert_eq!(gauss_mul(&g(2, 3, 7), &g(4, 1, 7)).unwrap(), g(5, 0, 7));
        assert_eq!(
            gauss_mul(&g(1, 1, 5), &g(1, 1, 6)),
            Err(Error::ModulusMismatch { left: 5, right: 6 })
        );
    }

    #[test]
    fn power_examples() {
        assert_eq!(gauss_pow(&g(1, 1, 4), 2), g(0, 2, 4));
        let x = g(5, 9, 17);
        assert_eq!(gauss_pow(&x, 1), x);
        assert_eq!(gauss_pow(&x, 0), g(1, 0, 17));
        let mut naive = g(1, 0, 13);
        for _ in 0..8 {
            naive = naive.mul(&g(1, 2, 13)).unwrap();
        }
        assert_eq!(gauss_pow(&g(1, 2, 13), 8), naive);
    }

    #[test]
    fn canonical_range() {
        let x = g(-1, -27, 5);
        assert_eq!((x.re(), x.im()), (4, 3));
        assert_eq!(g(7, 7, 1), GaussianResidue::zero(1));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(sigma_bruteforce(3, 2).unwrap(), g(1, 1, 2));
        assert_eq!(sigma_bruteforce(8, 3).unwrap(), g(2, 0, 3));
        for n in 1..=30 {
            assert!(sigma_bruteforce(1, n).unwrap().is_zero());
        }
        assert!(sigma_bruteforce(0, 3).is_err());
    }

    #[test]
    fn exact_examples() {
        assert_eq!(sigma_exact(2, 2), ExactGaussianInt::new(0, 18));
        assert_eq!(sigma_exact(1, 2), ExactGaussianInt::new(6, 6));
        assert!(sigma_exact(3, 3).reduce(3).is_zero());
        assert_eq!(sigma_exact(3, 3).reduce(3), sigma_bruteforce(3, 3).unwrap());
    }

    #[test]
    fn exact_reduces_to_brute_force() {
        for k in 1..=40 {
            for n in 1..=40 {
                assert_eq!(sigma_exact(k, n).reduce(n), sigma_bruteforce(k, n).unwrap(), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn residue_system_invariance() {
        for k in 1..=30 {
            for n in 1..=30 {
                assert_eq!(
                    sigma_bruteforce_from_zero(k, n).unwrap(),
                    sigma_bruteforce(k, n).unwrap(),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn exact_display() {
        assert_eq!(ExactGaussianInt::new(3, -4).to_string(), "3-4i");
        assert_eq!(ExactGaussianInt::new(0, 18).to_string(), "0+18i");
    }

    proptest! {
        #[test]
        fn pow_matches_repeated_multiplication(re in 0i128..1_000_000, im in 0i128..1_000_000, n in 1u64..1_000_000_007, k in 0u64..=64) {
            let x = g(re, im, n);
            let mut naive = GaussianResidue::one(n);
            for _ in 0..k {
                naive = naive.mul(&x).unwrap();
            }
            prop_assert_eq!(x.pow(k), naive);
        }

        #[test]
        fn exact_ring_laws(a in -10_000i64..10_000, b in -10_000i64..10_000, c in -10_000i64..10_000, d in -10_000i64..10_000) {
            let x = ExactGaussianInt::new(a, b);
            let y = ExactGaussianInt::new(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }
    }
}
