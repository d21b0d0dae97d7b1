//! Sums of powers over the Gaussian integers modulo `n`.
//!
//! For `σ_k(n) = Σ_{1≤a,b≤n} (a+bi)^k` this crate provides
//!
//! * a closed von Staudt–type formula for `σ_k(n) mod n`, together with the
//!   binomial-expansion route through classical power sums and a literal
//!   brute-force double sum, so every value can be checked three ways;
//! * the classical sums `S_k(n) mod n` and the lacunary binomial congruences
//!   the closed formula rests on;
//! * membership tests for the sets of `n` (resp. `k`) with `n | σ_k(n)`;
//! * exact asymptotic densities, including a pruned inclusion–exclusion over
//!   inert primes that brackets the density of `{n : n | σ_n(n)}`;
//! * an exact search for solutions of `σ_k(m−1) = (m+mi)^k`.
//!
//! All density values are exact rationals; a floating-point preview exists
//! but is never used to decide anything.

pub mod arith;
pub mod classical;
pub mod density;
pub mod em;
mod error;
pub mod gaussian;
pub mod lacunary;
pub mod sets;
pub mod staudt;

pub use arith::{
    decimal_render, factorize, mod_pow, rational_lcm_accumulate, sieve_inert_primes, Direction,
    ExactRational, Factorization, PrimeFamily,
};
pub use error::{Error, Result};
pub use gaussian::{ExactGaussianInt, GaussianResidue};
