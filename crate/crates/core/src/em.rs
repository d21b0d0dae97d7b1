//! Search for solutions of `σ_k(m − 1) = (m + mi)^k` in exact arithmetic,
//! the Gaussian analogue of the Erdős–Moser equation.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{sigma_exact, ExactGaussianInt};

/// Largest accepted bound on either search variable.
pub const EM_GUARD: u64 = 500;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmSolution {
    pub k: u64,
    pub m: u64,
    /// Common value of both sides.
    pub value: ExactGaussianInt,
}

/// `i^k · conj(z)`.
fn rotate_conj(z: &ExactGaussianInt, k: u64) -> ExactGaussianInt {
    let (re, im) = (z.re.clone(), -z.im.clone());
    match k % 4 {
        0 => ExactGaussianInt { re, im },
        1 => ExactGaussianInt { re: -im, im: re },
        2 => ExactGaussianInt { re: -re, im: -im },
        _ => ExactGaussianInt { re: im, im: -re },
    }
}

/// `σ_k(M) − σ_k(M − 1)`: the terms with `max(a, b) = M`. Uses
/// `(a + Mi)^k = i^k · conj((M + ai)^k)` so each power is computed once.
fn border(k: u64, big_m: u64) -> ExactGaussianInt {
    let mut right = ExactGaussianInt::zero();
    let mut top = ExactGaussianInt::zero();
    for a in 1..=big_m {
        let z = ExactGaussianInt::new(big_m, a).pow(k);
        if a < big_m {
            top += &z;
        }
        right += &z;
    }
    &right + &rotate_conj(&top, k)
}

/// `[σ_k(0), σ_k(1), …, σ_k(upto)]` built by adding one border at a time.
pub fn incremental_sigmas(k: u64, upto: u64) -> Vec<ExactGaussianInt> {
    let mut out = Vec::with_capacity(upto as usize + 1);
    let mut acc = ExactGaussianInt::zero();
    out.push(acc.clone());
    for big_m in 1..=upto {
        acc += &border(k, big_m);
        out.push(acc.clone());
    }
    out
}

/// `ln x` for positive `x`, accurate to about `1e-15` relative.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Whether the norms of the two sides are close enough that exact equality
/// is possible. Only rejects when `ln N(lhs)` and `ln N(rhs)` differ by far
/// more than the floating-point error, so no true solution is dropped.
pub fn norms_plausible(lhs: &ExactGaussianInt, rhs: &ExactGaussianInt) -> bool {
    let (a, b) = (lhs.norm(), rhs.norm());
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    (ln_big(&a) - ln_big(&b)).abs() < 1e-6
}

/// Norm test for a single `(k, m)`, computing `σ_k(m − 1)` from scratch.
pub fn em_norm_prefilter(k: u64, m: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if m < 2 {
        return Err(Error::OutOfRange {
            value: m,
            reason: "m must be at least 2",
        });
    }
    let lhs = sigma_exact(k, m - 1);
    let rhs = ExactGaussianInt::new(m, m).pow(k);
    Ok(norms_plausible(&lhs, &rhs))
}

fn solutions_for_k(k: u64, m_max: u64) -> Vec<EmSolution> {
    let mut found = Vec::new();
    let mut lhs = ExactGaussianInt::zero();
    let one_plus_i_k = ExactGaussianInt::new(1, 1).pow(k);
    for m in 2..m_max {
        lhs += &border(k, m - 1);
        let scale = BigInt::from(m).pow(k as u32);
        let rhs = ExactGaussianInt {
            re: &one_plus_i_k.re * &scale,
            im: &one_plus_i_k.im * &scale,
        };
        if norms_plausible(&lhs, &rhs) && lhs == rhs {
            found.push(EmSolution { k, m, value: rhs });
        }
    }
    found
}

/// All `(k, m)` with `1 ≤ k < k_max` and `2 ≤ m < m_max` solving the
/// equation, sorted by `(k, m)`. Exponents are searched in parallel.
pub fn em_search(k_max: u64, m_max: u64) -> Result<Vec<EmSolution>> {
    if k_max > EM_GUARD || m_max > EM_GUARD {
        return Err(Error::GuardExceeded {
            k_max,
            m_max,
            guard: EM_GUARD,
        });
    }
    let mut out: Vec<EmSolution> = (1..k_max.max(1))
        .into_par_iter()
        .flat_map_iter(|k| solutions_for_k(k, m_max))
        .collect();
    out.sort_by_key(|s| (s.k, s.m));
    Ok(out)
}

/// Checks a reported solution directly from the definition.
pub fn verify_solution(sol: &EmSolution) -> bool {
    let lhs = sigma_exact(sol.k, sol.m - 1);
    let rhs = ExactGaussianInt::new(sol.m, sol.m).pow(sol.k);
    lhs == rhs && lhs == sol.value
}
