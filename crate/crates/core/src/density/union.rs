//! Density of `∪_{q∈P} U_q` by inclusion–exclusion over compatible subsets.
//!
//! With `D = lcm{q⁴ − q² : q ∈ P}` the exact value is `N / D` where
//! `N = Σ_S (−1)^{|S|+1} φ(S)·D/lcm(S)`, summed over subsets without an
//! incompatible pair (those are cut from the search tree outright). `N` is
//! accumulated modulo several primes just below `2^62` and recovered by CRT.
//! Moving from a subset to a superset multiplies `φ(S)·D/lcm(S)` by a factor
//! that depends only on the new prime and the current exponents of its own
//! prime factors in the lcm, so each step is a table lookup and one modular
//! multiplication per modulus.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::incompatible;
use crate::arith::{factorize, is_prime, mod_inverse, mod_pow, ExactRational, PrimeFamily};
use crate::error::{Error, Result};

/// Largest family accepted by [`density_union`].
pub const MAX_FAMILY: usize = 34;
/// Largest prime accepted, so that `q⁴ − q²` stays below `2^63`.
pub const MAX_UNION_PRIME: u64 = 55_108;

const MAX_MODULI: usize = 40;
const MAX_FACTORS: usize = 16;

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Result of the exact enumeration.
#[derive(Debug, Clone)]
pub struct UnionReport {
    pub value: ExactRational,
    /// Non-empty compatible subsets visited.
    pub subsets: u64,
    pub moduli: usize,
    pub denominator_bits: u64,
}

struct Step {
    /// `(slot, a, stride)` for each prime `r` with `r^a ∥ q⁴ − q²`.
    factors: Vec<(usize, u8, usize)>,
    combos: usize,
}

impl Step {
    fn combo(&self, exps: &[u8]) -> usize {
        self.factors
            .iter()
            .map(|&(slot, a, stride)| exps[slot].min(a) as usize * stride)
            .sum()
    }

    /// Exponent drop `a − min(e, a)` per factor for a combo index.
    fn deficits(&self, combo: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.factors.iter().map(move |&(slot, a, stride)| {
            let held = (combo / stride) % (a as usize + 1);
            (slot, (a as usize - held) as u32)
        })
    }
}

struct Plan {
    primes: Vec<u64>,
    steps: Vec<Step>,
    radicals: Vec<u64>,
    incompat: Vec<u64>,
    denominator: BigUint,
}

impl Plan {
    fn new(family: &PrimeFamily) -> Result<Self> {
        let primes = family.primes().to_vec();
        if primes.len() > MAX_FAMILY {
            return Err(Error::SizeCap {
                size: primes.len(),
                cap: MAX_FAMILY,
            });
        }
        if let Some(&q) = primes.iter().find(|&&q| q > MAX_UNION_PRIME) {
            return Err(Error::OutOfRange {
                value: q,
                reason: "prime too large for the union enumeration",
            });
        }
        let mut radicals: Vec<u64> = Vec::new();
        let mut max_exp: Vec<u8> = Vec::new();
        let mut steps = Vec::with_capacity(primes.len());
        for &q in &primes {
            let f = factorize(q * q * q * q - q * q)?;
            let mut factors = Vec::new();
            let mut stride = 1usize;
            for &(r, a) in f.pairs() {
                let slot = match radicals.iter().position(|&x| x == r) {
                    Some(s) => s,
                    None => {
                        radicals.push(r);
                        max_exp.push(0);
                        radicals.len() - 1
                    }
                };
                let a = a as u8;
                max_exp[slot] = max_exp[slot].max(a);
                factors.push((slot, a, stride));
                stride *= a as usize + 1;
            }
            assert!(factors.len() <= MAX_FACTORS);
            steps.push(Step { factors, combos: stride });
        }
        let denominator = radicals
            .iter()
            .zip(&max_exp)
            .fold(BigUint::from(1u32), |acc, (&r, &e)| acc * BigUint::from(r).pow(e as u32));
        let incompat = (0..primes.len())
            .map(|i| {
                (0..primes.len())
                    .filter(|&j| j != i && incompatible(primes[i], primes[j]))
                    .fold(0u64, |m, j| m | 1 << j)
            })
            .collect();
        Ok(Self {
            primes,
            steps,
            radicals,
            incompat,
            denominator,
        })
    }

    fn len(&self) -> usize {
        self.primes.len()
    }
}

/// Arithmetic carried along the search tree.
trait Lanes: Sync {
    type Value: Copy + Send;
    type Acc: Send;
    fn start(&self) -> Self::Value;
    fn step(&self, v: &Self::Value, prime: usize, combo: usize) -> Self::Value;
    fn zero(&self) -> Self::Acc;
    fn add(&self, acc: &mut Self::Acc, v: &Self::Value, positive: bool);
    fn merge(&self, a: Self::Acc, b: Self::Acc) -> Self::Acc;
}

/// `a·w mod p` with `w' = ⌊w·2^64/p⌋` precomputed (Shoup).
#[inline(always)]
fn shoup_mul(a: u64, w: u64, w_pre: u64, p: u64) -> u64 {
    let q = ((a as u128 * w_pre as u128) >> 64) as u64;
    let r = a.wrapping_mul(w).wrapping_sub(q.wrapping_mul(p));
    if r >= p {
        r - p
    } else {
        r
    }
}

struct ModLanes<const K: usize> {
    moduli: [u64; K],
    start: [u64; K],
    /// Per prime: `combos × K` pairs `(w, w')`.
    tables: Vec<Vec<(u64, u64)>>,
}

impl<const K: usize> ModLanes<K> {
    fn new(plan: &Plan, moduli: &[u64]) -> Self {
        let moduli: [u64; K] = moduli[..K].try_into().expect("enough moduli");
        let start = moduli.map(|p| (&plan.denominator % p).to_u64().expect("reduced"));
        let inverses: Vec<[u64; K]> = plan
            .radicals
            .iter()
            .map(|&r| moduli.map(|p| mod_inverse(r % p, p).expect("moduli exceed every radical")))
            .collect();
        let tables = plan
            .primes
            .iter()
            .zip(&plan.steps)
            .map(|(&q, step)| {
                let mut t = Vec::with_capacity(step.combos * K);
                for combo in 0..step.combos {
                    for (j, &p) in moduli.iter().enumerate() {
                        let w = step.deficits(combo).fold((q - 1) % p, |acc, (slot, d)| {
                            let f = mod_pow(inverses[slot][j], d as u64, p);
                            ((acc as u128 * f as u128) % p as u128) as u64
                        });
                        let w_pre = (((w as u128) << 64) / p as u128) as u64;
                        t.push((w, w_pre));
                    }
                }
                t
            })
            .collect();
        Self { moduli, start, tables }
    }
}

impl<const K: usize> Lanes for ModLanes<K> {
    type Value = [u64; K];
    type Acc = [u64; K];

    fn start(&self) -> [u64; K] {
        self.start
    }

    #[inline(always)]
    fn step(&self, v: &[u64; K], prime: usize, combo: usize) -> [u64; K] {
        let row = &self.tables[prime][combo * K..combo * K + K];
        let mut out = [0u64; K];
        for j in 0..K {
            out[j] = shoup_mul(v[j], row[j].0, row[j].1, self.moduli[j]);
        }
        out
    }

    fn zero(&self) -> [u64; K] {
        [0; K]
    }

    #[inline(always)]
    fn add(&self, acc: &mut [u64; K], v: &[u64; K], positive: bool) {
        for j in 0..K {
            let p = self.moduli[j];
            let x = if positive { v[j] } else { (p - v[j]) % p };
            let s = acc[j] + x;
            acc[j] = if s >= p { s - p } else { s };
        }
    }

    fn merge(&self, mut a: [u64; K], b: [u64; K]) -> [u64; K] {
        self.add(&mut a, &b, true);
        a
    }
}

/// Plain `f64` lanes for the quick preview.
struct FloatLanes {
    tables: Vec<Vec<f64>>,
}

impl FloatLanes {
    fn new(plan: &Plan) -> Self {
        let tables = plan
            .primes
            .iter()
            .zip(&plan.steps)
            .map(|(&q, step)| {
                (0..step.combos)
                    .map(|combo| {
                        step.deficits(combo).fold((q - 1) as f64, |acc, (slot, d)| {
                            acc / (plan.radicals[slot] as f64).powi(d as i32)
                        })
                    })
                    .collect()
            })
            .collect();
        Self { tables }
    }
}

impl Lanes for FloatLanes {
    type Value = f64;
    type Acc = f64;

    fn start(&self) -> f64 {
        1.0
    }

    fn step(&self, v: &f64, prime: usize, combo: usize) -> f64 {
        v * self.tables[prime][combo]
    }

    fn zero(&self) -> f64 {
        0.0
    }

    fn add(&self, acc: &mut f64, v: &f64, positive: bool) {
        if positive {
            *acc += v
        } else {
            *acc -= v
        }
    }

    fn merge(&self, a: f64, b: f64) -> f64 {
        a + b
    }
}

struct Walk<'a, L: Lanes> {
    plan: &'a Plan,
    lanes: &'a L,
    acc: L::Acc,
    visited: u64,
}

impl<L: Lanes> Walk<'_, L> {
    /// Adds every compatible extension of the current subset by primes with
    /// index `≥ from`.
    fn descend(&mut self, from: usize, forbidden: u64, size: usize, value: &L::Value, exps: &mut [u8]) {
        let n = self.plan.len();
        for i in from..n {
            if forbidden >> i & 1 == 1 {
                continue;
            }
            let step = &self.plan.steps[i];
            let next = self.lanes.step(value, i, step.combo(exps));
            self.lanes.add(&mut self.acc, &next, size % 2 == 0);
            self.visited += 1;
            if i + 1 < n {
                let mut saved = [0u8; MAX_FACTORS];
                for (k, &(slot, a, _)) in step.factors.iter().enumerate() {
                    saved[k] = exps[slot];
                    exps[slot] = exps[slot].max(a);
                }
                self.descend(i + 1, forbidden | self.plan.incompat[i], size + 1, &next, exps);
                for (k, &(slot, _, _)) in step.factors.iter().enumerate() {
                    exps[slot] = saved[k];
                }
            }
        }
    }
}

/// Runs the whole enumeration, splitting on membership of the first few
/// primes when more than one worker is requested.
fn enumerate<L: Lanes>(plan: &Plan, lanes: &L, workers: usize) -> Result<(L::Acc, u64)> {
    let n = plan.len();
    let split = if workers <= 1 {
        0
    } else {
        let bits = usize::BITS - (workers - 1).leading_zeros();
        n.min(bits as usize + 3)
    };
    let prefixes: Vec<u64> = (0..1u64 << split)
        .filter(|&mask| (0..split).all(|i| mask >> i & 1 == 0 || plan.incompat[i] & mask == 0))
        .collect();

    let run = |mask: u64| {
        let mut exps = vec![0u8; plan.radicals.len()];
        let mut value = lanes.start();
        let mut forbidden = 0u64;
        let mut size = 0;
        for i in (0..split).filter(|&i| mask >> i & 1 == 1) {
            let step = &plan.steps[i];
            value = lanes.step(&value, i, step.combo(&exps));
            for &(slot, a, _) in &step.factors {
                exps[slot] = exps[slot].max(a);
            }
            forbidden |= plan.incompat[i];
            size += 1;
        }
        let mut walk = Walk {
            plan,
            lanes,
            acc: lanes.zero(),
            visited: 0,
        };
        if size > 0 {
            lanes.add(&mut walk.acc, &value, size % 2 == 1);
            walk.visited += 1;
        }
        walk.descend(split, forbidden, size, &value, &mut exps);
        (walk.acc, walk.visited)
    };

    if workers <= 1 {
        return Ok(run(0));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        prefixes
            .par_iter()
            .map(|&mask| run(mask))
            .reduce(|| (lanes.zero(), 0), |(a, x), (b, y)| (lanes.merge(a, b), x + y))
    }))
}

/// Primes descending from `2^62`.
fn moduli() -> &'static [u64] {
    static MODULI: OnceLock<Vec<u64>> = OnceLock::new();
    MODULI.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_MODULI);
        let mut c = (1u64 << 62) - 1;
        while out.len() < MAX_MODULI {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

/// Symmetric CRT lift of the residues.
fn reconstruct(residues: &[u64], moduli: &[u64]) -> BigInt {
    let m: BigUint = moduli.iter().map(|&p| BigUint::from(p)).product();
    let mut x = BigUint::zero();
    for (&r, &p) in residues.iter().zip(moduli) {
        let rest = &m / p;
        let inv = mod_inverse((&rest % p).to_u64().expect("reduced"), p).expect("coprime moduli");
        x += rest * ((r as u128 * inv as u128 % p as u128) as u64);
    }
    x %= &m;
    let half = &m >> 1;
    if x > half {
        BigInt::from(x) - BigInt::from(m)
    } else {
        BigInt::from(x)
    }
}

fn run_exact<const K: usize>(plan: &Plan, workers: usize) -> Result<(BigInt, u64)> {
    let lanes = ModLanes::<K>::new(plan, moduli());
    let (acc, visited) = enumerate(plan, &lanes, workers)?;
    Ok((reconstruct(&acc, &lanes.moduli), visited))
}

/// Exact density of the union with the given number of worker threads.
pub fn density_union_report(family: &PrimeFamily, workers: usize) -> Result<UnionReport> {
    let plan = Plan::new(family)?;
    let denominator_bits = plan.denominator.bits();
    if plan.len() == 0 {
        return Ok(UnionReport {
            value: BigRational::zero(),
            subsets: 0,
            moduli: 0,
            denominator_bits,
        });
    }
    // |N| < D·2^|P|; the symmetric lift needs a modulus product above 2|N|.
    let needed = denominator_bits + plan.len() as u64 + 2;
    let available = moduli();
    let mut product_bits = 0u64;
    let mut k = 0;
    while product_bits <= needed {
        product_bits += 61; // each modulus exceeds 2^61
        k += 1;
    }
    let (numer, subsets, used) = match k {
        0..=4 => with_count(run_exact::<4>(&plan, workers)?, 4),
        5..=8 => with_count(run_exact::<8>(&plan, workers)?, 8),
        9..=16 => with_count(run_exact::<16>(&plan, workers)?, 16),
        17..=24 => with_count(run_exact::<24>(&plan, workers)?, 24),
        _ if k <= available.len() => with_count(run_exact::<MAX_MODULI>(&plan, workers)?, MAX_MODULI),
        _ => {
            return Err(Error::InvalidInput(format!(
                "common denominator of {denominator_bits} bits exceeds the modular capacity"
            )))
        }
    };
    Ok(UnionReport {
        value: BigRational::new(numer, plan.denominator.into()),
        subsets,
        moduli: used,
        denominator_bits,
    })
}

fn with_count((n, s): (BigInt, u64), k: usize) -> (BigInt, u64, usize) {
    (n, s, k)
}

/// `δ(∪_{q∈P} U_q)` exactly.
pub fn density_union(family: &PrimeFamily) -> Result<ExactRational> {
    Ok(density_union_report(family, default_workers())?.value)
}

/// Same enumeration in `f64`, without error tracking.
pub fn density_union_preview(family: &PrimeFamily, workers: usize) -> Result<f64> {
    let plan = Plan::new(family)?;
    if plan.len() == 0 {
        return Ok(0.0);
    }
    let lanes = FloatLanes::new(&plan);
    Ok(enumerate(&plan, &lanes, workers)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, sieve_inert_primes};
    use crate::density::SubsetTerm;
    use proptest::prelude::*;

    /// Sums every subset term directly, incompatible ones included.
    fn naive_union(primes: &[u64]) -> ExactRational {
        let mut total = BigRational::zero();
        for mask in 1u64..1 << primes.len() {
            let subset: Vec<u64> = (0..primes.len()).filter(|&i| mask >> i & 1 == 1).map(|i| primes[i]).collect();
            let term = SubsetTerm::new(&subset);
            let d = term.density();
            if term.sign > 0 {
                total += d;
            } else {
                total -= d;
            }
        }
        total
    }

    fn family(v: &[u64]) -> PrimeFamily {
        PrimeFamily::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(density_union(&family(&[3])).unwrap(), ratio(1, 36));
        assert_eq!(density_union(&family(&[3, 7])).unwrap(), ratio(101, 3528));
        assert_eq!(density_union(&family(&[3, 19])).unwrap(), ratio(1, 36) + ratio(1, 19 * 19 * 20));
        assert!(density_union(&family(&[])).unwrap().is_zero());
    }

    #[test]
    fn matches_naive_on_prefixes() {
        let all = sieve_inert_primes(14);
        for len in 1..=14 {
            let fam = all.prefix(len);
            assert_eq!(density_union_report(&fam, 1).unwrap().value, naive_union(fam.primes()), "len={len}");
        }
    }

    #[test]
    fn subset_count_skips_incompatible_pairs() {
        let fam = sieve_inert_primes(8); // 3 7 11 19 23 31 43 47; only (3, 19) clashes
        let report = density_union_report(&fam, 1).unwrap();
        assert_eq!(report.subsets, (1 << 8) - 1 - (1 << 6));
    }

    #[test]
    fn worker_split_does_not_change_result() {
        let fam = sieve_inert_primes(16);
        let one = density_union_report(&fam, 1).unwrap().value;
        for w in [2, 3, 8] {
            assert_eq!(density_union_report(&fam, w).unwrap().value, one, "workers={w}");
        }
    }

    #[test]
    fn preview_tracks_exact() {
        let fam = sieve_inert_primes(12);
        let exact = density_union(&fam).unwrap().to_f64().unwrap();
        let preview = density_union_preview(&fam, 1).unwrap();
        assert!((exact - preview).abs() < 1e-12, "{exact} vs {preview}");
    }

    #[test]
    fn rejects_oversized_input() {
        assert!(matches!(density_union(&sieve_inert_primes(35)), Err(Error::SizeCap { .. })));
        assert!(density_union(&family(&[55_127])).is_err());
    }

    fn arb_family() -> impl Strategy<Value = Vec<u64>> {
        let pool: Vec<u64> = sieve_inert_primes(40).primes().to_vec();
        proptest::sample::subsequence(pool, 0..=7)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn union_matches_naive(primes in arb_family()) {
            let fam = family(&primes);
            prop_assert_eq!(density_union_report(&fam, 1).unwrap().value, naive_union(&primes));
        }

        #[test]
        fn union_bounds(primes in arb_family()) {
            let fam = family(&primes);
            let u = density_union_report(&fam, 1).unwrap().value;
            let singles: ExactRational = primes.iter().map(|&p| super::super::density_up(p).unwrap()).sum();
            let max_single = primes.iter().map(|&p| super::super::density_up(p).unwrap()).max().unwrap_or_else(BigRational::zero);
            prop_assert!(u <= singles);
            prop_assert!(u >= max_single);
        }

        #[test]
        fn union_monotone(primes in arb_family(), extra in 0usize..40) {
            let q = sieve_inert_primes(40).primes()[extra];
            let mut bigger = primes.clone();
            let fresh = !bigger.contains(&q);
            if fresh {
                bigger.push(q);
            }
            let small = density_union_report(&family(&primes), 1).unwrap().value;
            let large = density_union_report(&family(&bigger), 1).unwrap().value;
            // U_q always has elements outside the other sets, e.g. p·u_q for p ∥ u_q
            if fresh {
                prop_assert!(small < large);
            } else {
                prop_assert_eq!(small, large);
            }
        }
    }
}
