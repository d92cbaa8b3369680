//! Cycle types of permutations and derangements, and exact formulas over them.
//!
//! Every closed form here has a brute-force counterpart that walks the whole
//! symmetric group (`*_brute` functions and [`derangement_census`]); the
//! tests compare the two routes with exact rational arithmetic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm;

/// A partition of `m` stored as multiplicities: `counts[i]` parts of size `i`.
///
/// `counts[0]` is always 0 and trailing zeros are trimmed, so equal
/// partitions compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    counts: Vec<u32>,
}

impl Partition {
    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        let mut counts = Vec::new();
        for &p in parts {
            if p == 0 {
                return Err(Error::Invalid("partition parts must be positive".into()));
            }
            if counts.len() <= p {
                counts.resize(p + 1, 0);
            }
            counts[p] += 1;
        }
        Ok(Self { counts })
    }

    /// Multiplicities keyed by part size.
    pub fn from_multiplicities(mults: &[(usize, u32)]) -> Result<Self> {
        let mut counts = Vec::new();
        for &(p, k) in mults {
            if p == 0 {
                return Err(Error::Invalid("partition parts must be positive".into()));
            }
            if counts.len() <= p {
                counts.resize(p + 1, 0);
            }
            counts[p] += k;
        }
        let mut out = Self { counts };
        out.trim();
        Ok(out)
    }

    fn trim(&mut self) {
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
    }

    /// The partitioned integer.
    pub fn m(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &k)| i * k as usize)
            .sum()
    }

    pub fn multiplicity(&self, part: usize) -> u32 {
        self.counts.get(part).copied().unwrap_or(0)
    }

    pub fn part_count(&self) -> usize {
        self.counts.iter().map(|&k| k as usize).sum()
    }

    /// Parts in decreasing order.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.part_count());
        for (i, &k) in self.counts.iter().enumerate().rev() {
            out.extend(core::iter::repeat_n(i, k as usize));
        }
        out
    }

    /// `(part, multiplicity)` for nonzero multiplicities, ascending.
    pub fn multiplicities(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| (i, k))
    }

    /// Member of `P(m)`: no part of size 1.
    pub fn is_derangement_type(&self) -> bool {
        self.multiplicity(1) == 0
    }

    pub fn all_parts_even(&self) -> bool {
        self.multiplicities().all(|(i, _)| i % 2 == 0)
    }

    pub fn odd_part_count(&self) -> usize {
        self.multiplicities()
            .filter(|(i, _)| i % 2 == 1)
            .map(|(_, k)| k as usize)
            .sum()
    }

    /// Cycle type of a permutation given by its images.
    pub fn cycle_type(images: &[u8]) -> Self {
        let mut p =
            Self::from_parts(&perm::cycle_lengths(images)).expect("cycle lengths are positive");
        p.trim();
        p
    }

    fn with_adjusted(&self, part: usize, delta: i64) -> Self {
        let mut counts = self.counts.clone();
        if counts.len() <= part {
            counts.resize(part + 1, 0);
        }
        counts[part] = (counts[part] as i64 + delta) as u32;
        let mut out = Self { counts };
        out.trim();
        out
    }
}

/// `2^a 3^b ...`, ascending, zero exponents omitted.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, mult)) in self.multiplicities().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}^{mult}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

/// Parses `2^a 3^b ...` in any order; a bare `i` means `i^1`.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |tok: &str| Error::Invalid(format!("bad partition term {tok:?}"));
        let mut mults = Vec::new();
        for tok in s.split_whitespace() {
            let (part, mult) = match tok.split_once('^') {
                Some((p, k)) => (p, k),
                None => (tok, "1"),
            };
            let part: usize = part.parse().map_err(|_| bad(tok))?;
            let mult: u32 = mult.parse().map_err(|_| bad(tok))?;
            mults.push((part, mult));
        }
        Self::from_multiplicities(&mults)
    }
}

/// Partitions of `m` into parts of size at least 2: largest part
/// decreasing, and within that the remaining parts chosen largest first.
pub fn partitions_p(m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    fn rec(rest: usize, max: usize, parts: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_parts(parts).unwrap());
            return;
        }
        for p in (2..=max.min(rest)).rev() {
            parts.push(p);
            rec(rest - p, p, parts, out);
            parts.pop();
        }
    }
    rec(m, m, &mut parts, &mut out);
    out
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of derangements of `m` with cycle type `λ`:
/// `m! / ∏ (λ_i! · i^λ_i)`.
pub fn gamma(lambda: &Partition) -> Result<BigUint> {
    if !lambda.is_derangement_type() {
        return Err(Error::Invalid(format!(
            "{lambda} has a part of size 1 and is not a derangement type"
        )));
    }
    let mut denom = BigUint::one();
    for (i, k) in lambda.multiplicities() {
        denom *= factorial(k as usize) * BigUint::from(i).pow(k);
    }
    Ok(factorial(lambda.m()) / denom)
}

/// `D_m` via `D_m = (m−1)(D_{m−1} + D_{m−2})`, `D_0 = 1`, `D_1 = 0`.
pub fn derangements(m: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::zero());
    if m == 0 {
        return a;
    }
    for k in 2..=m {
        let next = BigUint::from(k - 1) * (&a + &b);
        a = b;
        b = next;
    }
    b
}

/// Largest order for the factorial brute-force censuses.
pub const BRUTE_FORCE_MAX: usize = 10;

fn check_brute(m: usize, limit: usize, what: &'static str) -> Result<()> {
    if m > limit {
        Err(Error::SizeGuard { n: m, limit, what })
    } else {
        Ok(())
    }
}

/// Walks all of `S_m` and bins the derangements by cycle type.
pub fn derangement_census(m: usize) -> Result<BTreeMap<Partition, u64>> {
    check_brute(m, 9, "the derangement census")?;
    let mut out = BTreeMap::new();
    perm::all_permutations(m).for_each_slice(|p| {
        if p.iter().enumerate().all(|(i, &v)| i != v as usize) {
            *out.entry(Partition::cycle_type(p)).or_insert(0) += 1;
        }
    });
    Ok(out)
}

/// Base of the logarithm in `n − log n`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum LogBase {
    E,
    Two,
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => libm::log(x),
            LogBase::Two => libm::log2(x),
            LogBase::Ten => libm::log10(x),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "ln" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(Error::Invalid(format!("unknown log base {other:?}"))),
        }
    }
}

/// `⌈n − log n⌉`: the smallest length counted as a long cycle.
pub fn long_cycle_threshold(n: usize, base: LogBase) -> usize {
    let t = n as f64 - base.log(n as f64);
    libm::ceil(t).max(0.0) as usize
}

/// Probability that a uniform permutation of `n` has a cycle of length at
/// least `n − ln n`: `Σ_{i=⌈n−ln n⌉}^{n} 1/i`.
pub fn long_cycle_prob(n: usize) -> Result<BigRational> {
    long_cycle_prob_with_base(n, LogBase::E)
}

pub fn long_cycle_prob_with_base(n: usize, base: LogBase) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Invalid("order must be positive".into()));
    }
    let lo = long_cycle_threshold(n, base).max(1);
    // With 2·lo > n at most one cycle can be that long, so the events for
    // different lengths are disjoint and their probabilities add.
    if 2 * lo <= n {
        return Err(Error::Invalid(format!(
            "threshold {lo} is not above n/2 for n = {n}; two long cycles could coexist and the sum over lengths no longer counts permutations"
        )));
    }
    Ok((lo..=n).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::one(), BigInt::from(i))
    }))
}

fn fraction(count: u64, total: u64) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(total))
}

/// Fraction of `S_n` with a cycle of length at least `⌈n − log n⌉`, by
/// walking all permutations.
pub fn long_cycle_prob_brute(n: usize, base: LogBase) -> Result<BigRational> {
    check_brute(n, BRUTE_FORCE_MAX, "the long-cycle census")?;
    let lo = long_cycle_threshold(n, base);
    let mut hits = 0u64;
    let mut total = 0u64;
    perm::all_permutations(n).for_each_slice(|p| {
        total += 1;
        if perm::cycle_lengths(p).iter().any(|&l| l >= lo) {
            hits += 1;
        }
    });
    Ok(fraction(hits, total))
}

/// Proportion of `S_n` with no odd cycle: `2^{−n}·n!/((n/2)!)²` for even
/// `n`, and 0 for odd `n` (cycle lengths summing to an odd number include an
/// odd one).
pub fn wilf_no_odd(n: usize) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let half = factorial(n / 2);
    let num = BigInt::from(factorial(n));
    let den = BigInt::from(&half * &half) << n;
    BigRational::new(num, den)
}

pub fn wilf_no_odd_brute(n: usize) -> Result<BigRational> {
    check_brute(n, BRUTE_FORCE_MAX, "the odd-cycle census")?;
    let mut hits = 0u64;
    let mut total = 0u64;
    perm::all_permutations(n).for_each_slice(|p| {
        total += 1;
        if perm::cycle_lengths(p).iter().all(|l| l % 2 == 0) {
            hits += 1;
        }
    });
    Ok(fraction(hits, total))
}

/// Histogram of the number of odd cycles over `S_m` or its derangements.
#[derive(Clone, PartialEq, Debug)]
pub struct OddCycleCensus {
    pub m: usize,
    pub derangements_only: bool,
    /// Number of odd cycles ↦ number of permutations.
    pub histogram: BTreeMap<usize, u64>,
    pub total: u64,
}

impl OddCycleCensus {
    /// Fraction with at most one odd cycle.
    pub fn at_most_one(&self) -> BigRational {
        let k: u64 = self.histogram.range(..=1).map(|(_, v)| v).sum();
        if self.total == 0 {
            BigRational::zero()
        } else {
            fraction(k, self.total)
        }
    }

    /// `m^{−1/2}·ln m`, the growth shape of the at-most-one bucket, for
    /// side-by-side comparison.
    pub fn bound_shape(&self) -> f64 {
        let m = self.m as f64;
        libm::log(m) / libm::sqrt(m)
    }
}

pub fn odd_cycle_census(m: usize, derangements_only: bool) -> Result<OddCycleCensus> {
    check_brute(m, 9, "the odd-cycle census")?;
    let mut histogram = BTreeMap::new();
    let mut total = 0u64;
    perm::all_permutations(m).for_each_slice(|p| {
        let lens = perm::cycle_lengths(p);
        if derangements_only && lens.contains(&1) {
            return;
        }
        total += 1;
        *histogram
            .entry(lens.iter().filter(|&&l| l % 2 == 1).count())
            .or_insert(0) += 1;
    });
    Ok(OddCycleCensus {
        m,
        derangements_only,
        histogram,
        total,
    })
}

/// Splitting one part `z` of `λ` into odd parts `a < b = z − a`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Split {
    pub a: usize,
    pub b: usize,
    pub mu: Partition,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitSet {
    pub splits: Vec<Split>,
    /// The split `(1, z − 1)` was dropped: its result has a part of size 1.
    pub excluded_part_one: bool,
    /// The equal split `(z/2, z/2)` was dropped (`z/2` odd and `≥ 3`).
    pub excluded_equal: bool,
}

/// `⌊(z − 3)/4⌋`: the number of odd `a` with `3 ≤ a < z − a`.
pub fn split_count(z: usize) -> usize {
    z.saturating_sub(3) / 4
}

fn check_split_input(lambda: &Partition, z: usize) -> Result<()> {
    if !lambda.is_derangement_type() {
        return Err(Error::Invalid(format!("{lambda} has a part of size 1")));
    }
    if !lambda.all_parts_even() {
        return Err(Error::Invalid(format!("{lambda} has an odd part")));
    }
    if z % 2 == 1 || lambda.multiplicity(z) == 0 {
        return Err(Error::Invalid(format!(
            "{lambda} has no (even) part of size {z}"
        )));
    }
    Ok(())
}

/// All ways of splitting one part of size `z` of an all-even `λ` into two
/// odd parts `3 ≤ a < z − a`. With `include_equal`, the split `a = z − a`
/// is kept as well.
pub fn split_set(lambda: &Partition, z: usize, include_equal: bool) -> Result<SplitSet> {
    check_split_input(lambda, z)?;
    let mut out = SplitSet {
        splits: Vec::new(),
        excluded_part_one: false,
        excluded_equal: false,
    };
    for a in (1..=z / 2).step_by(2) {
        let b = z - a;
        if a == 1 {
            out.excluded_part_one = true;
            continue;
        }
        if a == b && !include_equal {
            out.excluded_equal = true;
            continue;
        }
        let mu = lambda
            .with_adjusted(z, -1)
            .with_adjusted(a, 1)
            .with_adjusted(b, 1);
        out.splits.push(Split { a, b, mu });
    }
    Ok(out)
}

/// `γ(μ)/γ(λ) = z·λ_z / (a(z − a))` for `μ` splitting a part `z` of `λ` into
/// odd `a < z − a`.
pub fn gamma_ratio(lambda: &Partition, z: usize, a: usize) -> Result<BigRational> {
    check_split_input(lambda, z)?;
    if a.is_multiple_of(2) || a < 3 || 2 * a >= z {
        return Err(Error::Invalid(format!(
            "split ({a}, {}) of {z} needs odd 3 <= a < z - a",
            z.wrapping_sub(a)
        )));
    }
    let lz = lambda.multiplicity(z) as u64;
    Ok(BigRational::new(
        BigInt::from(z as u64 * lz),
        BigInt::from((a * (z - a)) as u64),
    ))
}

/// `γ(μ)/γ(λ) = z·λ_z / (2a²)` for the equal split `a = z/2`, where `μ`
/// gains two parts of size `a`. Not part of the bound checks.
pub fn gamma_ratio_equal_split(lambda: &Partition, z: usize) -> Result<BigRational> {
    check_split_input(lambda, z)?;
    let a = z / 2;
    if a.is_multiple_of(2) || a < 3 {
        return Err(Error::Invalid(format!(
            "equal split of {z} is not into odd parts >= 3"
        )));
    }
    let lz = lambda.multiplicity(z) as u64;
    Ok(BigRational::new(
        BigInt::from(z as u64 * lz),
        BigInt::from(2 * (a * a) as u64),
    ))
}

/// `Σ_{a=1}^{w} 1/((2a+1)(z−2a−1))` exactly, `w = ⌊(z−3)/4⌋`.
pub fn split_sum_exact(z: usize) -> BigRational {
    (1..=split_count(z)).fold(BigRational::zero(), |acc, a| {
        let d = ((2 * a + 1) * (z - 2 * a - 1)) as u64;
        acc + BigRational::new(BigInt::one(), BigInt::from(d))
    })
}

/// Fractional bits of the fixed-point comparison in [`split_bound`].
pub const SPLIT_BOUND_BITS: u32 = 160;
/// Slack allowed in the comparison.
pub const SPLIT_BOUND_SLACK: f64 = 1e-12;

/// The sum over odd splits against its logarithmic lower bound.
#[derive(Clone, PartialEq, Debug)]
pub struct SplitBound {
    pub z: usize,
    pub w: usize,
    /// The sum, rounded down at [`SPLIT_BOUND_BITS`] bits.
    pub sum: f64,
    /// `(1/2z)·ln((2w+1)(z−3) / (3(z−2w−1)))`, rounded up.
    pub bound: f64,
    /// `sum − bound`, computed before rounding to `f64`.
    pub margin: f64,
    pub holds: bool,
}

/// Compares `Σ_{a=1}^{w} 1/((2a+1)(z−2a−1))` with
/// `(1/2z)·ln((2w+1)(z−3)/(3(z−2w−1)))` in fixed point.
///
/// The sum is rounded down term by term and the bound is rounded up with an
/// explicit error allowance, so `holds` is a rigorous verdict up to
/// [`SPLIT_BOUND_SLACK`].
pub fn split_bound(z: usize) -> Result<SplitBound> {
    if z % 2 == 1 || z < 10 {
        return Err(Error::Invalid(format!(
            "split bound needs even z >= 10, got {z}"
        )));
    }
    let bits = SPLIT_BOUND_BITS;
    let one = BigInt::one() << bits;
    let w = split_count(z);

    let mut sum = BigInt::zero();
    for a in 1..=w {
        let d = BigInt::from(((2 * a + 1) * (z - 2 * a - 1)) as u64);
        sum += &one / d;
    }

    let num = BigUint::from(((2 * w + 1) * (z - 3)) as u64);
    let den = BigUint::from((3 * (z - 2 * w - 1)) as u64);
    let (ln_q, ln_err) = fixed::ln_ratio(&num, &den, bits);
    let two_z = BigInt::from(2 * z as u64);
    // ceil((ln_q + err) / 2z)
    let bound = (ln_q + BigInt::from(ln_err) + &two_z - 1u32) / &two_z;

    let slack = fixed::from_f64(SPLIT_BOUND_SLACK, bits);
    let diff = &sum - &bound;
    Ok(SplitBound {
        z,
        w,
        sum: fixed::to_f64(&sum, bits),
        bound: fixed::to_f64(&bound, bits),
        margin: fixed::to_f64(&diff, bits),
        holds: diff + slack >= BigInt::zero(),
    })
}

/// Fixed-point natural logarithm on big integers.
pub mod fixed {
    use super::*;

    /// `ln(num/den)·2^bits`, returned with a bound on its absolute error
    /// in units of `2^-bits`.
    pub fn ln_ratio(num: &BigUint, den: &BigUint, bits: u32) -> (BigInt, u64) {
        assert!(
            !num.is_zero() && !den.is_zero(),
            "logarithm of a non-positive ratio"
        );
        const GUARD: u32 = 32;
        let p = bits + GUARD;
        // x = 2^k · y with y in (1/2, 2)
        let k = num.bits() as i64 - den.bits() as i64;
        let (yn, yd) = if k >= 0 {
            (num.clone(), den << k as u64)
        } else {
            (num << (-k) as u64, den.clone())
        };
        let ln_y = atanh_series(
            &BigInt::from(yn.clone()) - BigInt::from(yd.clone()),
            BigInt::from(yn + yd),
            p,
        );
        let ln2 = atanh_series(BigInt::one(), BigInt::from(3u32), p);
        let total = ln_y + ln2 * BigInt::from(k);
        let q = total >> GUARD as usize;
        // Series truncation contributes well under 2^GUARD ulps at the guard
        // precision; the final shift adds at most one more ulp.
        (q, 2 + k.unsigned_abs())
    }

    /// `2·atanh(n/d)·2^p` for `|n/d| ≤ 1/3`.
    fn atanh_series(n: BigInt, d: BigInt, p: u32) -> BigInt {
        // atanh is odd; summing the magnitude keeps every truncation
        // rounding toward zero so the powers reach 0.
        let negative =
            (n.sign() == num_bigint::Sign::Minus) != (d.sign() == num_bigint::Sign::Minus);
        let t = (n.magnitude() << p as usize) / d.magnitude();
        let t2 = (&t * &t) >> p as usize;
        let mut power = t;
        let mut sum = BigUint::zero();
        let mut j = 1u64;
        while !power.is_zero() {
            sum += &power / j;
            power = (&power * &t2) >> p as usize;
            j += 2;
        }
        let sum = BigInt::from(sum * 2u32);
        if negative {
            -sum
        } else {
            sum
        }
    }

    pub fn to_f64(v: &BigInt, bits: u32) -> f64 {
        // Keep 64 significant bits before converting.
        let shift = (v.bits() as i64 - 64).max(0) as u32;
        let top = (v >> shift as usize).to_f64().unwrap_or(f64::NAN);
        top * libm::exp2(shift as f64 - bits as f64)
    }

    pub fn from_f64(x: f64, bits: u32) -> BigInt {
        // x·2^52 is exact for the small constants used here.
        let scaled = libm::round(x * libm::exp2(52.0));
        let v = BigInt::from(scaled as i64);
        if bits >= 52 {
            v << (bits - 52) as usize
        } else {
            v >> (52 - bits) as usize
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn ln_matches_f64() {
            for (n, d) in [
                (1u32, 1u32),
                (2, 1),
                (3, 1),
                (1, 3),
                (10, 7),
                (1000, 3),
                (7, 9000),
            ] {
                let (v, _) = ln_ratio(&BigUint::from(n), &BigUint::from(d), 100);
                let got = to_f64(&v, 100);
                let want = libm::log(n as f64 / d as f64);
                assert!(
                    (got - want).abs() < 1e-14,
                    "ln({n}/{d}) = {got}, want {want}"
                );
            }
        }

        #[test]
        fn ln_is_additive_at_high_precision() {
            let (a, ea) = ln_ratio(&BigUint::from(6u32), &BigUint::one(), 200);
            let (b, eb) = ln_ratio(&BigUint::from(2u32), &BigUint::one(), 200);
            let (c, ec) = ln_ratio(&BigUint::from(3u32), &BigUint::one(), 200);
            let diff = (a - b - c).magnitude().to_u64().unwrap();
            assert!(diff <= ea + eb + ec);
        }
    }
}

/// Descriptive text for [`wilf_no_odd`] at odd `n`.
pub fn wilf_note(n: usize) -> Option<String> {
    (n % 2 == 1).then(|| format!("n = {n} is odd: every permutation of odd order has an odd cycle"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn partition_notation() {
        let p = part("3^1 2^1");
        assert_eq!(p.to_string(), "2^1 3^1");
        assert_eq!(p.m(), 5);
        assert_eq!(p.parts(), [3, 2]);
        assert_eq!(part("2 2 3"), part("2^2 3^1"));
        assert_eq!(part("2^0 5^1").to_string(), "5^1");
        assert!("2^x".parse::<Partition>().is_err());
        assert!("0^1".parse::<Partition>().is_err());
    }

    #[test]
    fn partitions_p_small() {
        assert_eq!(partitions_p(2), [part("2")]);
        let six: Vec<String> = partitions_p(6).iter().map(|p| p.to_string()).collect();
        assert_eq!(six, ["6^1", "2^1 4^1", "3^2", "2^3"]);
        assert_eq!(partitions_p(0).len(), 1);
        assert!(partitions_p(1).is_empty());
    }

    #[test]
    fn partitions_p_counts_match_recurrence() {
        // p(m) by the standard DP; parts >= 2 counts are p(m) - p(m-1).
        let mut p = alloc::vec![0u64; 31];
        p[0] = 1;
        for part in 1..=30 {
            for m in part..=30 {
                p[m] += p[m - part];
            }
        }
        for m in 1..=30 {
            assert_eq!(partitions_p(m).len() as u64, p[m] - p[m - 1], "m={m}");
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&part("5")).unwrap(), BigUint::from(24u32));
        assert_eq!(gamma(&part("3 2")).unwrap(), BigUint::from(20u32));
        assert_eq!(gamma(&part("2^3")).unwrap(), BigUint::from(15u32));
        assert!(gamma(&part("1 4")).is_err());
        assert_eq!(gamma(&Partition::default()).unwrap(), BigUint::one());
    }

    #[test]
    fn derangement_numbers() {
        let d: Vec<u64> = (0..10).map(|m| derangements(m).to_u64().unwrap()).collect();
        assert_eq!(d, [1, 0, 1, 2, 9, 44, 265, 1854, 14833, 133496]);
    }

    #[test]
    fn census_examples() {
        let c = derangement_census(2).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), [(part("2"), 1)]);
        let c = derangement_census(5).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[&part("5")], 24);
        assert_eq!(c[&part("3 2")], 20);
        assert!(derangement_census(10).is_err());
    }

    #[test]
    fn long_cycle_examples() {
        assert_eq!(long_cycle_threshold(4, LogBase::E), 3);
        assert_eq!(long_cycle_prob(4).unwrap(), rat(7, 12));
        assert_eq!(long_cycle_prob_brute(4, LogBase::E).unwrap(), rat(7, 12));
        assert_eq!(long_cycle_prob(8).unwrap(), rat(73, 168));
        assert!(long_cycle_prob(0).is_err());
    }

    #[test]
    fn long_cycle_precondition() {
        // Base-10 logs leave the threshold at n for small n, still above n/2.
        assert!(long_cycle_prob_with_base(4, LogBase::Ten).is_ok());
        assert!(long_cycle_prob(10_000).is_ok());
    }

    #[test]
    fn wilf_examples() {
        assert_eq!(wilf_no_odd(2), rat(1, 2));
        assert_eq!(wilf_no_odd(4), rat(3, 8));
        assert_eq!(wilf_no_odd_brute(4).unwrap(), rat(9, 24));
        assert!(wilf_no_odd(5).is_zero());
        assert!(wilf_note(5).is_some());
        assert!(wilf_note(4).is_none());
    }

    #[test]
    fn odd_cycle_examples() {
        let c = odd_cycle_census(3, true).unwrap();
        assert_eq!(c.histogram.into_iter().collect::<Vec<_>>(), [(1, 2)]);
        let c = odd_cycle_census(4, true).unwrap();
        assert_eq!(
            c.histogram.clone().into_iter().collect::<Vec<_>>(),
            [(0, 9)]
        );
        assert_eq!(c.at_most_one(), rat(1, 1));
        for m in 1..=7 {
            for derangements_only in [false, true] {
                let c = odd_cycle_census(m, derangements_only).unwrap();
                assert!(c.histogram.keys().all(|k| k % 2 == m % 2));
            }
        }
    }

    #[test]
    fn split_examples() {
        let s = split_set(&part("8 2 2"), 8, false).unwrap();
        assert_eq!(s.splits.len(), 1);
        assert_eq!((s.splits[0].a, s.splits[0].b), (3, 5));
        assert_eq!(s.splits[0].mu, part("5 3 2 2"));
        assert!(s.excluded_part_one && !s.excluded_equal);

        let s = split_set(&part("12"), 12, false).unwrap();
        let ab: Vec<_> = s.splits.iter().map(|s| (s.a, s.b)).collect();
        assert_eq!(ab, [(3, 9), (5, 7)]);

        let s = split_set(&part("6"), 6, false).unwrap();
        assert!(s.splits.is_empty());
        assert!(s.excluded_equal);
        let s = split_set(&part("6"), 6, true).unwrap();
        assert_eq!(s.splits[0].mu, part("3^2"));

        assert!(split_set(&part("5 3"), 5, false).is_err());
        assert!(split_set(&part("8"), 6, false).is_err());
        for z in (2..60).step_by(2) {
            let s = split_set(&Partition::from_parts(&[z]).unwrap(), z, false).unwrap();
            assert_eq!(s.splits.len(), split_count(z), "z={z}");
        }
    }

    #[test]
    fn gamma_ratio_examples() {
        let l = part("8 2 2");
        assert_eq!(gamma_ratio(&l, 8, 3).unwrap(), rat(8, 15));
        let mu = part("5 3 2 2");
        assert_eq!(gamma(&mu).unwrap(), BigUint::from(3_991_680u32));
        assert_eq!(gamma(&l).unwrap(), BigUint::from(7_484_400u32));
        assert_eq!(gamma_ratio(&part("12"), 12, 3).unwrap(), rat(4, 9));
        let r1 = gamma_ratio(&part("10 2"), 10, 3).unwrap();
        let r2 = gamma_ratio(&part("10^2"), 10, 3).unwrap();
        assert_eq!(r2, r1 * BigRational::from_integer(2.into()));
        assert!(gamma_ratio(&l, 8, 4).is_err());
        assert!(gamma_ratio(&l, 8, 1).is_err());
    }

    #[test]
    fn equal_split_ratio_matches_direct() {
        for z in [6usize, 10, 14] {
            let l = Partition::from_parts(&[z, z, 2]).unwrap();
            let s = split_set(&l, z, true).unwrap();
            let eq = s.splits.iter().find(|s| s.a == s.b).unwrap();
            let direct = BigRational::new(gamma(&eq.mu).unwrap().into(), gamma(&l).unwrap().into());
            assert_eq!(gamma_ratio_equal_split(&l, z).unwrap(), direct);
        }
    }

    #[test]
    fn split_bound_examples() {
        let b = split_bound(10).unwrap();
        assert_eq!(b.w, 1);
        assert!((b.sum - 1.0 / 21.0).abs() < 1e-15);
        assert!(b.bound.abs() < 1e-15);
        assert!(b.holds);
        assert!(split_bound(100).unwrap().holds);
        assert!(split_bound(8).is_err());
        assert!(split_bound(11).is_err());
    }

    #[test]
    fn split_bound_sum_brackets_exact() {
        for z in (10..=200).step_by(2) {
            let exact = split_sum_exact(z).to_f64().unwrap();
            let b = split_bound(z).unwrap();
            assert!((b.sum - exact).abs() <= 1e-15 * exact.max(1.0), "z={z}");
            let direct =
                libm::log(((2 * b.w + 1) * (z - 3)) as f64 / (3 * (z - 2 * b.w - 1)) as f64)
                    / (2 * z) as f64;
            assert!((b.bound - direct).abs() < 1e-14, "z={z}");
        }
    }
}
