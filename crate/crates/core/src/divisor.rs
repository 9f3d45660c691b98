//! Divisor functions, indicator functions and combinatorial sequence oracles.
//!
//! Everything producing a [`SequencePrefix`] here counts objects directly
//! (dynamic programs, convolutions, divisor enumeration). None of it goes
//! through the recurrence engine, so these prefixes can arbitrate it.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// An exact rational argument for the extended divisor function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaArgument(pub BigRational);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArgumentClass {
    PositiveInteger(BigUint),
    Zero,
    Other,
}

impl SigmaArgument {
    pub fn integer(n: i64) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self(BigRational::new(p.into(), q.into()))
    }

    pub fn classify(&self) -> ArgumentClass {
        if self.0.is_zero() {
            ArgumentClass::Zero
        } else if self.0.is_integer() && self.0.is_positive() {
            ArgumentClass::PositiveInteger(self.0.numer().magnitude().clone())
        } else {
            ArgumentClass::Other
        }
    }
}

/// Sum of divisors, extended to the rationals: `σ(0) = 1` and `σ(q) = 0`
/// for negative or non-integral `q`.
pub fn sigma_ext(q: &SigmaArgument) -> BigInt {
    match q.classify() {
        ArgumentClass::Zero => BigInt::one(),
        ArgumentClass::Other => BigInt::zero(),
        ArgumentClass::PositiveInteger(n) => match n.to_u64() {
            Some(small) => BigInt::from(sigma(small)),
            None => BigInt::from(sigma_big(&n)),
        },
    }
}

/// `σ(n)` for a positive machine integer; `sigma(0)` is 0 (see [`sigma_ext`]
/// for the extended convention).
pub fn sigma(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}

/// σ via trial-division factorization: `∏ (p^{a+1} - 1) / (p - 1)`.
fn sigma_big(n: &BigUint) -> BigUint {
    let mut rest = n.clone();
    let mut total = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        if (&rest % &p).is_zero() {
            let mut power_sum = BigUint::one();
            let mut power = BigUint::one();
            while (&rest % &p).is_zero() {
                rest /= &p;
                power *= &p;
                power_sum += &power;
            }
            total *= power_sum;
        }
        p += 1u32;
    }
    if !rest.is_one() {
        total *= rest + 1u32;
    }
    total
}

/// Divisors of `n` by trial division up to `√n`, unordered. Empty for 0.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let root = n.sqrt();
    for d in 1..=root {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
    }
    out
}

/// Sum of the divisors of `n` congruent to `r` mod `m`.
pub fn sigma_rm(n: u64, r: u64, m: u64) -> Result<u64> {
    check_residue(r, m)?;
    if n == 0 {
        return Err(Error::NonPositiveArgument(n));
    }
    Ok(divisors(n).into_iter().filter(|d| d % m == r).sum())
}

pub(crate) fn check_residue(r: u64, m: u64) -> Result<()> {
    if m == 0 {
        Err(Error::ZeroModulus)
    } else if r >= m {
        Err(Error::NonCanonicalResidue { r, m })
    } else {
        Ok(())
    }
}

/// Odd-divisor sum; 0 at `n = 0`.
pub fn sigma_odd(n: u64) -> u64 {
    if n == 0 {
        0
    } else {
        divisors(n).into_iter().filter(|d| d % 2 == 1).sum()
    }
}

/// Even-divisor sum; 0 at `n = 0`.
pub fn sigma_even(n: u64) -> u64 {
    if n == 0 {
        0
    } else {
        divisors(n).into_iter().filter(|d| d % 2 == 0).sum()
    }
}

/// Table `t[k] = Σ_{d | k, d ≡ r (mod m)} d` for `0 ..= order`, with `t[0] = 0`.
///
/// Built by walking the multiples of each admissible `d`, `O(N log N)` total.
pub fn sigma_rm_table(r: u64, m: u64, order: usize) -> Result<Vec<u64>> {
    check_residue(r, m)?;
    let mut t = vec![0u64; order + 1];
    for d in 1..=order {
        if d as u64 % m != r {
            continue;
        }
        for k in (d..=order).step_by(d) {
            t[k] += d as u64;
        }
    }
    Ok(t)
}

/// `σ(k)` for `0 ..= order`, with entry 0 set to 0.
pub fn sigma_table(order: usize) -> Vec<u64> {
    sigma_rm_table(0, 1, order).expect("0 mod 1 is canonical")
}

pub fn square_indicator(n: u64) -> u8 {
    let r = n.sqrt();
    u8::from(r * r == n)
}

pub fn triangular(n: u64) -> u64 {
    n * (n + 1) / 2
}

pub fn triangular_indicator(n: u64) -> u8 {
    // n = T(m) iff 8n + 1 is a perfect square.
    let disc = 8 * u128::from(n) + 1;
    let r = disc.sqrt();
    u8::from(r * r == disc)
}

/// `a(0) = 1`, `a(n) = Σ_{d | n, d odd} (n/d)^3`.
pub fn a_direct(n: u64) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    divisors(n)
        .into_iter()
        .filter(|d| d % 2 == 1)
        .map(|d| BigInt::from(n / d).pow(3))
        .sum()
}

/// Named sequence values for indices `0 ..= N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePrefix {
    pub name: String,
    pub terms: Vec<BigInt>,
}

impl SequencePrefix {
    pub fn new(name: impl Into<String>, terms: Vec<BigInt>) -> Self {
        Self {
            name: name.into(),
            terms,
        }
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigInt {
        &self.terms[n]
    }

    pub fn to_series(&self) -> TruncatedSeries<BigInt> {
        TruncatedSeries::from_coeffs(self.order(), self.terms.iter().cloned())
    }
}

/// Coefficients of `Σ_{n≥1} n^3 x^n / (1 - x^{2n})`, expanded as the double
/// sum `Σ n^3 x^{n(2j+1)}`; index 0 carries the `a(0) = 1` convention.
pub fn lambert_cubic_prefix(order: usize) -> SequencePrefix {
    let mut terms = vec![BigInt::zero(); order + 1];
    terms[0] = BigInt::one();
    for n in 1..=order {
        let cube = BigInt::from(n as u64).pow(3);
        for k in (n..=order).step_by(2 * n) {
            terms[k] += &cube;
        }
    }
    SequencePrefix::new("lambert_cubic", terms)
}

/// `p(n)` by adding parts one size at a time.
pub fn partition_prefix(order: usize) -> SequencePrefix {
    let mut p = vec![BigInt::zero(); order + 1];
    p[0] = BigInt::one();
    for part in 1..=order {
        for n in part..=order {
            let (lo, hi) = p.split_at_mut(n);
            hi[0] += &lo[n - part];
        }
    }
    SequencePrefix::new("partition", p)
}

/// `Q^(p)(n)`: partitions in which every part appears at most `p - 1` times.
pub fn q_regular_prefix(p: u64, order: usize) -> Result<SequencePrefix> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "p-regular needs p >= 2, got {p}"
        )));
    }
    let max_copies = (p - 1) as usize;
    let mut counts = vec![BigInt::zero(); order + 1];
    counts[0] = BigInt::one();
    for part in 1..=order {
        let mut next = counts.clone();
        for n in part..=order {
            for copies in 1..=max_copies.min(n / part) {
                next[n] += &counts[n - copies * part];
            }
        }
        counts = next;
    }
    Ok(SequencePrefix::new(format!("q_regular({p})"), counts))
}

/// Sum side of the Rogers–Ramanujan identities:
/// `1 + Σ_{n≥1} x^{n^2 + (which-1) n} / ((1-x)(1-x^2)...(1-x^n))`.
pub fn rr_sum_side(which: u8, order: usize) -> Result<SequencePrefix> {
    if which != 1 && which != 2 {
        return Err(Error::InvalidParameter(format!(
            "Rogers-Ramanujan index must be 1 or 2, got {which}"
        )));
    }
    let mut total = TruncatedSeries::<BigInt>::one(order);
    let mut denominator_inverse = TruncatedSeries::<BigInt>::one(order);
    for n in 1usize.. {
        let exponent = n * n + if which == 2 { n } else { 0 };
        if exponent > order {
            break;
        }
        denominator_inverse.mul_binomial(n, -1);
        total = total.add(&denominator_inverse.shift(exponent));
    }
    Ok(SequencePrefix::new(
        format!("rr{which}"),
        total.into_coeffs(),
    ))
}

/// `δ_m(n)`: ordered representations of `n` as a sum of `m` triangular
/// numbers, as the `m`-th power of `Σ x^{T(k)}`.
pub fn delta_m_prefix(m: u64, order: usize) -> Result<SequencePrefix> {
    if m == 0 {
        return Err(Error::InvalidParameter("delta_m needs m >= 1".into()));
    }
    let indicator = TruncatedSeries::<BigInt>::from_coeffs(
        order,
        (0..=order as u64).map(|n| BigInt::from(triangular_indicator(n))),
    );
    let mut acc = indicator.clone();
    for _ in 1..m {
        acc = acc.mul(&indicator);
    }
    Ok(SequencePrefix::new(
        format!("delta({m})"),
        acc.into_coeffs(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    // Enumerates partitions of n with parts <= max, as nonincreasing sequences.
    fn enumerate_partitions(n: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            enumerate_partitions(n - part, part, prefix, out);
            prefix.pop();
        }
    }

    fn all_partitions(n: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        enumerate_partitions(n, n, &mut Vec::new(), &mut out);
        out
    }

    fn max_multiplicity(parts: &[u64]) -> usize {
        parts
            .iter()
            .map(|p| parts.iter().filter(|q| *q == p).count())
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn sigma_ext_examples() {
        assert_eq!(sigma_ext(&SigmaArgument::integer(6)), big(12));
        assert_eq!(sigma_ext(&SigmaArgument::integer(0)), big(1));
        assert_eq!(sigma_ext(&SigmaArgument::ratio(3, 2)), big(0));
        assert_eq!(sigma_ext(&SigmaArgument::integer(-4)), big(0));
        assert_eq!(sigma_ext(&SigmaArgument::ratio(8, 2)), big(7));
    }

    #[test]
    fn sigma_ext_beyond_machine_words() {
        // 2^64 has divisors 2^0 .. 2^64, summing to 2^65 - 1.
        let two_64 = BigInt::from(1u128 << 64);
        let arg = SigmaArgument(BigRational::from_integer(two_64));
        assert_eq!(sigma_ext(&arg), BigInt::from((1u128 << 65) - 1));
        // 3^41 > 2^64; σ(3^41) = (3^42 - 1) / 2.
        let three = BigInt::from(3u8);
        let arg = SigmaArgument(BigRational::from_integer(three.pow(41)));
        assert_eq!(sigma_ext(&arg), (three.pow(42) - 1) / 2);
        for n in 1..=500u64 {
            assert_eq!(sigma_big(&BigUint::from(n)), BigUint::from(sigma(n)));
        }
    }

    #[test]
    fn restricted_sigma_examples() {
        assert_eq!(sigma_odd(6), 4);
        assert_eq!(sigma_even(6), 8);
        assert_eq!(sigma_rm(6, 1, 5), Ok(7));
        assert_eq!(sigma_rm(6, 1, 2), Ok(4));
        assert_eq!(sigma_rm(6, 0, 2), Ok(8));
    }

    #[test]
    fn restricted_sigma_errors() {
        assert_eq!(
            sigma_rm(6, 5, 5),
            Err(Error::NonCanonicalResidue { r: 5, m: 5 })
        );
        assert_eq!(sigma_rm(6, 0, 0), Err(Error::ZeroModulus));
        assert_eq!(sigma_rm(0, 1, 2), Err(Error::NonPositiveArgument(0)));
        assert_eq!(sigma_odd(0), 0);
        assert_eq!(sigma_even(0), 0);
    }

    #[test]
    fn residue_classes_partition_sigma() {
        for n in 1..=300u64 {
            assert_eq!(sigma_odd(n) + sigma_even(n), sigma(n));
            for m in 1..=7 {
                let total: u64 = (0..m).map(|r| sigma_rm(n, r, m).unwrap()).sum();
                assert_eq!(total, sigma(n), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn sieve_tables_match_trial_division() {
        let s = sigma_table(500);
        let r = sigma_rm_table(3, 5, 500).unwrap();
        for n in 1..=500u64 {
            assert_eq!(s[n as usize], sigma(n));
            assert_eq!(r[n as usize], sigma_rm(n, 3, 5).unwrap());
        }
        assert_eq!(s[0], 0);
    }

    #[test]
    fn indicators() {
        assert_eq!(square_indicator(0), 1);
        assert_eq!(square_indicator(9), 1);
        assert_eq!(square_indicator(10), 0);
        assert_eq!(triangular(0), 0);
        assert_eq!(triangular(3), 6);
        assert_eq!(triangular_indicator(6), 1);
        assert_eq!(triangular_indicator(5), 0);
        assert_eq!(triangular_indicator(0), 1);
        let tri: Vec<u64> = (0..=30).filter(|&n| triangular_indicator(n) == 1).collect();
        assert_eq!(tri, vec![0, 1, 3, 6, 10, 15, 21, 28]);
        assert_eq!(triangular_indicator(u64::MAX), 0);
    }

    #[test]
    fn a_direct_examples() {
        assert_eq!(a_direct(0), big(1));
        assert_eq!(a_direct(1), big(1));
        assert_eq!(a_direct(2), big(8));
        assert_eq!(a_direct(6), big(224));
    }

    #[test]
    fn lambert_examples_and_equivalence() {
        let l = lambert_cubic_prefix(400);
        assert_eq!(l.get(0), &big(1));
        assert_eq!(l.get(1), &big(1));
        assert_eq!(l.get(3), &big(28));
        assert_eq!(l.get(4), &big(64));
        for n in 1..=400 {
            assert_eq!(l.get(n), &a_direct(n as u64), "n={n}");
        }
    }

    #[test]
    fn partition_dp_matches_enumeration() {
        let p = partition_prefix(18);
        for n in 0..=18u64 {
            assert_eq!(
                p.get(n as usize),
                &big(all_partitions(n).len() as i64),
                "n={n}"
            );
        }
        assert_eq!(p.get(5), &big(7));
    }

    #[test]
    fn q_regular_dp_matches_enumeration() {
        for p in 2..=5u64 {
            let q = q_regular_prefix(p, 16).unwrap();
            for n in 0..=16u64 {
                let count = all_partitions(n)
                    .iter()
                    .filter(|parts| max_multiplicity(parts) < p as usize)
                    .count();
                assert_eq!(q.get(n as usize), &big(count as i64), "p={p} n={n}");
            }
        }
        assert_eq!(q_regular_prefix(2, 5).unwrap().get(5), &big(3));
        assert_eq!(q_regular_prefix(3, 4).unwrap().get(4), &big(4));
        assert!(q_regular_prefix(1, 4).is_err());
    }

    #[test]
    fn partition_orderings() {
        let p = partition_prefix(200);
        let q3 = q_regular_prefix(3, 200).unwrap();
        for n in 1..=200 {
            assert!(p.get(n) >= p.get(n - 1));
            assert!(q3.get(n) <= p.get(n));
        }
    }

    #[test]
    fn rogers_ramanujan_sum_side_matches_enumeration() {
        let r1 = rr_sum_side(1, 20).unwrap();
        let r2 = rr_sum_side(2, 20).unwrap();
        for n in 0..=20u64 {
            let parts = all_partitions(n);
            let c1 = parts
                .iter()
                .filter(|p| p.iter().all(|x| x % 5 == 1 || x % 5 == 4))
                .count();
            let c2 = parts
                .iter()
                .filter(|p| p.iter().all(|x| x % 5 == 2 || x % 5 == 3))
                .count();
            assert_eq!(r1.get(n as usize), &big(c1 as i64), "R1({n})");
            assert_eq!(r2.get(n as usize), &big(c2 as i64), "R2({n})");
        }
        assert_eq!(r1.get(4), &big(2));
        assert_eq!(r2.get(4), &big(1));
        assert_eq!(r1.get(0), &big(1));
        assert!(rr_sum_side(3, 4).is_err());
    }

    fn count_tuples(m: u64, n: u64, tri: &[u64]) -> u64 {
        if m == 0 {
            return u64::from(n == 0);
        }
        tri.iter()
            .take_while(|&&t| t <= n)
            .map(|&t| count_tuples(m - 1, n - t, tri))
            .sum()
    }

    #[test]
    fn delta_m_matches_nested_enumeration() {
        let tri: Vec<u64> = (0..20).map(triangular).collect();
        for m in 1..=4u64 {
            let d = delta_m_prefix(m, 50).unwrap();
            for n in 0..=50u64 {
                assert_eq!(
                    d.get(n as usize),
                    &big(count_tuples(m, n, &tri) as i64),
                    "m={m} n={n}"
                );
            }
        }
        let d1 = delta_m_prefix(1, 40).unwrap();
        for n in 0..=40u64 {
            assert_eq!(d1.get(n as usize), &big(triangular_indicator(n) as i64));
        }
        let d2 = delta_m_prefix(2, 3).unwrap();
        assert_eq!(d2.get(1), &big(2));
        assert_eq!(d2.get(3), &big(2));
    }
}
