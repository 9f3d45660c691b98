//! Truncated formal power series with exact coefficients.
//!
//! A series of order `N` stores the coefficients of `x^0 ..= x^N`; everything
//! above `x^N` is unknown. Binary operations return a series whose order is
//! the smaller of the two input orders.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> TruncatedSeries<T> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    /// Builds a series of the given order; missing trailing coefficients are
    /// zero and surplus ones are dropped.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut v: Vec<T> = coeffs.into_iter().take(order + 1).collect();
        v.resize(order + 1, T::zero());
        Self { coeffs: v }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series has at least one coefficient"
        );
        Self::from_coeffs(coeffs.len() - 1, coeffs.iter().map(|&c| T::from_i64(c)))
    }

    /// `x^s` to the given order (zero if `s > order`).
    pub fn monomial(s: usize, order: usize) -> Self {
        let mut out = Self::zero(order);
        if s <= order {
            out.coeffs[s] = T::one();
        }
        out
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^n`; `None` beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&T> {
        self.coeffs.get(n)
    }

    /// Drops coefficients above `order`. Raising the order is not allowed.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot raise the order of a truncated series"
        );
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = self.truncate(n);
        for (c, d) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += d;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = self.truncate(n);
        for (c, d) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c -= d;
        }
        out
    }

    /// Cauchy product truncated at the smaller order. Zero coefficients of
    /// either operand are skipped, so sparse factors are cheap.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = Self::zero(n);
        let (sparse, dense) = if self.nonzero_count() <= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        for (i, a) in sparse.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in dense.coeffs[..=n - i].iter().enumerate() {
                out.coeffs[i + j].add_product(a, b);
            }
        }
        out
    }

    /// Multiplicative inverse by forward substitution:
    /// `b[0] = 1/a[0]`, `b[k] = -(a[1] b[k-1] + ... + a[k] b[0]) / a[0]`.
    pub fn inv(&self) -> Result<Self> {
        let a = &self.coeffs;
        if a[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.order();
        let mut b = Vec::with_capacity(n + 1);
        b.push(T::one().exact_div(&a[0])?);
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc.add_product(&a[j], &b[k - j]);
            }
            b.push((-acc).exact_div(&a[0])?);
        }
        Ok(Self { coeffs: b })
    }

    /// Multiplies by `x^s`. The order is unchanged; the top `s` coefficients fall off.
    pub fn shift(&self, s: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        if s <= n {
            out.coeffs[s..].clone_from_slice(&self.coeffs[..=n - s]);
        }
        out
    }

    /// In-place multiplication by `(1 - x^n)^e`.
    ///
    /// Small `|e|` relative to the number of multiples of `n` is handled by
    /// repeated stride passes (`c[k] -= c[k-n]` or `c[k] += c[k-n]`); otherwise
    /// the sparse binomial expansion is convolved in.
    pub fn mul_binomial(&mut self, n: usize, e: i64) {
        assert!(n >= 1, "binomial factor needs n >= 1");
        let order = self.order();
        if e == 0 || n > order {
            return;
        }
        let passes = e.unsigned_abs();
        if passes > (order / n) as u64 {
            *self = self.mul(&binomial_factor(n, e, order));
            return;
        }
        let c = &mut self.coeffs;
        for _ in 0..passes {
            if e > 0 {
                for k in (n..=order).rev() {
                    let (lo, hi) = c.split_at_mut(k);
                    hi[0] -= &lo[k - n];
                }
            } else {
                for k in n..=order {
                    let (lo, hi) = c.split_at_mut(k);
                    hi[0] += &lo[k - n];
                }
            }
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Re-expresses the coefficients in another exact domain.
    pub fn try_convert<U: Coefficient>(&self) -> Option<TruncatedSeries<U>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| U::from_rational(&c.to_rational()))
            .collect::<Option<Vec<U>>>()?;
        Some(TruncatedSeries { coeffs })
    }

    /// True when every coefficient is an integer (denominator 1).
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.to_rational().is_integer())
    }
}

/// Expansion of `(1 - x^n)^e` to the given order.
///
/// For `e >= 0` the coefficient of `x^{nj}` is `(-1)^j C(e, j)`; for `e < 0`
/// it is `C(j + |e| - 1, |e| - 1)`. All binomials are exact big integers.
pub fn binomial_factor<T: Coefficient>(n: usize, e: i64, order: usize) -> TruncatedSeries<T> {
    assert!(n >= 1, "binomial factor needs n >= 1");
    let mut out = TruncatedSeries::zero(order);
    let mut binom = BigInt::one();
    out.coeffs[0] = T::one();
    let mut j: i64 = 1;
    while let Some(pos) = (j as usize).checked_mul(n).filter(|&p| p <= order) {
        if e >= 0 {
            if j > e {
                break;
            }
            binom = binom * BigInt::from(e - j + 1) / BigInt::from(j);
            let term = if j % 2 == 0 {
                binom.clone()
            } else {
                -binom.clone()
            };
            out.coeffs[pos] = T::from_integer(term);
        } else {
            let k = -e;
            binom = binom * BigInt::from(j + k - 1) / BigInt::from(j);
            out.coeffs[pos] = T::from_integer(binom.clone());
        }
        j += 1;
    }
    out
}

impl<T: Coefficient> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        TruncatedSeries::add(self, rhs)
    }
}

impl<T: Coefficient> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        TruncatedSeries::sub(self, rhs)
    }
}

impl<T: Coefficient> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        TruncatedSeries::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = TruncatedSeries<BigRational>;
    type Z = TruncatedSeries<BigInt>;

    fn q(c: &[i64]) -> Q {
        Q::from_i64s(c)
    }

    #[test]
    fn add_examples() {
        assert_eq!(q(&[1, 1]).add(&q(&[1, -1])), q(&[2, 0]));
        let a = q(&[3, -1, 4]);
        assert_eq!(Q::zero(2).add(&a), a);
        assert_eq!(
            q(&[1, -2, 0, 0, 2]).add(&q(&[0, 2, 0, 0, -2])),
            q(&[1, 0, 0, 0, 0])
        );
    }

    #[test]
    fn add_truncates_to_min_order() {
        let s = q(&[1, 2, 3, 4]).add(&q(&[1, 1]));
        assert_eq!(s, q(&[2, 3]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(q(&[1, -1, 0, 0]).mul(&q(&[1, 1, 1, 1])), q(&[1, 0, 0, 0]));
        assert_eq!(q(&[1, 1, 0]).mul(&q(&[1, 1, 0])), q(&[1, 2, 1]));
        let p = q(&[1, -1, 0, 0])
            .mul(&q(&[1, 0, -1, 0]))
            .mul(&q(&[1, 0, 0, -1]));
        assert_eq!(p, q(&[1, -1, -1, 0]));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(q(&[1, -1, 0, 0, 0]).inv().unwrap(), q(&[1, 1, 1, 1, 1]));
        assert_eq!(q(&[1]).inv().unwrap(), q(&[1]));
        assert_eq!(
            q(&[1, -1, -1, 0, 0, 0]).inv().unwrap(),
            q(&[1, 1, 2, 3, 5, 8])
        );
    }

    #[test]
    fn inv_rejects_zero_constant() {
        assert_eq!(q(&[0, 1, 2]).inv(), Err(Error::NotInvertible));
    }

    #[test]
    fn inv_over_integers_needs_unit_constant() {
        assert!(Z::from_i64s(&[-1, 3]).inv().is_ok());
        assert!(matches!(
            Z::from_i64s(&[2, 1]).inv(),
            Err(Error::InexactDivision { .. })
        ));
        let half = q(&[2, 1]).inv().unwrap();
        assert_eq!(
            half.coeff(1).unwrap(),
            &BigRational::new((-1).into(), 4.into())
        );
    }

    #[test]
    fn binomial_factor_examples() {
        assert_eq!(binomial_factor::<BigRational>(1, 1, 3), q(&[1, -1, 0, 0]));
        assert_eq!(
            binomial_factor::<BigRational>(2, -2, 6),
            q(&[1, 0, 2, 0, 3, 0, 4])
        );
        assert_eq!(
            binomial_factor::<BigRational>(2, 2, 4),
            q(&[1, 0, -2, 0, 1])
        );
        assert_eq!(binomial_factor::<BigRational>(7, 3, 4), q(&[1, 0, 0, 0, 0]));
    }

    #[test]
    fn negative_binomial_matches_repeated_geometric_series() {
        // (1 - x^3)^-4 computed as the fourth power of 1/(1 - x^3).
        let geo = binomial_factor::<BigInt>(3, 1, 30).inv().unwrap();
        let expected = geo.mul(&geo).mul(&geo).mul(&geo);
        assert_eq!(binomial_factor::<BigInt>(3, -4, 30), expected);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(q(&[1, 2, 3]).shift(1), q(&[0, 1, 2]));
        let a = q(&[5, 6, 7]);
        assert_eq!(a.shift(0), a);
        assert_eq!(q(&[1, 8, 28]).shift(1), q(&[0, 1, 8]));
        assert_eq!(q(&[1, 8, 28]).shift(9), q(&[0, 0, 0]));
    }

    #[test]
    fn mul_binomial_matches_explicit_factor() {
        for n in 1..=7 {
            for e in -9..=9 {
                let base = Z::from_i64s(&[3, -1, 4, 1, -5, 9, 2, -6, 5, 3, -5, 8, 9]);
                let mut fast = base.clone();
                fast.mul_binomial(n, e);
                assert_eq!(
                    fast,
                    base.mul(&binomial_factor(n, e, base.order())),
                    "n={n} e={e}"
                );
            }
        }
    }

    #[test]
    fn integer_and_rational_paths_agree() {
        let a = Z::from_i64s(&[1, -3, 2, 7, 0, -1]);
        let b = Z::from_i64s(&[1, 1, -1, 2, 5, 3]);
        let via_z: Q = a.mul(&b).inv().unwrap().try_convert().unwrap();
        let via_q = a
            .try_convert::<BigRational>()
            .unwrap()
            .mul(&b.try_convert().unwrap())
            .inv()
            .unwrap();
        assert_eq!(via_z, via_q);
    }

    fn small_series(max_len: usize) -> impl Strategy<Value = Z> {
        prop::collection::vec(-5i64..=5, 1..=max_len).prop_map(|v| Z::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn mul_commutes(a in small_series(12), b in small_series(12)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn mul_associates(a in small_series(10), b in small_series(10), c in small_series(10)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn inverse_is_two_sided(mut v in prop::collection::vec(-5i64..=5, 1..=15), c0 in 1i64..=4) {
            v[0] = c0;
            let a = Q::from_i64s(&v);
            let b = a.inv().unwrap();
            prop_assert_eq!(a.mul(&b), Q::one(a.order()));
        }

        #[test]
        fn binomial_factors_cancel(n in 1usize..=10, e in -8i64..=8, order in 0usize..=100) {
            let p = binomial_factor::<BigInt>(n, e, order).mul(&binomial_factor(n, -e, order));
            prop_assert_eq!(p, Z::one(order));
        }

        #[test]
        fn products_of_integer_factors_are_integral(
            factors in prop::collection::vec((1usize..=6, -4i64..=4), 1..=5)
        ) {
            let mut acc = Q::one(40);
            for (n, e) in factors {
                acc = acc.mul(&binomial_factor(n, e, 40));
            }
            prop_assert!(acc.is_integral());
        }
    }
}
