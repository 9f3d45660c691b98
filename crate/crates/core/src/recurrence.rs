//! Coefficients of a [`ProductSpec`] two independent ways.
//!
//! * [`coeffs_via_recurrence`]: with `g(k) = Σ_i Σ_{d | k, d ∈ A_i} f_i(d)`,
//!   `p(0) = 1` and `n p(n) = Σ_{k=1}^{n} g(k) p(n-k)`, run on the unshifted
//!   product and shifted by `x^s` at the end.
//! * [`coeffs_via_expansion`]: multiply out `(1 - x^n)^{e(n)}` factor by
//!   factor. Never touches the divisor table.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::catalog::IdentityReport;
use crate::error::{Error, Result};
use crate::product::ProductSpec;
use crate::scalar::Coefficient;
use crate::series::TruncatedSeries;
use crate::RationalSeries;

/// `g(1 ..= N)` for a spec; `g(0)` is stored as zero and never read.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorWeightTable {
    g: Vec<BigRational>,
}

impl DivisorWeightTable {
    pub fn order(&self) -> usize {
        self.g.len() - 1
    }

    /// `g(k)` for `1 <= k <= N`.
    pub fn get(&self, k: usize) -> &BigRational {
        assert!(k >= 1, "g is indexed from 1");
        &self.g[k]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.g[1..]
    }

    pub fn is_integral(&self) -> bool {
        self.g.iter().all(|v| v.is_integer())
    }
}

pub fn weight_table(spec: &ProductSpec, order: usize) -> Result<DivisorWeightTable> {
    spec.validate()?;
    let mut g = vec![BigRational::zero(); order + 1];
    for factor in &spec.factors {
        for d in factor.set.members_up_to(order) {
            let f = factor
                .weight
                .value(d)
                .ok_or(Error::MissingTableWeight { n: d })?;
            if f.is_zero() {
                continue;
            }
            let d = d as usize;
            for k in (d..=order).step_by(d) {
                g[k] += &f;
            }
        }
    }
    Ok(DivisorWeightTable { g })
}

/// The recurrence in an explicit coefficient domain.
///
/// Over [`BigInt`] this fails with [`Error::InexactDivision`] as soon as some
/// `n p(n)` sum is not divisible by `n`, or if `g` itself is not integral.
pub fn coeffs_via_recurrence_in<T: Coefficient>(
    spec: &ProductSpec,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let table = weight_table(spec, order)?;
    recurrence_from_table(&table, spec.shift, order)
}

fn recurrence_from_table<T: Coefficient>(
    table: &DivisorWeightTable,
    shift: usize,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let g: Vec<T> = table
        .g
        .iter()
        .map(|v| {
            T::from_rational(v).ok_or_else(|| Error::InexactDivision {
                dividend: v.numer().to_string(),
                divisor: v.denom().to_string(),
            })
        })
        .collect::<Result<_>>()?;
    if shift > order {
        return Ok(TruncatedSeries::zero(order));
    }
    let inner = order - shift;
    let mut p: Vec<T> = Vec::with_capacity(inner + 1);
    p.push(T::one());
    for n in 1..=inner {
        let mut acc = T::zero();
        for k in 1..=n {
            acc.add_product(&g[k], &p[n - k]);
        }
        p.push(acc.exact_div(&T::from_i64(n as i64))?);
    }
    Ok(TruncatedSeries::from_coeffs(inner, p).widen_shift(shift, order))
}

impl<T: Coefficient> TruncatedSeries<T> {
    /// Multiplies an order-`order - s` series by `x^s`, yielding order `order`.
    fn widen_shift(self, s: usize, order: usize) -> TruncatedSeries<T> {
        let mut out = vec![T::zero(); s];
        out.extend(self.into_coeffs());
        TruncatedSeries::from_coeffs(order, out)
    }
}

/// Exact recurrence coefficients.
///
/// Runs over the integers first when `g` is integral and falls back to the
/// rationals if any division is inexact; both paths yield identical values.
pub fn coeffs_via_recurrence(spec: &ProductSpec, order: usize) -> Result<RationalSeries> {
    let table = weight_table(spec, order)?;
    if table.is_integral() {
        if let Ok(z) = recurrence_from_table::<BigInt>(&table, spec.shift, order) {
            return Ok(z.try_convert().expect("integers embed in the rationals"));
        }
    }
    recurrence_from_table::<BigRational>(&table, spec.shift, order)
}

/// Integer exponents `e(n)` of `(1 - x^n)` for `1 <= n <= order`, summed over factors.
pub fn exponents(spec: &ProductSpec, order: usize) -> Result<BTreeMap<u64, i64>> {
    spec.validate()?;
    let mut out = BTreeMap::new();
    for factor in &spec.factors {
        for n in factor.set.members_up_to(order) {
            let e = factor.exponent_at(n)?;
            let e = e
                .is_integer()
                .then(|| e.numer().to_i64())
                .flatten()
                .ok_or_else(|| Error::NonIntegerExponent {
                    n,
                    exponent: crate::scalar::format_rational(&e),
                })?;
            *out.entry(n).or_insert(0i64) += e;
        }
    }
    out.retain(|_, e| *e != 0);
    Ok(out)
}

/// Expansion in an explicit coefficient domain.
pub fn coeffs_via_expansion_in<T: Coefficient>(
    spec: &ProductSpec,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let exps = exponents(spec, order)?;
    let mut acc = TruncatedSeries::<T>::one(order);
    for (&n, &e) in &exps {
        acc.mul_binomial(n as usize, e);
    }
    Ok(acc.shift(spec.shift))
}

pub fn coeffs_via_expansion(spec: &ProductSpec, order: usize) -> Result<RationalSeries> {
    let z = coeffs_via_expansion_in::<BigInt>(spec, order)?;
    Ok(z.try_convert().expect("integers embed in the rationals"))
}

/// Compares recurrence and expansion coefficient by coefficient.
pub fn cross_check(spec: &ProductSpec, order: usize) -> Result<IdentityReport> {
    let expansion = coeffs_via_expansion(spec, order)?;
    let recurrence = coeffs_via_recurrence(spec, order)?;
    let mut report = IdentityReport::new("cross_check", order);
    report.compare_series(&recurrence, &expansion);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{a_direct, q_regular_prefix, sigma_even, sigma_odd};
    use crate::product::{builtin, Factor, SetDescriptor, WeightSpec};
    use proptest::prelude::*;

    fn q(c: &[i64]) -> RationalSeries {
        RationalSeries::from_i64s(c)
    }

    fn g_int(spec: &ProductSpec, order: usize, k: usize) -> BigRational {
        weight_table(spec, order).unwrap().get(k).clone()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn weight_table_examples() {
        assert_eq!(g_int(&builtin::gauss(), 6, 6), int(-4));
        assert_eq!(g_int(&builtin::rogers_ramanujan(1).unwrap(), 6, 4), int(5));
        assert_eq!(g_int(&builtin::jacobi(), 6, 1), int(-2));
        let gauss = weight_table(&builtin::gauss(), 60).unwrap();
        for k in 1..=60u64 {
            let expected = sigma_odd(k) as i64 - sigma_even(k) as i64;
            assert_eq!(gauss.get(k as usize), &int(expected));
        }
    }

    #[test]
    fn weight_table_missing_entry() {
        let spec = ProductSpec::new(
            0,
            vec![Factor::new(
                SetDescriptor::Explicit {
                    members: vec![2, 3],
                },
                WeightSpec::Table {
                    values: [(2, int(4))].into_iter().collect(),
                },
            )],
        )
        .unwrap();
        assert_eq!(
            weight_table(&spec, 5),
            Err(Error::MissingTableWeight { n: 3 })
        );
        // Member 3 lies beyond order 2, so no weight is required for it.
        assert!(weight_table(&spec, 2).is_ok());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(
            coeffs_via_recurrence(&builtin::gauss(), 6).unwrap(),
            q(&[1, 1, 0, 1, 0, 0, 1])
        );
        assert_eq!(
            coeffs_via_recurrence(&builtin::jacobi(), 4).unwrap(),
            q(&[1, -2, 0, 0, 2])
        );
        assert_eq!(
            coeffs_via_recurrence(&builtin::ramanujan(), 4).unwrap(),
            q(&[0, 1, 8, 28, 64])
        );
        let a = coeffs_via_recurrence(&builtin::ramanujan(), 60).unwrap();
        for n in 1..=60 {
            assert_eq!(
                a.coeff(n).unwrap(),
                &BigRational::from_integer(a_direct(n as u64))
            );
        }
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(
            coeffs_via_expansion(&builtin::gauss(), 6).unwrap(),
            q(&[1, 1, 0, 1, 0, 0, 1])
        );
        assert_eq!(
            coeffs_via_expansion(&builtin::p_regular(2).unwrap(), 5).unwrap(),
            q(&[1, 1, 1, 2, 2, 3])
        );
        let dp = q_regular_prefix(2, 5).unwrap();
        assert_eq!(
            coeffs_via_expansion_in::<BigInt>(&builtin::p_regular(2).unwrap(), 5).unwrap(),
            dp.to_series()
        );
    }

    #[test]
    fn expansion_rejects_fractional_exponent() {
        let spec = ProductSpec::new(
            0,
            vec![Factor::new(
                SetDescriptor::All,
                WeightSpec::Linear {
                    c: BigRational::new(1.into(), 2.into()),
                },
            )],
        )
        .unwrap();
        assert!(matches!(
            coeffs_via_expansion(&spec, 5),
            Err(Error::NonIntegerExponent { n: 1, .. })
        ));
        // The recurrence still works: (1-x)^{-1/2} ∏... has rational coefficients.
        let r = coeffs_via_recurrence(&spec, 3).unwrap();
        assert_eq!(r.coeff(1).unwrap(), &BigRational::new(1.into(), 2.into()));
        assert!(!r.is_integral());
    }

    #[test]
    fn half_power_squares_to_partition_series() {
        // (∏ (1-x^n)^{-1/2})^2 = ∏ (1-x^n)^{-1}.
        let half = ProductSpec::new(
            0,
            vec![Factor::new(
                SetDescriptor::All,
                WeightSpec::Linear {
                    c: BigRational::new(1.into(), 2.into()),
                },
            )],
        )
        .unwrap();
        let r = coeffs_via_recurrence(&half, 25).unwrap();
        let full = ProductSpec::new(
            0,
            vec![Factor::new(SetDescriptor::All, WeightSpec::linear(1))],
        )
        .unwrap();
        assert_eq!(r.mul(&r), coeffs_via_expansion(&full, 25).unwrap());
    }

    #[test]
    fn table_weights_through_both_algorithms() {
        // f(2) = -6 gives (1-x^2)^3; f(3) = 3 gives (1-x^3)^{-1}.
        let spec = ProductSpec::new(
            0,
            vec![Factor::new(
                SetDescriptor::Explicit {
                    members: vec![2, 3],
                },
                WeightSpec::Table {
                    values: [(2, int(-6)), (3, int(3))].into_iter().collect(),
                },
            )],
        )
        .unwrap();
        let report = cross_check(&spec, 40).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn empty_support_is_the_empty_product() {
        let spec = ProductSpec::new(
            0,
            vec![Factor::new(
                SetDescriptor::Explicit { members: vec![50] },
                WeightSpec::linear(3),
            )],
        )
        .unwrap();
        assert_eq!(
            coeffs_via_recurrence(&spec, 10).unwrap(),
            RationalSeries::one(10)
        );
        assert_eq!(
            coeffs_via_expansion(&spec, 10).unwrap(),
            RationalSeries::one(10)
        );
    }

    #[test]
    fn shift_beyond_order_is_zero() {
        let mut spec = builtin::gauss();
        spec.shift = 9;
        assert_eq!(
            coeffs_via_recurrence(&spec, 4).unwrap(),
            RationalSeries::zero(4)
        );
        assert_eq!(
            coeffs_via_expansion(&spec, 4).unwrap(),
            RationalSeries::zero(4)
        );
    }

    #[test]
    fn integer_fast_path_matches_rational_path() {
        for name in builtin::standard_names() {
            let spec = builtin::by_name(&name).unwrap();
            let fast = coeffs_via_recurrence(&spec, 80).unwrap();
            let slow = coeffs_via_recurrence_in::<BigRational>(&spec, 80).unwrap();
            assert_eq!(fast, slow, "{name}");
        }
    }

    #[test]
    fn cross_check_examples() {
        for (spec, order) in [
            (builtin::jacobi(), 200),
            (builtin::ramanujan(), 200),
            (builtin::delta(8).unwrap(), 100),
        ] {
            let r = cross_check(&spec, order).unwrap();
            assert!(r.passed && r.first_failure.is_none(), "{r:?}");
        }
    }

    fn arb_spec(max_factors: usize) -> impl Strategy<Value = ProductSpec> {
        let set = prop_oneof![
            Just(SetDescriptor::All),
            (1u64..=6).prop_map(|m| SetDescriptor::Multiples { m }),
            (1u64..=6)
                .prop_flat_map(|m| (Just(m), prop::collection::btree_set(0..m, 1..=m as usize)))
                .prop_map(|(m, rs)| SetDescriptor::residues(
                    &rs.into_iter().map(|r| (r, m)).collect::<Vec<_>>()
                )),
        ];
        (
            0usize..3,
            prop::collection::vec((set, -8i64..=8), 1..=max_factors),
        )
            .prop_map(|(shift, fs)| ProductSpec {
                shift,
                factors: fs
                    .into_iter()
                    .map(|(s, c)| Factor::new(s, WeightSpec::linear(c)))
                    .collect(),
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn recurrence_equals_expansion(spec in arb_spec(3), order in 0usize..=120) {
            let rec = coeffs_via_recurrence_in::<BigRational>(&spec, order).unwrap();
            prop_assert!(rec.is_integral());
            prop_assert_eq!(rec, coeffs_via_expansion(&spec, order).unwrap());
        }

        #[test]
        fn concatenated_specs_multiply(a in arb_spec(2), b in arb_spec(2), order in 0usize..=60) {
            let ab = a.combine(&b);
            let rec_a = coeffs_via_recurrence(&a, order).unwrap();
            let rec_b = coeffs_via_recurrence(&b, order).unwrap();
            prop_assert_eq!(coeffs_via_recurrence(&ab, order).unwrap(), rec_a.mul(&rec_b));
            let exp_a = coeffs_via_expansion(&a, order).unwrap();
            let exp_b = coeffs_via_expansion(&b, order).unwrap();
            prop_assert_eq!(coeffs_via_expansion(&ab, order).unwrap(), exp_a.mul(&exp_b));
        }

        #[test]
        fn shifting_moves_coefficients(spec in arb_spec(3), s in 0usize..6, order in 0usize..=60) {
            let mut base = spec.clone();
            base.shift = 0;
            let mut shifted = spec;
            shifted.shift = s;
            let unshifted = coeffs_via_recurrence(&base, order).unwrap();
            prop_assert_eq!(coeffs_via_recurrence(&shifted, order).unwrap(), unshifted.shift(s));
        }
    }
}
