//! Executable divisor-sum identities.
//!
//! Each check compares two sides exactly for every `n` up to the requested
//! order and records the first disagreement. Where an identity comes from a
//! product, the combinatorial oracle for its coefficients is also compared
//! against both [`coeffs_via_expansion`] and [`coeffs_via_recurrence`].
//!
//! Sums written over `k >= 0` or `k >= 1` are taken only over terms whose
//! divisor-function argument is at least 1. The `*_verbatim` and
//! `p_regular_printed_*` entries keep the literal readings that are known to
//! fail; they are excluded from [`standard_ids`].

use std::fmt::Display;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divisor::{
    a_direct, delta_m_prefix, lambert_cubic_prefix, partition_prefix, q_regular_prefix,
    rr_sum_side, sigma_ext, sigma_rm_table, sigma_table, square_indicator, triangular,
    triangular_indicator, SigmaArgument,
};
use crate::error::{Error, Result};
use crate::product::builtin;
use crate::recurrence::{coeffs_via_expansion, coeffs_via_recurrence, cross_check};
use crate::RationalSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    #[serde(rename = "identity")]
    pub identity_id: String,
    #[serde(rename = "N")]
    pub order_checked: usize,
    pub passed: bool,
    pub first_failure: Option<Failure>,
}

impl IdentityReport {
    pub fn new(id: impl Into<String>, order: usize) -> Self {
        Self {
            identity_id: id.into(),
            order_checked: order,
            passed: true,
            first_failure: None,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.identity_id = id.into();
        self
    }

    /// Records `lhs == rhs` at `n`. Only the first mismatch is kept; returns
    /// whether the report is still passing.
    pub fn check<T: PartialEq + Display>(&mut self, n: usize, lhs: &T, rhs: &T) -> bool {
        if self.passed && lhs != rhs {
            self.passed = false;
            self.first_failure = Some(Failure {
                n,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        self.passed
    }

    pub fn compare_series(&mut self, lhs: &RationalSeries, rhs: &RationalSeries) -> bool {
        for (n, (a, b)) in lhs.coeffs().iter().zip(rhs.coeffs()).enumerate() {
            if !self.check(n, a, b) {
                break;
            }
        }
        self.passed
    }

    fn compare_with_oracle(&mut self, oracle: &[BigInt], other: &RationalSeries) -> bool {
        for (n, (a, b)) in oracle.iter().zip(other.coeffs()).enumerate() {
            if !self.check(n, &BigRational::from_integer(a.clone()), b) {
                break;
            }
        }
        self.passed
    }
}

/// How far a "Σ_{k≥1} F(n - k²)"-style sum runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumBounds {
    /// Only terms with argument `n - k² >= 1`.
    PositiveArguments,
    /// Also the `n - k² = 0` term, evaluated with `σ(0) = 1`, `σ°(0) = 0`.
    Verbatim,
}

/// Prefix tables of the divisor functions the checks need, indexed `0 ..= N`.
struct DivisorTables {
    sigma: Vec<u64>,
    odd: Vec<u64>,
    even: Vec<u64>,
}

impl DivisorTables {
    fn new(order: usize) -> Self {
        Self {
            sigma: sigma_table(order),
            odd: sigma_rm_table(1, 2, order).expect("canonical"),
            even: sigma_rm_table(0, 2, order).expect("canonical"),
        }
    }

    /// Extended σ on integer arguments, matching [`sigma_ext`].
    fn sigma_ext(&self, m: i64) -> BigInt {
        match m {
            m if m > 0 => self.sigma[m as usize].into(),
            0 => BigInt::one(),
            _ => BigInt::zero(),
        }
    }

    /// `σ°(m) - σ^E(m)` for `m >= 1`.
    fn odd_minus_even(&self, m: usize) -> BigInt {
        BigInt::from(self.odd[m]) - BigInt::from(self.even[m])
    }
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn require_order(order: usize, min: usize) -> Result<()> {
    if order < min {
        Err(Error::InvalidParameter(format!(
            "order must be at least {min}, got {order}"
        )))
    } else {
        Ok(())
    }
}

/// `n p(n) = Σ_{k=1}^{n} σ(k) p(n-k)` with `p` from the partition DP.
pub fn partition_recurrence_check(order: usize) -> Result<IdentityReport> {
    require_order(order, 1)?;
    let p = partition_prefix(order);
    let sigma = sigma_table(order);
    let mut report = IdentityReport::new("partition_recurrence", order);
    for n in 1..=order {
        let lhs = BigInt::from(n) * p.get(n);
        let rhs: BigInt = (1..=n).map(|k| sigma[k] * p.get(n - k)).sum();
        if !report.check(n, &lhs, &rhs) {
            break;
        }
    }
    Ok(report)
}

fn jacobi_square_sides_with(
    n: u64,
    bounds: SumBounds,
    t: &DivisorTables,
) -> (BigRational, BigRational) {
    let sign = |k: u64| if k.is_multiple_of(2) { 1i64 } else { -1 };
    let lhs = int(sign(n) * i64::from(square_indicator(n)) * n as i64);
    let head = -(int(t.sigma[n as usize]) + int(t.odd[n as usize])) / int(2);
    let last = match bounds {
        SumBounds::PositiveArguments => n - 1,
        SumBounds::Verbatim => n,
    };
    let mut tail = BigInt::zero();
    let mut k = 1u64;
    while k * k <= last {
        let arg = (n - k * k) as i64;
        let odd = if arg > 0 { t.odd[arg as usize] } else { 0 };
        tail += -sign(k) * (t.sigma_ext(arg) + odd);
        k += 1;
    }
    (lhs, head + int(tail))
}

/// Both sides of `(-1)^n s(n) n = -(σ(n)+σ°(n))/2 + Σ_{k≥1} (-1)^{k+1}(σ(n-k²)+σ°(n-k²))` at one `n`.
pub fn jacobi_square_sides(n: u64, bounds: SumBounds) -> (BigRational, BigRational) {
    assert!(n >= 1, "identity is stated for n >= 1");
    jacobi_square_sides_with(n, bounds, &DivisorTables::new(n as usize))
}

pub fn jacobi_square_check(order: usize, bounds: SumBounds) -> Result<IdentityReport> {
    require_order(order, 1)?;
    let id = match bounds {
        SumBounds::PositiveArguments => "jacobi_square",
        SumBounds::Verbatim => "jacobi_square_verbatim",
    };
    let tables = DivisorTables::new(order);
    let mut report = IdentityReport::new(id, order);
    for n in 1..=order {
        let (lhs, rhs) = jacobi_square_sides_with(n as u64, bounds, &tables);
        if !report.check(n, &lhs, &rhs) {
            break;
        }
    }
    Ok(report)
}

/// `t(n) n = Σ_{k≥0, T(k) < n} σ°(n - T(k)) - σ^E(n - T(k))`.
pub fn triangular_check(order: usize) -> Result<IdentityReport> {
    require_order(order, 1)?;
    let t = DivisorTables::new(order);
    let mut report = IdentityReport::new("triangular", order);
    for n in 1..=order {
        let lhs = BigInt::from(triangular_indicator(n as u64)) * n;
        let rhs: BigInt = (0u64..)
            .map(|k| triangular(k) as usize)
            .take_while(|&tk| tk < n)
            .map(|tk| t.odd_minus_even(n - tk))
            .sum();
        if !report.check(n, &lhs, &rhs) {
            break;
        }
    }
    Ok(report)
}

/// Indexing of the cubic-divisor recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicIndexing {
    /// `(n-1) a(n) = 8 Σ_{k=1}^{n-1} a(n-k) (σ°(k) - σ^E(k))`, the form that
    /// accounts for the `x` prefactor.
    ShiftCorrected,
    /// `n a(n) = 8 Σ_{k=0}^{n-1} a(k) (σ°(n-k) - σ^E(n-k))`.
    Verbatim,
}

pub fn ramanujan_a_check(order: usize, indexing: CubicIndexing) -> Result<IdentityReport> {
    require_order(order, 2)?;
    let a: Vec<BigInt> = (0..=order as u64).map(a_direct).collect();
    let t = DivisorTables::new(order);
    let id = match indexing {
        CubicIndexing::ShiftCorrected => "ramanujan_a",
        CubicIndexing::Verbatim => "ramanujan_a_verbatim",
    };
    let mut report = IdentityReport::new(id, order);

    if indexing == CubicIndexing::ShiftCorrected {
        let lambert = lambert_cubic_prefix(order);
        let spec = builtin::ramanujan();
        let via_recurrence = coeffs_via_recurrence(&spec, order)?;
        let via_expansion = coeffs_via_expansion(&spec, order)?;
        for (n, a_n) in a.iter().enumerate().skip(1) {
            let direct = int(a_n.clone());
            if !(report.check(n, &direct, &int(lambert.get(n).clone()))
                && report.check(n, &direct, &via_recurrence.coeffs()[n])
                && report.check(n, &direct, &via_expansion.coeffs()[n]))
            {
                return Ok(report);
            }
        }
    }

    for n in 2..=order {
        let (lhs, rhs) = match indexing {
            CubicIndexing::ShiftCorrected => {
                let rhs: BigInt = (1..n).map(|k| &a[n - k] * t.odd_minus_even(k)).sum();
                (BigInt::from(n - 1) * &a[n], rhs * 8)
            }
            CubicIndexing::Verbatim => {
                let rhs: BigInt = (0..n).map(|k| &a[k] * t.odd_minus_even(n - k)).sum();
                (BigInt::from(n) * &a[n], rhs * 8)
            }
        };
        if !report.check(n, &lhs, &rhs) {
            break;
        }
    }
    Ok(report)
}

/// `n Q(n) = Σ_{k=0}^{n-1} Q(k) (σ(n-k) - σ_{0,p}(n-k))` with `Q` from the
/// bounded-multiplicity partition DP, which must also equal the expansion
/// and recurrence coefficients of `∏ (1 - x^{pn}) / (1 - x^n)`.
pub fn p_regular_check(p: u64, order: usize) -> Result<IdentityReport> {
    require_order(order, 1)?;
    let q = q_regular_prefix(p, order)?;
    let spec = builtin::p_regular(p)?;
    let mut report = IdentityReport::new(format!("p_regular_{p}"), order);
    if !(report.compare_with_oracle(&q.terms, &coeffs_via_expansion(&spec, order)?)
        && report.compare_with_oracle(&q.terms, &coeffs_via_recurrence(&spec, order)?))
    {
        return Ok(report);
    }
    let sigma = sigma_table(order);
    let multiples = sigma_rm_table(0, p, order)?;
    for n in 1..=order {
        let lhs = BigInt::from(n) * q.get(n);
        let rhs: BigInt = (0..n)
            .map(|k| q.get(k) * (BigInt::from(sigma[n - k]) - multiples[n - k]))
            .sum();
        if !report.check(n, &lhs, &rhs) {
            break;
        }
    }
    Ok(report)
}

/// Coefficients of the reciprocal orientation `∏ (1 - x^n) / (1 - x^{pn})`.
pub fn p_regular_printed_coefficients(p: u64, order: usize) -> Result<RationalSeries> {
    coeffs_via_expansion(&builtin::p_regular_printed(p)?, order)
}

/// Compares the partition DP against the reciprocal orientation; fails.
pub fn p_regular_printed_check(p: u64, order: usize) -> Result<IdentityReport> {
    require_order(order, 1)?;
    let q = q_regular_prefix(p, order)?;
    let mut report = IdentityReport::new(format!("p_regular_printed_{p}"), order);
    report.compare_with_oracle(&q.terms, &p_regular_printed_coefficients(p, order)?);
    Ok(report)
}

/// `n R(n) = Σ_{k=0}^{n-1} R(k) (σ_{a,5}(n-k) + σ_{b,5}(n-k))` with
/// `(a, b) = (1, 4)` or `(2, 3)`, and `R` from the sum side.
pub fn rogers_ramanujan_check(which: u8, order: usize) -> Result<IdentityReport> {
    require_order(order, 1)?;
    let r = rr_sum_side(which, order)?;
    let spec = builtin::rogers_ramanujan(which)?;
    let mut report = IdentityReport::new(format!("rogers_ramanujan_{which}"), order);
    if !(report.compare_with_oracle(&r.terms, &coeffs_via_expansion(&spec, order)?)
        && report.compare_with_oracle(&r.terms, &coeffs_via_recurrence(&spec, order)?))
    {
        return Ok(report);
    }
    let (a, b) = if which == 1 { (1, 4) } else { (2, 3) };
    let first = sigma_rm_table(a, 5, order)?;
    let second = sigma_rm_table(b, 5, order)?;
    for n in 1..=order {
        let lhs = BigInt::from(n) * r.get(n);
        let rhs: BigInt = (0..n)
            .map(|k| r.get(k) * (first[n - k] + second[n - k]))
            .sum();
        if !report.check(n, &lhs, &rhs) {
            break;
        }
    }
    Ok(report)
}

/// `n s(n) = h(n) + 2 Σ_{k=1}^{n-1} s(n-k) h(k)` with
/// `h(k) = σ(k) - 5σ(k/2) + 4σ(k/4)` over the extended σ.
pub fn square_eta_quotient_check(order: usize) -> Result<IdentityReport> {
    require_order(order, 1)?;
    let mut report = IdentityReport::new("square_eta_quotient", order);
    let closed: Vec<BigInt> = (0..=order as u64)
        .map(|n| match n {
            0 => BigInt::one(),
            n => BigInt::from(2 * square_indicator(n)),
        })
        .collect();
    let spec = builtin::square_quotient();
    if !(report.compare_with_oracle(&closed, &coeffs_via_expansion(&spec, order)?)
        && report.compare_with_oracle(&closed, &coeffs_via_recurrence(&spec, order)?))
    {
        return Ok(report);
    }
    let sigma_q = |p: u64, q: i64| sigma_ext(&SigmaArgument::ratio(p as i64, q));
    let h: Vec<BigInt> = (0..=order as u64)
        .map(|k| sigma_q(k, 1) - 5 * sigma_q(k, 2) + 4 * sigma_q(k, 4))
        .collect();
    for n in 1..=order {
        let lhs = BigInt::from(n as u64 * u64::from(square_indicator(n as u64)));
        let mut rhs = h[n].clone();
        // s(n-k) vanishes unless n - k = j² with j >= 1.
        let mut j = 1usize;
        while j * j < n {
            rhs += 2 * &h[n - j * j];
            j += 1;
        }
        if !report.check(n, &lhs, &rhs) {
            break;
        }
    }
    Ok(report)
}

/// Whether the triangular-count product formula is asserted for this `m`:
/// `m ∈ {1, 2, 6, 10}` or `m` a positive multiple of 4.
pub fn delta_admissible(m: u64) -> bool {
    matches!(m, 1 | 2 | 6 | 10) || (m > 0 && m.is_multiple_of(4))
}

/// `n δ_m(n) = m Σ_{k=1}^{n} (σ°(k) - σ^E(k)) δ_m(n-k)` with `δ_m` from
/// the `m`-fold convolution of the triangular indicator.
pub fn delta_m_check(m: u64, order: usize) -> Result<IdentityReport> {
    if !delta_admissible(m) {
        return Err(Error::InadmissibleTriangularCount(m));
    }
    require_order(order, 1)?;
    let delta = delta_m_prefix(m, order)?;
    let spec = builtin::delta(m)?;
    let mut report = IdentityReport::new(format!("delta_{m}"), order);
    if !(report.compare_with_oracle(&delta.terms, &coeffs_via_expansion(&spec, order)?)
        && report.compare_with_oracle(&delta.terms, &coeffs_via_recurrence(&spec, order)?))
    {
        return Ok(report);
    }
    let t = DivisorTables::new(order);
    for n in 1..=order {
        let lhs = BigInt::from(n) * delta.get(n);
        let rhs: BigInt = (1..=n)
            .map(|k| t.odd_minus_even(k) * delta.get(n - k))
            .sum();
        if !report.check(n, &lhs, &(rhs * m)) {
            break;
        }
    }
    Ok(report)
}

/// Recurrence-versus-expansion agreement for a built-in spec, addressed as
/// `product_recurrence_<name>` with `p_regular(3)` written `p_regular_3`.
pub fn product_recurrence_check(spec_id: &str, order: usize) -> Result<IdentityReport> {
    let name = spec_name_from_id(spec_id);
    let spec = builtin::by_name(&name)?;
    Ok(cross_check(&spec, order)?.with_id(format!("product_recurrence_{spec_id}")))
}

fn spec_name_from_id(id: &str) -> String {
    for head in ["p_regular", "delta"] {
        if let Some(arg) = id.strip_prefix(head).and_then(|r| r.strip_prefix('_')) {
            return format!("{head}({arg})");
        }
    }
    id.to_string()
}

fn spec_id_from_name(name: &str) -> String {
    match builtin::parse_call(name) {
        Some((head, arg)) => format!("{head}_{arg}"),
        None => name.to_string(),
    }
}

fn suffix<'a>(id: &'a str, prefix: &str) -> Option<&'a str> {
    id.strip_prefix(prefix)
}

fn parse_param<T: std::str::FromStr>(id: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::UnknownIdentity(id.to_string()))
}

/// Runs one identity by id.
pub fn run(id: &str, order: usize) -> Result<IdentityReport> {
    match id {
        "partition_recurrence" => return partition_recurrence_check(order),
        "jacobi_square" => return jacobi_square_check(order, SumBounds::PositiveArguments),
        "jacobi_square_verbatim" => return jacobi_square_check(order, SumBounds::Verbatim),
        "triangular" => return triangular_check(order),
        "ramanujan_a" => return ramanujan_a_check(order, CubicIndexing::ShiftCorrected),
        "ramanujan_a_verbatim" => return ramanujan_a_check(order, CubicIndexing::Verbatim),
        "square_eta_quotient" => return square_eta_quotient_check(order),
        _ => {}
    }
    if let Some(rest) = suffix(id, "p_regular_printed_") {
        return p_regular_printed_check(parse_param(id, rest)?, order);
    }
    if let Some(rest) = suffix(id, "p_regular_") {
        return p_regular_check(parse_param(id, rest)?, order);
    }
    if let Some(rest) = suffix(id, "rogers_ramanujan_") {
        return match rest {
            "1" => rogers_ramanujan_check(1, order),
            "2" => rogers_ramanujan_check(2, order),
            _ => Err(Error::UnknownIdentity(id.to_string())),
        };
    }
    if let Some(rest) = suffix(id, "delta_") {
        return delta_m_check(parse_param(id, rest)?, order);
    }
    if let Some(rest) = suffix(id, "product_recurrence_") {
        return product_recurrence_check(rest, order).map_err(|e| match e {
            Error::UnknownSpec(_) => Error::UnknownIdentity(id.to_string()),
            other => other,
        });
    }
    Err(Error::UnknownIdentity(id.to_string()))
}

/// Every identity expected to hold; this is what `verify all` runs.
pub fn standard_ids() -> Vec<String> {
    let mut ids: Vec<String> = vec![
        "partition_recurrence".into(),
        "jacobi_square".into(),
        "triangular".into(),
        "ramanujan_a".into(),
    ];
    ids.extend([2, 3, 5, 7].iter().map(|p| format!("p_regular_{p}")));
    ids.extend(["rogers_ramanujan_1".into(), "rogers_ramanujan_2".into()]);
    ids.push("square_eta_quotient".into());
    ids.extend([1, 2, 4, 6, 8, 10, 12].iter().map(|m| format!("delta_{m}")));
    ids.extend(
        builtin::standard_names()
            .iter()
            .map(|n| format!("product_recurrence_{}", spec_id_from_name(n))),
    );
    ids
}

/// Literal readings pinned as failing.
pub fn negative_ids() -> Vec<String> {
    vec![
        "jacobi_square_verbatim".into(),
        "ramanujan_a_verbatim".into(),
        "p_regular_printed_2".into(),
    ]
}

/// Runs the given identities concurrently; reports are sorted by id.
pub fn run_many(ids: &[String], order: usize) -> Result<Vec<IdentityReport>> {
    let mut reports = ids
        .par_iter()
        .map(|id| run(id, order))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
    Ok(reports)
}
