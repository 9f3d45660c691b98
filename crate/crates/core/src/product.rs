//! Declarative infinite products `x^s ∏_i ∏_{n ∈ A_i} (1 - x^n)^{-f_i(n)/n}`.
//!
//! A [`ProductSpec`] round-trips through JSON. Rationals are written as
//! `"p/q"` strings so nothing is ever parsed as a float:
//!
//! ```json
//! {"shift": 0, "factors": [
//!   {"set": {"kind": "multiples", "m": 2}, "weight": {"kind": "linear", "c": "-1/1"}},
//!   {"set": {"kind": "residue_union", "classes": [{"r": 1, "m": 2}]},
//!    "weight": {"kind": "linear", "c": "1/1"}}
//! ]}
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn to_string(q: &BigRational) -> String {
        format!("{}/{}", q.numer(), q.denom())
    }

    pub fn parse(s: &str) -> std::result::Result<BigRational, String> {
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let numer = BigInt::from_str(p).map_err(|_| format!("bad numerator in rational `{s}`"))?;
        let denom =
            BigInt::from_str(q).map_err(|_| format!("bad denominator in rational `{s}`"))?;
        if denom.is_zero() {
            return Err(format!("zero denominator in rational `{s}`"));
        }
        Ok(BigRational::new(numer, denom))
    }

    pub fn serialize<S: Serializer>(
        q: &BigRational,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(de)?;
        parse(&s).map_err(serde::de::Error::custom)
    }

    pub mod map {
        use super::*;
        use serde::ser::SerializeMap;

        pub fn serialize<S: Serializer>(
            m: &BTreeMap<u64, BigRational>,
            ser: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut out = ser.serialize_map(Some(m.len()))?;
            for (k, v) in m {
                out.serialize_entry(&k.to_string(), &to_string(v))?;
            }
            out.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            de: D,
        ) -> std::result::Result<BTreeMap<u64, BigRational>, D::Error> {
            let raw = BTreeMap::<String, String>::deserialize(de)?;
            raw.into_iter()
                .map(|(k, v)| {
                    let n = k
                        .parse::<u64>()
                        .map_err(|_| serde::de::Error::custom(format!("bad table key `{k}`")))?;
                    Ok((n, parse(&v).map_err(serde::de::Error::custom)?))
                })
                .collect()
        }
    }
}

pub use rational_string::{parse as parse_rational, to_string as rational_to_string};

/// One residue class `r mod m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub r: u64,
    pub m: u64,
}

impl Residue {
    pub fn new(r: u64, m: u64) -> Self {
        Self { r, m }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetDescriptor {
    All,
    ResidueUnion { classes: Vec<Residue> },
    Multiples { m: u64 },
    Explicit { members: Vec<u64> },
}

impl SetDescriptor {
    pub fn residues(classes: &[(u64, u64)]) -> Self {
        Self::ResidueUnion {
            classes: classes.iter().map(|&(r, m)| Residue::new(r, m)).collect(),
        }
    }

    pub fn odd() -> Self {
        Self::residues(&[(1, 2)])
    }

    pub fn even() -> Self {
        Self::Multiples { m: 2 }
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            Self::All => true,
            Self::ResidueUnion { classes } => classes.iter().any(|c| n % c.m == c.r),
            Self::Multiples { m } => n.is_multiple_of(*m),
            Self::Explicit { members } => members.contains(&n),
        }
    }

    /// Members in `1 ..= order`, ascending.
    pub fn members_up_to(&self, order: usize) -> Vec<u64> {
        match self {
            Self::Explicit { members } => {
                let mut v: Vec<u64> = members
                    .iter()
                    .copied()
                    .filter(|&n| n as usize <= order)
                    .collect();
                v.sort_unstable();
                v
            }
            _ => (1..=order as u64).filter(|&n| self.contains(n)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::All => Ok(()),
            Self::ResidueUnion { classes } => {
                if classes.is_empty() {
                    return Err(Error::InvalidSpec("residue union has no classes".into()));
                }
                let mut seen = BTreeSet::new();
                for c in classes {
                    crate::divisor::check_residue(c.r, c.m)?;
                    if !seen.insert(*c) {
                        return Err(Error::InvalidSpec(format!(
                            "duplicate residue class {} mod {}",
                            c.r, c.m
                        )));
                    }
                }
                Ok(())
            }
            Self::Multiples { m } => {
                if *m == 0 {
                    Err(Error::ZeroModulus)
                } else {
                    Ok(())
                }
            }
            Self::Explicit { members } => {
                let mut seen = BTreeSet::new();
                for &n in members {
                    if n == 0 {
                        return Err(Error::InvalidSpec(
                            "explicit set members must be positive".into(),
                        ));
                    }
                    if !seen.insert(n) {
                        return Err(Error::InvalidSpec(format!("duplicate explicit member {n}")));
                    }
                }
                Ok(())
            }
        }
    }
}

/// The arithmetic function `f` attached to a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    /// `f(n) = c n`, i.e. the family `(1 - x^n)^{-c}`.
    Linear {
        #[serde(with = "rational_string")]
        c: BigRational,
    },
    Table {
        #[serde(with = "rational_string::map")]
        values: BTreeMap<u64, BigRational>,
    },
}

impl WeightSpec {
    pub fn linear(c: i64) -> Self {
        Self::Linear {
            c: BigRational::from_integer(c.into()),
        }
    }

    /// `f(n)`, or `None` when a table has no entry for `n`.
    pub fn value(&self, n: u64) -> Option<BigRational> {
        match self {
            Self::Linear { c } => Some(c * BigRational::from_integer(n.into())),
            Self::Table { values } => values.get(&n).cloned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub set: SetDescriptor,
    pub weight: WeightSpec,
}

impl Factor {
    pub fn new(set: SetDescriptor, weight: WeightSpec) -> Self {
        Self { set, weight }
    }

    /// Exponent `-f(n)/n` of `(1 - x^n)` contributed by this factor at member `n`.
    pub(crate) fn exponent_at(&self, n: u64) -> Result<BigRational> {
        let f = self
            .weight
            .value(n)
            .ok_or(Error::MissingTableWeight { n })?;
        Ok(-f / BigRational::from_integer(n.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    #[serde(default)]
    pub shift: usize,
    pub factors: Vec<Factor>,
}

impl ProductSpec {
    pub fn new(shift: usize, factors: Vec<Factor>) -> Result<Self> {
        let spec = Self { shift, factors };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::InvalidSpec(
                "a product spec needs at least one factor".into(),
            ));
        }
        for (i, f) in self.factors.iter().enumerate() {
            f.set
                .validate()
                .map_err(|e| Error::InvalidSpec(format!("factors[{i}].set: {e}")))?;
            if let WeightSpec::Table { values } = &f.weight {
                if values.contains_key(&0) {
                    return Err(Error::InvalidSpec(format!(
                        "factors[{i}].weight: table keys must be positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Concatenates factor lists; shifts add.
    pub fn combine(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self {
            shift: self.shift + other.shift,
            factors,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: Self = serde_path_to_error::deserialize(de).map_err(|e| Error::SpecParse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("product specs always serialize")
    }
}

/// Built-in product specs, addressed by name in the CLI and the catalog.
pub mod builtin {
    use super::*;

    fn spec(shift: usize, factors: Vec<(SetDescriptor, i64)>) -> ProductSpec {
        ProductSpec {
            shift,
            factors: factors
                .into_iter()
                .map(|(set, c)| Factor::new(set, WeightSpec::linear(c)))
                .collect(),
        }
    }

    /// `∏ (1 - x^{2n}) (1 - x^{2n-1})^{-1} = Σ x^{T(n)}`.
    pub fn gauss() -> ProductSpec {
        spec(
            0,
            vec![(SetDescriptor::even(), -1), (SetDescriptor::odd(), 1)],
        )
    }

    /// `∏ (1 - x^{2n}) (1 - x^{2n-1})^2 = 1 + 2 Σ (-1)^n x^{n^2}`.
    pub fn jacobi() -> ProductSpec {
        spec(
            0,
            vec![(SetDescriptor::even(), -1), (SetDescriptor::odd(), -2)],
        )
    }

    /// `x ∏ (1 - x^{2n})^8 (1 - x^{2n-1})^{-8} = Σ a(n) x^n`.
    pub fn ramanujan() -> ProductSpec {
        spec(
            1,
            vec![(SetDescriptor::even(), -8), (SetDescriptor::odd(), 8)],
        )
    }

    /// `∏ ((1 - x^{5n-1})(1 - x^{5n-4}))^{-1}` for `which = 1`,
    /// `∏ ((1 - x^{5n-2})(1 - x^{5n-3}))^{-1}` for `which = 2`.
    pub fn rogers_ramanujan(which: u8) -> Result<ProductSpec> {
        let classes = match which {
            1 => [(1, 5), (4, 5)],
            2 => [(2, 5), (3, 5)],
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "Rogers-Ramanujan index must be 1 or 2, got {which}"
                )))
            }
        };
        Ok(spec(0, vec![(SetDescriptor::residues(&classes), 1)]))
    }

    /// `∏ (1 - x^{pn}) (1 - x^n)^{-1}`, the p-regular partition generating function.
    pub fn p_regular(p: u64) -> Result<ProductSpec> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!(
                "p-regular needs p >= 2, got {p}"
            )));
        }
        Ok(spec(
            0,
            vec![
                (SetDescriptor::All, 1),
                (SetDescriptor::Multiples { m: p }, -1),
            ],
        ))
    }

    /// The reciprocal orientation `∏ (1 - x^n) (1 - x^{pn})^{-1}`.
    pub fn p_regular_printed(p: u64) -> Result<ProductSpec> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!(
                "p-regular needs p >= 2, got {p}"
            )));
        }
        Ok(spec(
            0,
            vec![
                (SetDescriptor::All, -1),
                (SetDescriptor::Multiples { m: p }, 1),
            ],
        ))
    }

    /// `∏ (1 - x^{2n})^{2m} (1 - x^n)^{-m}`.
    pub fn delta(m: u64) -> Result<ProductSpec> {
        if m == 0 {
            return Err(Error::InvalidParameter("delta(m) needs m >= 1".into()));
        }
        let m = m as i64;
        Ok(spec(
            0,
            vec![(SetDescriptor::even(), -2 * m), (SetDescriptor::All, m)],
        ))
    }

    /// `∏ (1 - x^{2n})^5 / ((1 - x^n)^2 (1 - x^{4n})^2) = 1 + 2 Σ x^{n^2}`.
    pub fn square_quotient() -> ProductSpec {
        spec(
            0,
            vec![
                (SetDescriptor::even(), -5),
                (SetDescriptor::All, 2),
                (SetDescriptor::Multiples { m: 4 }, 2),
            ],
        )
    }

    /// Resolves names such as `gauss`, `rr1`, `p_regular(3)`, `delta(8)`.
    pub fn by_name(name: &str) -> Result<ProductSpec> {
        let name = name.trim();
        if let Some((head, arg)) = parse_call(name) {
            let arg: u64 = arg
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad argument in `{name}`")))?;
            return match head {
                "p_regular" => p_regular(arg),
                "delta" => delta(arg),
                _ => Err(Error::UnknownSpec(name.to_string())),
            };
        }
        match name {
            "gauss" => Ok(gauss()),
            "jacobi" => Ok(jacobi()),
            "ramanujan" => Ok(ramanujan()),
            "rr1" => rogers_ramanujan(1),
            "rr2" => rogers_ramanujan(2),
            "square_quotient" => Ok(square_quotient()),
            _ => Err(Error::UnknownSpec(name.to_string())),
        }
    }

    /// The fixed set of named specs exercised by the acceptance suite.
    pub fn standard_names() -> Vec<String> {
        let mut names: Vec<String> = ["gauss", "jacobi", "ramanujan", "rr1", "rr2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        names.extend([2, 3, 5].iter().map(|p| format!("p_regular({p})")));
        names.extend([1, 2, 4, 6, 8, 10].iter().map(|m| format!("delta({m})")));
        names.push("square_quotient".into());
        names
    }

    pub(crate) fn parse_call(s: &str) -> Option<(&str, &str)> {
        let open = s.find('(')?;
        let inner = s.strip_suffix(')')?;
        Some((&s[..open], inner[open + 1..].trim()))
    }
}
