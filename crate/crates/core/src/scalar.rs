//! Exact coefficient domains.
//!
//! Series and recurrences are generic over [`Coefficient`]. Two domains are
//! provided: [`BigRational`] (the reference domain, every operation total
//! except division by zero) and [`BigInt`] (the integer fast path, where a
//! division that leaves a remainder is reported instead of rounded).
//! Floating-point types deliberately do not implement the trait.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub trait Coefficient:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Signed
    + for<'a> std::ops::AddAssign<&'a Self>
    + for<'a> std::ops::SubAssign<&'a Self>
    + Send
    + Sync
{
    fn from_integer(n: BigInt) -> Self;

    /// `None` when `q` is not representable in this domain.
    fn from_rational(q: &BigRational) -> Option<Self>;

    fn to_rational(&self) -> BigRational;

    /// `self += a * b` without consuming either factor.
    fn add_product(&mut self, a: &Self, b: &Self);

    /// Exact quotient; errors on a zero divisor or a nonzero remainder.
    fn exact_div(&self, divisor: &Self) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }
}

impl Coefficient for BigRational {
    fn from_integer(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += a * b;
    }

    fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self / divisor)
    }
}

impl Coefficient for BigInt {
    fn from_integer(n: BigInt) -> Self {
        n
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        q.is_integer().then(|| q.numer().clone())
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += a * b;
    }

    fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::NotInvertible);
        }
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            })
        }
    }
}

/// Formats a rational as a decimal integer when integral, else `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
