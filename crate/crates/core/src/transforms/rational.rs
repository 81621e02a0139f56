use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Reduced fraction with arbitrary-precision numerator and positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Returns `None` for a zero denominator.
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Option<Self> {
        let den = denominator.into();
        if den.is_zero() {
            return None;
        }
        Some(ExactRational(BigRational::new(numerator.into(), den)))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn integer(value: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(value.into()))
    }

    /// `1 / value`; `value` must be nonzero.
    pub fn recip_of(value: impl Into<BigInt>) -> Self {
        let v = value.into();
        assert!(!v.is_zero(), "reciprocal of zero");
        ExactRational(BigRational::new(BigInt::one(), v))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The multiplicative inverse, or `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| ExactRational(self.0.recip()))
    }
}

impl<'a> Add<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;

    fn add(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;

    fn sub(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;

    fn mul(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stays_reduced() {
        let r = ExactRational::new(6, -4).unwrap();
        assert_eq!(r.numerator(), &BigInt::from(-3));
        assert_eq!(r.denominator(), &BigInt::from(2));
        assert!(ExactRational::new(1, 0).is_none());
    }

    #[test]
    fn reciprocal_sums() {
        let s = [20u64, 30, 12]
            .iter()
            .fold(ExactRational::zero(), |acc, &x| &acc + &ExactRational::recip_of(x));
        assert_eq!(s, ExactRational::new(1, 6).unwrap());
        assert_eq!(s.to_string(), "1/6");
        assert_eq!(&s * &ExactRational::integer(12), ExactRational::integer(2));
    }
}
