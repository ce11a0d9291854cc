use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Exact rational numbers, used for oracle cross-checks on integer tensors.
pub type Rational = num_rational::BigRational;

/// Field operations needed by the tensor and chaos algebra.
///
/// Only integer constructors are required: every weight in the algebra
/// (multiplicities, factorials, binomials) is an integer or a ratio of
/// integers.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn zero() -> Self;
    fn from_u64(v: u64) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact division by a positive integer.
    fn div_u64(self, d: u64) -> Self;
    fn to_f64(&self) -> f64;

    fn one() -> Self {
        Self::from_u64(1)
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    #[inline]
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    #[inline]
    fn div_u64(self, d: u64) -> Self {
        self / d as f64
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn from_u64(v: u64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn div_u64(self, d: u64) -> Self {
        self / Rational::from_integer(BigInt::from(d))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_division_is_exact() {
        let third = Rational::from_u64(1).div_u64(3);
        let back = third.clone() + third.clone() + third;
        assert_eq!(back, Rational::one());
    }

    #[test]
    fn abs_flips_negatives() {
        assert_eq!(Scalar::abs(-2.5f64), 2.5);
        assert_eq!(Scalar::abs(Rational::from_i64(-3)), Rational::from_u64(3));
    }
}
