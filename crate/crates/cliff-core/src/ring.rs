//! Scalar ring abstraction.
//!
//! The kernel is generic over the coefficient ring. Exact rings
//! (rationals, integers) test zero by equality; approximate rings (floats,
//! complex floats) use a relative tolerance scaled by the operands.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative tolerance for zero tests on approximate rings.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Scalar ring contract: addition, subtraction, multiplication, division
/// (exact or approximate), and a zero test.
pub trait Ring: Clone + PartialEq + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static {
    /// Exact rings compare for zero by equality; approximate rings by
    /// tolerance relative to a scale.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Division; `None` when `rhs` is zero (or, for integer rings, when the
    /// quotient is not exact).
    fn div(&self, rhs: &Self) -> Option<Self>;

    /// Raw zero test (exact equality with zero).
    fn is_zero(&self) -> bool;

    /// Rough magnitude used for tolerance scaling on approximate rings.
    fn magnitude(&self) -> f64;

    /// Zero test against a scale: exact rings ignore the scale.
    fn is_zero_with_scale(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= FLOAT_REL_TOL * scale.max(1.0)
        }
    }
}

impl Ring for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Ring for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        if rhs.norm_sqr() == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Ring for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Exact integer ring used for search probes; division is exact-only.
impl Ring for i128 {
    const EXACT: bool = true;

    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("i128 overflow in add")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(*rhs).expect("i128 overflow in sub")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("i128 overflow in mul")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0 || self % rhs != 0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn magnitude(&self) -> f64 {
        (*self as f64).abs()
    }
}

/// Convenience constructor for rational scalars.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rings_use_equality() {
        assert!(BigRational::from_i64(0).is_zero_with_scale(1e12));
        assert!(!rational(1, 1_000_000_000_000).is_zero_with_scale(1e12));
    }

    #[test]
    fn float_zero_is_relative() {
        assert!(1e-12f64.is_zero_with_scale(1.0));
        assert!(!1e-3f64.is_zero_with_scale(1.0));
        assert!(0.5f64.is_zero_with_scale(1e12));
    }

    #[test]
    fn integer_division_is_exact_only() {
        assert_eq!(Ring::div(&6i128, &3i128), Some(2));
        assert_eq!(Ring::div(&7i128, &3i128), None);
        assert_eq!(Ring::div(&7i128, &0i128), None);
    }
}
