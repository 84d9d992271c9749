use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::Rational;

/// A field of characteristic zero with exact arithmetic.
///
/// Every field used here contains the rationals, so constants from family
/// data can be lifted with [`Field::from_rational`]. Division by zero through
/// the `Div` operator panics; use [`Field::checked_div`] when the divisor may
/// vanish.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    /// The value as a rational number, if it lies in the prime field.
    fn to_rational(&self) -> Option<Rational>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }
}

/// Generates the owned/borrowed operator combinations from an
/// `impl Op<&T> for &T`.
macro_rules! forward_ref_binop {
    ([$($gen:tt)*] $imp:ident, $method:ident for $t:ty) => {
        impl<$($gen)*> $imp<$t> for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                $imp::$method(&self, &rhs)
            }
        }
        impl<$($gen)*> $imp<&$t> for $t {
            type Output = $t;
            fn $method(self, rhs: &$t) -> $t {
                $imp::$method(&self, rhs)
            }
        }
        impl<$($gen)*> $imp<$t> for &$t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                $imp::$method(self, &rhs)
            }
        }
    };
}

pub(crate) use forward_ref_binop;
