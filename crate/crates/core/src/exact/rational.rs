use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{forward_ref_binop, Field};
use super::ExactError;

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact square root, if the value is the square of a rational.
    ///
    /// The root returned is the non-negative one.
    pub fn sqrt(&self) -> Option<Rational> {
        if self.0.is_negative() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rational(BigRational::new(n, d)))
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Naive height `max(|p|, q)` of `p/q` in lowest terms; the height of zero is 1.
    pub fn height(&self) -> BigInt {
        let p = self.numer().abs();
        let q = self.denom().clone();
        if p > q {
            p
        } else {
            q
        }
    }

    /// Writes `self = d * e^2` with `d` a square-free integer and `e` rational.
    ///
    /// Returns `(d, e)` with `e >= 0`. Zero maps to `(0, 0)`.
    pub fn squarefree_decomposition(&self) -> (BigInt, Rational) {
        if self.0.is_zero() {
            return (BigInt::zero(), Rational::zero());
        }
        // p/q = p*q / q^2, so the kernel of p*q gives d.
        let pq = self.numer() * self.denom();
        let (d, k) = squarefree_kernel(&pq);
        let e = Rational::new(k, self.denom().clone());
        (d, e)
    }
}

/// Integer square root when `n` is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Splits a nonzero integer as `n = d * k^2` with `d` square-free (sign kept in `d`).
///
/// Trial division runs up to the cube root of what remains; the leftover
/// cofactor then has at most two prime factors, so it is either a prime
/// square or square-free.
pub fn squarefree_kernel(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "square-free kernel of zero");
    let mut m = n.abs();
    let mut d = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut k = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p * &p <= m {
        let mut e = 0u32;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            if e % 2 == 1 {
                d *= &p;
            }
            for _ in 0..e / 2 {
                k *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if let Some(r) = exact_isqrt(&m) {
        k *= r;
    } else {
        d *= m;
    }
    (d, k)
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "rational division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

forward_ref_binop!([] Add, add for Rational);
forward_ref_binop!([] Sub, sub for Rational);
forward_ref_binop!([] Mul, mul for Rational);
forward_ref_binop!([] Div, div for Rational);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExactError::Parse(format!("not a rational: {s:?}"));
        let int = |t: &str| -> Result<BigInt, ExactError> {
            let t = t.trim();
            let t = t.strip_prefix('+').unwrap_or(t);
            if t.is_empty() || !t.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = int(d)?;
                if d.is_zero() {
                    return Err(ExactError::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rational::new(int(n)?, d))
            }
            None => Ok(Rational::from_integer(int(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r: Rational = "-6/4".parse().unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!("7".parse::<Rational>().unwrap().to_string(), "7");
        assert_eq!(Rational::new(0, 5).to_string(), "0");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(Rational::new(9, 4).sqrt(), Some(Rational::new(3, 2)));
        assert_eq!(Rational::new(2, 1).sqrt(), None);
        assert_eq!(Rational::new(-4, 1).sqrt(), None);
        assert_eq!(Rational::zero().sqrt(), Some(Rational::zero()));
    }

    #[test]
    fn heights() {
        assert_eq!(Rational::zero().height(), BigInt::from(1));
        assert_eq!(Rational::new(3, 2).height(), BigInt::from(3));
        assert_eq!(Rational::new(-7, 10).height(), BigInt::from(10));
    }

    #[test]
    fn squarefree_kernels() {
        let k = |n: i64| {
            let (d, k) = squarefree_kernel(&BigInt::from(n));
            (d.to_i64().unwrap(), k.to_i64().unwrap())
        };
        assert_eq!(k(12), (3, 2));
        assert_eq!(k(-3), (-3, 1));
        assert_eq!(k(49), (1, 7));
        assert_eq!(k(2 * 101 * 101), (2, 101));
        assert_eq!(k(1_000_003 * 1_000_003), (1, 1_000_003));
        let (d, e) = Rational::new(7, 4).squarefree_decomposition();
        assert_eq!(d, BigInt::from(7));
        assert_eq!(e, Rational::new(1, 2));
    }
}
