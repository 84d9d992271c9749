use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{forward_ref_binop, Field};
use super::rational::squarefree_kernel;
use super::{ExactError, Rational};

/// An element `a + b*sqrt(d)` of a quadratic extension of the rationals.
///
/// `d` is a square-free integer other than 0 and 1. Elements with `b = 0`
/// are rationals and may carry `d = 1`, which marks "no extension chosen
/// yet"; such elements combine with elements of any `Q(sqrt(d))`. Combining
/// two irrational elements with different `d` is a logic error and panics.
#[derive(Clone, Debug)]
pub struct QuadExt {
    d: BigInt,
    a: Rational,
    b: Rational,
}

impl QuadExt {
    pub fn new(d: impl Into<BigInt>, a: Rational, b: Rational) -> Result<Self, ExactError> {
        let d = d.into();
        if b.is_zero() {
            return Ok(QuadExt { d, a, b });
        }
        if d.is_zero() || d.is_one() || squarefree_kernel(&d).0 != d {
            return Err(ExactError::BadExtension(d.to_string()));
        }
        Ok(QuadExt { d, a, b })
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { d: BigInt::one(), a, b: Rational::zero() }
    }

    /// `e * sqrt(d)`.
    pub fn scaled_sqrt(d: impl Into<BigInt>, e: Rational) -> Result<Self, ExactError> {
        QuadExt::new(d, Rational::zero(), e)
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn conjugate(&self) -> Self {
        QuadExt { d: self.d.clone(), a: self.a.clone(), b: -&self.b }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        let d = Rational::from(self.d.clone());
        &self.a * &self.a - d * &self.b * &self.b
    }

    fn join_d(&self, other: &QuadExt) -> BigInt {
        let pick = |x: &QuadExt| !x.b.is_zero() || !x.d.is_one();
        match (pick(self), pick(other)) {
            (true, true) => {
                if self.d != other.d && !self.b.is_zero() && !other.b.is_zero() {
                    panic!("mixing Q(sqrt {}) with Q(sqrt {})", self.d, other.d);
                }
                if self.b.is_zero() {
                    other.d.clone()
                } else {
                    self.d.clone()
                }
            }
            (true, false) => self.d.clone(),
            (false, _) => other.d.clone(),
        }
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt { d: self.join_d(rhs), a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt { d: self.join_d(rhs), a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let d = self.join_d(rhs);
        let dr = Rational::from(d.clone());
        let a = &self.a * &rhs.a + dr * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadExt { d, a, b }
    }
}

impl<'a> Div<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadExt) -> QuadExt {
        let inv = rhs.inv().expect("division by zero in Q(sqrt d)");
        self * &inv
    }
}

forward_ref_binop!([] Add, add for QuadExt);
forward_ref_binop!([] Sub, sub for QuadExt);
forward_ref_binop!([] Mul, mul for QuadExt);
forward_ref_binop!([] Div, div for QuadExt);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { d: self.d, a: -self.a, b: -self.b }
    }
}

impl Field for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(Rational::zero())
    }
    fn one() -> Self {
        QuadExt::rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // d is not a square, so the norm of a nonzero element is nonzero.
        let n = self.norm();
        let conj = self.conjugate();
        Some(QuadExt { d: self.d.clone(), a: &conj.a / &n, b: &conj.b / &n })
    }
    fn from_rational(r: &Rational) -> Self {
        QuadExt::rational(r.clone())
    }
    fn to_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b == 1 {
            write!(f, "sqrt({})", self.d)
        } else if self.b == -1 {
            write!(f, "-sqrt({})", self.d)
        } else {
            write!(f, "{}*sqrt({})", self.b, self.d)
        }
    }
}

impl FromStr for QuadExt {
    type Err = ExactError;

    /// Accepts `a`, `a+b*sqrt(d)`, `a-sqrt(d)`, `b*sqrt(d)`, `sqrt(d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = s.find("sqrt(") else {
            return Ok(QuadExt::rational(s.parse()?));
        };
        let bad = || ExactError::Parse(format!("not an element of Q(sqrt d): {s:?}"));
        let close = s[pos..].find(')').ok_or_else(bad)? + pos;
        if close != s.len() - 1 {
            return Err(bad());
        }
        let d: BigInt = s[pos + 5..close].parse().map_err(|_| bad())?;
        let prefix = &s[..pos];
        let prefix = prefix.strip_suffix('*').unwrap_or(prefix);
        // split "a±b" at the last sign that is not leading
        let split = prefix
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (a_txt, b_txt) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("", prefix),
        };
        let a = if a_txt.is_empty() { Rational::zero() } else { a_txt.parse()? };
        let b = match b_txt {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            t => t.parse()?,
        };
        QuadExt::new(d, a, b)
    }
}
