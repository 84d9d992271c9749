use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::{forward_ref_binop, Field};
use super::{Polynomial, Rational};

/// A reduced quotient of polynomials: `gcd(num, den) = 1`, `den` monic.
///
/// Two rational functions are equal exactly when their reduced pairs are.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction<K> {
    num: Polynomial<K>,
    den: Polynomial<K>,
}

impl<K: Field> RationalFunction<K> {
    /// `None` when `den` is zero.
    pub fn new(num: Polynomial<K>, den: Polynomial<K>) -> Option<Self> {
        den.leading()?;
        if num.is_zero() {
            return Some(Self::zero_rf());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let inv = den.leading().expect("nonzero denominator").inv().expect("nonzero leading coefficient");
        Some(RationalFunction { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Polynomial<K>) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// The parameter itself.
    pub fn identity() -> Self {
        Self::from_poly(Polynomial::identity())
    }

    fn zero_rf() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn num(&self) -> &Polynomial<K> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<K> {
        &self.den
    }

    /// Degree of the induced map of the projective line: `max(deg num, deg den)`.
    pub fn map_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, if the function is constant.
    pub fn constant_value(&self) -> Option<K> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &K) -> Option<K> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// `self(g)` for `g` in a field containing the coefficients; `None` if
    /// the denominator vanishes at `g`.
    pub fn compose_with<F: Field>(&self, g: &F, lift: impl Fn(&K) -> F) -> Option<F> {
        let eval = |p: &Polynomial<K>| p.coeffs().iter().rev().fold(F::zero(), |acc, c| acc * g + lift(c));
        let d = eval(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(eval(&self.num) / d)
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> RationalFunction<L> {
        RationalFunction::new(self.num.map(&f), self.den.map(&f)).expect("denominator maps to nonzero")
    }

    pub fn to_text(&self, var: &str) -> String {
        format!("({})/({})", self.num.to_text(var), self.den.to_text(var))
    }
}

impl RationalFunction<Rational> {
    pub fn lift<F: Field>(&self) -> RationalFunction<F> {
        self.map(F::from_rational)
    }
}

impl<'a, K: Field> Add<&'a RationalFunction<K>> for &'a RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn add(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        // a/b + c and a + c/d are already reduced
        if rhs.den.is_one_poly() {
            return RationalFunction { num: &self.num + &(&rhs.num * &self.den), den: self.den.clone() };
        }
        if self.den.is_one_poly() {
            return RationalFunction { num: &(&self.num * &rhs.den) + &rhs.num, den: rhs.den.clone() };
        }
        RationalFunction::new(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den).unwrap()
    }
}

impl<'a, K: Field> Sub<&'a RationalFunction<K>> for &'a RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn sub(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num - &rhs.num, self.den.clone()).unwrap();
        }
        // a/b - c and a - c/d are already reduced
        if rhs.den.is_one_poly() {
            return RationalFunction { num: &self.num - &(&rhs.num * &self.den), den: self.den.clone() };
        }
        if self.den.is_one_poly() {
            return RationalFunction { num: &(&self.num * &rhs.den) - &rhs.num, den: rhs.den.clone() };
        }
        RationalFunction::new(&self.num * &rhs.den - &rhs.num * &self.den, &self.den * &rhs.den).unwrap()
    }
}

impl<'a, K: Field> Mul<&'a RationalFunction<K>> for &'a RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn mul(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RationalFunction::zero_rf();
        }
        // cross-cancel first to keep the intermediate gcd small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1).unwrap() * &rhs.num.exact_div(&g2).unwrap();
        let den = &self.den.exact_div(&g2).unwrap() * &rhs.den.exact_div(&g1).unwrap();
        let inv = den.leading().unwrap().inv().unwrap();
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl<'a, K: Field> Div<&'a RationalFunction<K>> for &'a RationalFunction<K> {
    type Output = RationalFunction<K>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RationalFunction<K>) -> RationalFunction<K> {
        let inv = rhs.inv().expect("division by the zero rational function");
        self * &inv
    }
}

forward_ref_binop!([K: Field] Add, add for RationalFunction<K>);
forward_ref_binop!([K: Field] Sub, sub for RationalFunction<K>);
forward_ref_binop!([K: Field] Mul, mul for RationalFunction<K>);
forward_ref_binop!([K: Field] Div, div for RationalFunction<K>);

impl<K: Field> Neg for RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn neg(self) -> RationalFunction<K> {
        RationalFunction { num: -self.num, den: self.den }
    }
}

impl<K: Field> Field for RationalFunction<K> {
    fn zero() -> Self {
        Self::zero_rf()
    }
    fn one() -> Self {
        Self::constant(K::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let inv = self.num.leading().unwrap().inv().unwrap();
        Some(RationalFunction { num: self.den.scale(&inv), den: self.num.scale(&inv) })
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(K::from_rational(r))
    }
    fn to_rational(&self) -> Option<Rational> {
        self.constant_value().and_then(|c| c.to_rational())
    }
}

impl<K: Field> fmt::Display for RationalFunction<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("t"))
    }
}
