//! Affine conics `y^2 = alpha t^2 + beta t + gamma`, the fibers of the conic
//! bundle.
//!
//! Point search is a bounded brute force preceded by cheap local tests
//! (real place, modulo 16, modulo `p^2` for small odd `p` dividing the
//! discriminant). A reported obstruction is a proof that no rational point
//! exists; "unknown" only means the search bound was too small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{exact_isqrt, Field, Polynomial, QuadExt, Rational, RationalFunction};

/// Odd primes up to this bound dividing the discriminant get a mod `p^2` test.
pub const LOCAL_PRIME_BOUND: u64 = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConicError {
    #[error("conic is singular")]
    Singular,
    #[error("base point is not on the conic")]
    NotOnConic,
    #[error("right-hand side vanishes at every sampled t")]
    NoNonzeroValue,
    #[error("conic is smooth, not a pair of lines")]
    NotALinePair,
}

/// `y^2 = alpha t^2 + beta t + gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberConic<K> {
    pub alpha: K,
    pub beta: K,
    pub gamma: K,
}

impl<K: Field> FiberConic<K> {
    pub fn new(alpha: K, beta: K, gamma: K) -> Self {
        FiberConic { alpha, beta, gamma }
    }

    pub fn rhs(&self, t: &K) -> K {
        (self.alpha.clone() * t + &self.beta) * t + &self.gamma
    }

    pub fn contains(&self, y: &K, t: &K) -> bool {
        y.square() == self.rhs(t)
    }

    pub fn discriminant(&self) -> K {
        self.beta.square() - K::from_i64(4) * &self.alpha * &self.gamma
    }

    pub fn is_smooth(&self) -> bool {
        (!self.alpha.is_zero() || !self.beta.is_zero()) && !self.discriminant().is_zero()
    }
}

/// Rational parametrization by the pencil of lines through a base point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicParam<K> {
    pub y_of: RationalFunction<K>,
    pub t_of: RationalFunction<K>,
    pub base_point: (K, K),
}

/// Lines `y = y0 + s (t - t0)` through `(y0, t0)`; the second intersection is
/// `t = t0 + (2 alpha t0 + beta - 2 y0 s) / (s^2 - alpha)`.
///
/// Every point other than the base point is reached at a finite `s`, except
/// the one on the line `t = t0`, which is the limit `s -> infinity`.
pub fn parametrize<K: Field>(conic: &FiberConic<K>, base: (K, K)) -> Result<ConicParam<K>, ConicError> {
    if !conic.is_smooth() {
        return Err(ConicError::Singular);
    }
    let (y0, t0) = base;
    if !conic.contains(&y0, &t0) {
        return Err(ConicError::NotOnConic);
    }
    let two = K::from_i64(2);
    let num = Polynomial::new(vec![
        two.clone() * &conic.alpha * &t0 + &conic.beta,
        -(two * &y0),
    ]);
    let den = Polynomial::new(vec![-conic.alpha.clone(), K::zero(), K::one()]);
    let tau = RationalFunction::new(num, den).expect("s^2 - alpha is nonzero");
    let s = RationalFunction::identity();
    let t_of = RationalFunction::constant(t0.clone()) + &tau;
    let y_of = RationalFunction::constant(y0.clone()) + s * tau;
    Ok(ConicParam { y_of, t_of, base_point: (y0, t0) })
}

/// Parametrization `t = s` of the line through `(y0, t0)` on a degenerate
/// conic: `y^2 = gamma` (lines `y = +-y0`) or `y^2 = alpha (t - r)^2` (lines
/// through the double point `t = r`, which must not be the base point).
pub fn parametrize_line<K: Field>(conic: &FiberConic<K>, base: (K, K)) -> Result<ConicParam<K>, ConicError> {
    if conic.is_smooth() {
        return Err(ConicError::NotALinePair);
    }
    let (y0, t0) = base;
    if !conic.contains(&y0, &t0) {
        return Err(ConicError::NotOnConic);
    }
    let s = RationalFunction::identity();
    let y_of = if conic.alpha.is_zero() {
        if y0.is_zero() {
            return Err(ConicError::Singular);
        }
        RationalFunction::constant(y0.clone())
    } else {
        let r = -(conic.beta.clone() / (K::from_i64(2) * &conic.alpha));
        let offset = t0.clone() - &r;
        if offset.is_zero() {
            return Err(ConicError::Singular);
        }
        let slope = y0.clone() / &offset;
        RationalFunction::constant(slope.clone()) * (s.clone() - RationalFunction::constant(r))
    };
    Ok(ConicParam { y_of, t_of: s, base_point: (y0, t0) })
}

/// A `t` off the double point of a degenerate conic whose lines are not
/// vertical; `None` for smooth or identically vanishing right-hand sides.
pub fn line_sample_t(conic: &FiberConic<Rational>) -> Option<Rational> {
    if conic.is_smooth() || (conic.alpha.is_zero() && conic.gamma.is_zero()) {
        return None;
    }
    if conic.alpha.is_zero() {
        Some(Rational::zero())
    } else {
        Some(Rational::one() - conic.beta.clone() / (Rational::from(2) * &conic.alpha))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "modulus", rename_all = "snake_case")]
pub enum Obstruction {
    /// No real points.
    Real,
    /// No primitive solution modulo this modulus.
    Modulus(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PointSearch {
    Found { y: Rational, t: Rational },
    Obstructed { witness: Obstruction },
    Unknown { bound: u64 },
}

impl PointSearch {
    pub fn point(&self) -> Option<(Rational, Rational)> {
        match self {
            PointSearch::Found { y, t } => Some((y.clone(), t.clone())),
            _ => None,
        }
    }
}

// y^2 = alpha t^2 + beta t + gamma scaled to Y^2 = A T^2 + B T W + C W^2 over Z.
struct IntegralForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    scale: BigInt,
}

impl IntegralForm {
    fn of(conic: &FiberConic<Rational>) -> Self {
        let scale = [&conic.alpha, &conic.beta, &conic.gamma]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let s2 = Rational::from(&scale * &scale);
        let int = |r: &Rational| {
            let v = r.clone() * &s2;
            debug_assert!(v.is_integer());
            v.numer().clone()
        };
        IntegralForm { a: int(&conic.alpha), b: int(&conic.beta), c: int(&conic.gamma), scale }
    }

    fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    fn value(&self, p: &BigInt, q: &BigInt) -> BigInt {
        &self.a * p * p + &self.b * p * q + &self.c * q * q
    }

    fn has_primitive_solution_mod(&self, p: u64, m: u64) -> bool {
        let red = |x: &BigInt| x.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        let (a, b, c) = (red(&self.a), red(&self.b), red(&self.c));
        let mut squares = vec![false; m as usize];
        for y in 0..m {
            squares[(y * y % m) as usize] = true;
        }
        for t in 0..m {
            for w in 0..m {
                if t % p == 0 && w % p == 0 {
                    continue;
                }
                let v = (a * t % m * t + b * t % m * w + c * w % m * w) % m;
                if squares[v as usize] {
                    return true;
                }
            }
        }
        false
    }
}

fn small_odd_primes(bound: u64) -> impl Iterator<Item = u64> {
    (3..=bound).step_by(2).filter(|&n| (3..n).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// A local reason for the conic to have no rational point, if one of the
/// cheap tests finds it.
pub fn local_obstruction(conic: &FiberConic<Rational>) -> Option<Obstruction> {
    if !conic.is_smooth() {
        return None;
    }
    let form = IntegralForm::of(conic);
    let disc = form.discriminant();
    if form.a.is_negative() && disc.is_negative() {
        return Some(Obstruction::Real);
    }
    if !form.has_primitive_solution_mod(2, 16) {
        return Some(Obstruction::Modulus(16));
    }
    for p in small_odd_primes(LOCAL_PRIME_BOUND) {
        if disc.is_multiple_of(&BigInt::from(p)) && !form.has_primitive_solution_mod(p, p * p) {
            return Some(Obstruction::Modulus(p * p));
        }
    }
    None
}

/// Searches `t = p/q` with `max(|p|, q) <= height_bound`, ordered by
/// `(q, |p|, sign)` with the positive sign first; the returned `y` is
/// non-negative.
pub fn find_point(conic: &FiberConic<Rational>, height_bound: u64) -> PointSearch {
    if let Some(witness) = local_obstruction(conic) {
        return PointSearch::Obstructed { witness };
    }
    let form = IntegralForm::of(conic);
    for q in 1..=height_bound {
        let qb = BigInt::from(q);
        for p in 0..=height_bound {
            if p.gcd(&q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                if p == 0 && sign < 0 {
                    continue;
                }
                let pb = BigInt::from(p) * sign;
                if let Some(root) = exact_isqrt(&form.value(&pb, &qb)) {
                    let t = Rational::new(pb, qb.clone());
                    let y = Rational::new(root, &form.scale * &qb);
                    debug_assert!(conic.contains(&y, &t));
                    return PointSearch::Found { y, t };
                }
            }
        }
    }
    PointSearch::Unknown { bound: height_bound }
}

/// A point over `Q(sqrt d)` with rational `t`; `d = 1` marks a rational point.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionPoint {
    pub d: BigInt,
    pub y: QuadExt,
    pub t: Rational,
}

/// The point `(sqrt(rhs(t0)), t0)` over the field it generates.
///
/// Returns `None` when the right-hand side vanishes at `t0`.
pub fn quadratic_point_at(conic: &FiberConic<Rational>, t0: &Rational) -> Option<ExtensionPoint> {
    let v = conic.rhs(t0);
    if v.is_zero() {
        return None;
    }
    let (d, e) = v.squarefree_decomposition();
    let y = if d.is_one() {
        QuadExt::rational(e)
    } else {
        QuadExt::scaled_sqrt(d.clone(), e).expect("square-free kernel")
    };
    Some(ExtensionPoint { d, y, t: t0.clone() })
}

/// Tries `t0 = 0, 1, -1, 2, -2, ...` and returns the first point with a
/// nonzero right-hand side.
pub fn find_point_quadratic_ext(conic: &FiberConic<Rational>) -> Result<ExtensionPoint, ConicError> {
    if !conic.is_smooth() {
        return Err(ConicError::Singular);
    }
    (0..8i64)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .find_map(|t0| quadratic_point_at(conic, &Rational::from(t0)))
        .ok_or(ConicError::NoNonzeroValue)
}
