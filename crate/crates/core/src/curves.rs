//! Genus one models over an arbitrary field and their group law.
//!
//! Cubic models are `z^2 = c3 x^3 + c2 x^2 + c1 x + c0` with identity the
//! point at infinity `O`. The group law is the chord-tangent rule: the sum
//! `P + Q` is the negation of the third intersection of the line `PQ` with
//! the curve, and `-(x, z) = (x, -z)`. Computation happens on the monic model
//! `Z^2 = X^3 + c2 X^2 + c1 c3 X + c0 c3^2` (`X = c3 x`, `Z = c3 z`) and is
//! transported back.
//!
//! Everything is generic over [`Field`], so the same code runs over `Q`,
//! `Q(sqrt d)` and function fields `Q(s)`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{Field, Rational};

/// Largest torsion order of a rational point on an elliptic curve over `Q`.
pub const MAZUR_BOUND: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("leading coefficient vanishes")]
    LeadingVanishes,
    #[error("curve is singular (zero discriminant); group law refused")]
    Singular,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("fiber point at x = 0 is 2-torsion or the fiber is degenerate (4*a3*a0 = 0)")]
    TwoTorsionOrDegenerate,
    #[error("-p' lies at infinity (zero denominator)")]
    PPrimeAtInfinity,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint<K> {
    Infinity,
    Affine { x: K, z: K },
}

impl<K: Field> CurvePoint<K> {
    pub fn affine(x: K, z: K) -> Self {
        CurvePoint::Affine { x, z }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&K> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn z(&self) -> Option<&K> {
        match self {
            CurvePoint::Affine { z, .. } => Some(z),
            CurvePoint::Infinity => None,
        }
    }

    pub fn negate(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, z } => CurvePoint::Affine { x: x.clone(), z: -z.clone() },
        }
    }
}

impl<K: Field> Serialize for CurvePoint<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => serializer.serialize_str("O"),
            CurvePoint::Affine { x, z } => {
                let mut s = serializer.serialize_struct("CurvePoint", 2)?;
                s.serialize_field("x", &x.to_string())?;
                s.serialize_field("z", &z.to_string())?;
                s.end()
            }
        }
    }
}

/// `z^2 = c3 x^3 + c2 x^2 + c1 x + c0` with `c3 != 0`.
///
/// Singular cubics can be built (specializations of a family hit them) but
/// refuse every group operation.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicCurve<K> {
    c3: K,
    c2: K,
    c1: K,
    c0: K,
}

impl<K: Field> CubicCurve<K> {
    pub fn new(c3: K, c2: K, c1: K, c0: K) -> Result<Self, CurveError> {
        if c3.is_zero() {
            return Err(CurveError::LeadingVanishes);
        }
        Ok(CubicCurve { c3, c2, c1, c0 })
    }

    /// Coefficients `[c3, c2, c1, c0]`.
    pub fn coeffs(&self) -> [&K; 4] {
        [&self.c3, &self.c2, &self.c1, &self.c0]
    }

    pub fn rhs(&self, x: &K) -> K {
        ((self.c3.clone() * x + &self.c2) * x + &self.c1) * x + &self.c0
    }

    /// Discriminant of the cubic polynomial on the right-hand side.
    pub fn discriminant(&self) -> K {
        let (a, b, c, d) = (&self.c3, &self.c2, &self.c1, &self.c0);
        let k = |n: i64| K::from_i64(n);
        k(18) * a * b * c * d - k(4) * b.pow(3) * d + b.square() * c.square() - k(4) * a * c.pow(3)
            - k(27) * a.square() * d.square()
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.discriminant().is_zero()
    }

    pub fn contains(&self, p: &CurvePoint<K>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, z } => z.square() == self.rhs(x),
        }
    }

    pub fn to_weierstrass(&self) -> WeierstrassModel<K> {
        let c3 = self.c3.clone();
        let curve = CubicCurve {
            c3: K::one(),
            c2: self.c2.clone(),
            c1: self.c1.clone() * &c3,
            c0: self.c0.clone() * &c3 * &c3,
        };
        WeierstrassModel { curve, scale: c3 }
    }

    fn check(&self, points: &[&CurvePoint<K>]) -> Result<(), CurveError> {
        if !self.is_nonsingular() {
            return Err(CurveError::Singular);
        }
        if points.iter().any(|p| !self.contains(p)) {
            return Err(CurveError::NotOnCurve);
        }
        Ok(())
    }

    pub fn add(&self, p: &CurvePoint<K>, q: &CurvePoint<K>) -> Result<CurvePoint<K>, CurveError> {
        self.check(&[p, q])?;
        let w = self.to_weierstrass();
        let sum = add_monic(&w.curve, &w.forward(p), &w.forward(q));
        Ok(w.backward(&sum))
    }

    pub fn double(&self, p: &CurvePoint<K>) -> Result<CurvePoint<K>, CurveError> {
        self.add(p, p)
    }

    /// `n * P` by double-and-add.
    pub fn multiply(&self, n: i64, p: &CurvePoint<K>) -> Result<CurvePoint<K>, CurveError> {
        self.check(&[p])?;
        let w = self.to_weierstrass();
        let base = w.forward(p);
        let base = if n < 0 { base.negate() } else { base };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = add_monic(&w.curve, &acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = add_monic(&w.curve, &pow, &pow);
            }
        }
        Ok(w.backward(&acc))
    }
}

impl<K: Field> Serialize for CubicCurve<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CubicCurve", 4)?;
        s.serialize_field("c3", &self.c3.to_string())?;
        s.serialize_field("c2", &self.c2.to_string())?;
        s.serialize_field("c1", &self.c1.to_string())?;
        s.serialize_field("c0", &self.c0.to_string())?;
        s.end()
    }
}

/// Monic model of a cubic curve with the scaling `(x, z) -> (c3 x, c3 z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassModel<K> {
    pub curve: CubicCurve<K>,
    pub scale: K,
}

impl<K: Field> WeierstrassModel<K> {
    pub fn forward(&self, p: &CurvePoint<K>) -> CurvePoint<K> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, z } => {
                CurvePoint::Affine { x: x.clone() * &self.scale, z: z.clone() * &self.scale }
            }
        }
    }

    pub fn backward(&self, p: &CurvePoint<K>) -> CurvePoint<K> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, z } => {
                CurvePoint::Affine { x: x.clone() / &self.scale, z: z.clone() / &self.scale }
            }
        }
    }
}

// Chord-tangent addition on z^2 = x^3 + a x^2 + b x + c; inputs are on the curve.
fn add_monic<K: Field>(curve: &CubicCurve<K>, p: &CurvePoint<K>, q: &CurvePoint<K>) -> CurvePoint<K> {
    let (x1, z1, x2, z2) = match (p, q) {
        (CurvePoint::Infinity, _) => return q.clone(),
        (_, CurvePoint::Infinity) => return p.clone(),
        (CurvePoint::Affine { x: x1, z: z1 }, CurvePoint::Affine { x: x2, z: z2 }) => (x1, z1, x2, z2),
    };
    let slope = if x1 != x2 {
        (z2.clone() - z1) / (x2.clone() - x1)
    } else if (z1.clone() + z2).is_zero() {
        return CurvePoint::Infinity;
    } else {
        // tangent: (3x^2 + 2a x + b) / (2z)
        let num = K::from_i64(3) * x1.square() + K::from_i64(2) * &curve.c2 * x1 + &curve.c1;
        num / (K::from_i64(2) * z1)
    };
    let x3 = slope.square() - &curve.c2 - x1 - x2;
    let z3 = -(z1.clone() + slope * (x3.clone() - x1));
    CurvePoint::Affine { x: x3, z: z3 }
}

/// `x`-coordinate of `2 * (0, z0)` on `z^2 = a3 x^3 + a2 x^2 + a1 x + a0`:
/// `(a1^2 - 4 a2 a0) / (4 a3 a0)`.
pub fn x_double_at_zero<K: Field>(a3: &K, a2: &K, a1: &K, a0: &K) -> Result<K, CurveError> {
    let den = K::from_i64(4) * a3 * a0;
    let num = a1.square() - K::from_i64(4) * a2 * a0;
    num.checked_div(&den).ok_or(CurveError::TwoTorsionOrDegenerate)
}

/// `2 * (0, z0)` where `z0^2 = a0`: the tangent at `(0, z0)` has slope
/// `a1 / (2 z0)`, and the image is the negated third intersection.
pub fn double_at_zero<K: Field>(a3: &K, a2: &K, a1: &K, a0: &K, z0: &K) -> Result<CurvePoint<K>, CurveError> {
    if z0.is_zero() {
        return Err(CurveError::TwoTorsionOrDegenerate);
    }
    if z0.square() != *a0 {
        return Err(CurveError::NotOnCurve);
    }
    let x = x_double_at_zero(a3, a2, a1, a0)?;
    let slope = a1.clone() / (K::from_i64(2) * z0);
    let z = -(z0.clone() + slope * &x);
    Ok(CurvePoint::Affine { x, z })
}

/// `z^2 = x^4 + a3 x^3 + a2 x^2 + a1 x + a0`.
///
/// It has two points at infinity: `p*` on the branch `z ~ x^2`, used as the
/// identity, and `p'` on the branch `z ~ -x^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticCurve<K> {
    pub a3: K,
    pub a2: K,
    pub a1: K,
    pub a0: K,
}

/// The parabola `z = x^2 + a3 x / 2 + lambda` through `p*`, `p'` and `-p'`.
#[derive(Clone, Debug, PartialEq)]
pub struct BertiniStep<K> {
    pub lambda: K,
    pub x_img: K,
    pub z_img: K,
}

impl<K: Field> QuarticCurve<K> {
    pub fn new(a3: K, a2: K, a1: K, a0: K) -> Self {
        QuarticCurve { a3, a2, a1, a0 }
    }

    pub fn rhs(&self, x: &K) -> K {
        (((x.clone() + &self.a3) * x + &self.a2) * x + &self.a1) * x + &self.a0
    }

    pub fn contains(&self, x: &K, z: &K) -> bool {
        z.square() == self.rhs(x)
    }

    /// Affine coordinates of `-p'`.
    ///
    /// `lambda = (4 a2 - a3^2) / 8` is the unique value making
    /// `(x^2 + a3 x / 2 + lambda)^2 - quartic` linear in `x`; its root is
    /// `((4a2 - a3^2)^2 - 64 a0) / (64 a1 - 8 a3 (4 a2 - a3^2))`.
    pub fn bertini_image_of_pprime(&self) -> Result<BertiniStep<K>, CurveError> {
        let k = |n: i64| K::from_i64(n);
        let e = k(4) * &self.a2 - self.a3.square();
        let lambda = e.clone() / k(8);
        let num = e.square() - k(64) * &self.a0;
        let den = k(64) * &self.a1 - k(8) * &self.a3 * &e;
        let x_img = num.checked_div(&den).ok_or(CurveError::PPrimeAtInfinity)?;
        let z_img = x_img.square() + self.a3.clone() * &x_img / k(2) + &lambda;
        Ok(BertiniStep { lambda, x_img, z_img })
    }
}

/// Least `n <= 12` with `n P = O`, or `None` when `P` has infinite order.
///
/// Over `Q` a torsion point has order at most [`MAZUR_BOUND`], so `None`
/// certifies a point of infinite order.
pub fn torsion_order_bounded(curve: &CubicCurve<Rational>, p: &CurvePoint<Rational>) -> Result<Option<u32>, CurveError> {
    curve.check(&[p])?;
    let w = curve.to_weierstrass();
    let base = w.forward(p);
    let mut acc = base.clone();
    for n in 1..=MAZUR_BOUND {
        if acc.is_infinity() {
            return Ok(Some(n));
        }
        acc = add_monic(&w.curve, &acc, &base);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{QFunc, QPoly};

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn curve(c: [i64; 4]) -> CubicCurve<Rational> {
        CubicCurve::new(r(c[0]), r(c[1]), r(c[2]), r(c[3])).unwrap()
    }

    fn pt(x: i64, z: i64) -> CurvePoint<Rational> {
        CurvePoint::affine(r(x), r(z))
    }

    #[test]
    fn weierstrass_transforms() {
        let w = curve([1, 0, 0, 1]).to_weierstrass();
        assert_eq!(w.curve, curve([1, 0, 0, 1]));
        assert_eq!(w.forward(&pt(2, 3)), pt(2, 3));

        let w = curve([2, 0, 0, 2]).to_weierstrass();
        assert_eq!(w.curve, curve([1, 0, 0, 8]));
        assert_eq!(w.forward(&pt(1, 2)), pt(2, 4));

        let w = curve([4, 1, 0, 1]).to_weierstrass();
        assert_eq!(w.curve, curve([1, 1, 0, 16]));
        let p = CurvePoint::affine(Rational::new(1, 2), Rational::new(3, 2));
        assert_eq!(w.backward(&w.forward(&p)), p);
    }

    #[test]
    fn group_law_examples() {
        let e = curve([1, 0, 0, 1]);
        assert_eq!(e.add(&pt(2, 3), &CurvePoint::Infinity).unwrap(), pt(2, 3));
        assert_eq!(e.add(&pt(2, 3), &pt(0, 1)).unwrap(), pt(-1, 0));
        assert_eq!(e.add(&pt(2, 3), &pt(2, -3)).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.multiply(0, &pt(0, 1)).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.multiply(2, &pt(0, 1)).unwrap(), pt(0, -1));
        assert_eq!(e.multiply(3, &pt(0, 1)).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.multiply(-2, &pt(2, 3)).unwrap(), e.multiply(2, &pt(2, 3)).unwrap().negate());
    }

    #[test]
    fn non_monic_group_law() {
        // 2 z^2 = ... : z^2 = 2x^3 + 2 has (1, 2)
        let e = curve([2, 0, 0, 2]);
        let p = pt(1, 2);
        let two_p = e.double(&p).unwrap();
        assert!(e.contains(&two_p));
        assert_eq!(e.add(&two_p, &p.negate()).unwrap(), p);
    }

    #[test]
    fn singular_curves_refuse() {
        let e = curve([1, 0, 0, 0]);
        assert!(!e.is_nonsingular());
        assert_eq!(e.add(&pt(1, 1), &pt(1, -1)), Err(CurveError::Singular));
        assert_eq!(CubicCurve::new(r(0), r(1), r(0), r(1)), Err(CurveError::LeadingVanishes));
        assert_eq!(curve([1, 0, 0, 1]).add(&pt(1, 1), &pt(0, 1)), Err(CurveError::NotOnCurve));
    }

    #[test]
    fn doubling_formula() {
        assert_eq!(x_double_at_zero(&r(1), &r(0), &r(0), &r(1)).unwrap(), r(0));
        assert_eq!(x_double_at_zero(&r(1), &r(0), &r(2), &r(1)).unwrap(), r(1));
        assert_eq!(x_double_at_zero(&r(1), &r(0), &r(2), &r(0)), Err(CurveError::TwoTorsionOrDegenerate));
        assert_eq!(double_at_zero(&r(1), &r(0), &r(0), &r(1), &r(1)).unwrap(), pt(0, -1));
        assert_eq!(double_at_zero(&r(1), &r(0), &r(2), &r(1), &r(1)).unwrap(), pt(1, -2));
        assert_eq!(double_at_zero(&r(1), &r(0), &r(0), &r(1), &r(-1)).unwrap(), pt(0, 1));
        assert_eq!(curve([1, 0, 2, 1]).multiply(2, &pt(0, 1)).unwrap(), pt(1, -2));
    }

    #[test]
    fn bertini_examples() {
        let q = QuarticCurve::new(r(0), r(0), r(1), r(0));
        let step = q.bertini_image_of_pprime().unwrap();
        assert_eq!(step, BertiniStep { lambda: r(0), x_img: r(0), z_img: r(0) });
        assert!(q.contains(&step.x_img, &step.z_img));

        let q = QuarticCurve::new(r(0), r(0), r(0), r(-1));
        assert_eq!(q.bertini_image_of_pprime(), Err(CurveError::PPrimeAtInfinity));

        // a3 = u^2 over Q(u)
        let u2 = QFunc::from_poly(QPoly::from_i64s(&[0, 0, 1]));
        let q = QuarticCurve::new(u2, QFunc::zero(), QFunc::zero(), QFunc::one());
        let step = q.bertini_image_of_pprime().unwrap();
        let expected = QFunc::new(
            QPoly::from_i64s(&[-64, 0, 0, 0, 0, 0, 0, 0, 1]),
            QPoly::monomial(r(8), 6),
        )
        .unwrap();
        assert_eq!(step.x_img, expected);
        assert!(q.contains(&step.x_img, &step.z_img));
    }

    #[test]
    fn torsion_orders() {
        let e = curve([1, 0, 0, 1]);
        assert_eq!(torsion_order_bounded(&e, &CurvePoint::Infinity).unwrap(), Some(1));
        assert_eq!(torsion_order_bounded(&e, &pt(2, 3)).unwrap(), Some(6));
        assert_eq!(torsion_order_bounded(&e, &pt(-1, 0)).unwrap(), Some(2));
        assert_eq!(torsion_order_bounded(&curve([1, 0, 0, -2]), &pt(3, 5)).unwrap(), None);
    }
}
