//! Curves of rank at least one from a point on a fiber conic.
//!
//! A rational point `(x0, y0, t0)` on a smooth fiber conic gives a degree 2
//! parametrization `t = q(u)`, `y = y(u)` of that conic. Every curve
//! `E_{q(u)}` then carries the point `(x0, y(u))`, and over `Q` a point that
//! survives `n P != O` for all `n <= 12` has infinite order.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::conics::parametrize;
use crate::curves::{torsion_order_bounded, CubicCurve, CurvePoint};
use crate::exact::{Field, QFunc, Rational};
use crate::multisection::{doubling_analysis, DoublingBranch};
use crate::surface::QuadraticFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rank1Error {
    #[error("({}, {}, {}) is not on the surface", .0[0], .0[1], .0[2])]
    PointNotOnSurface(Box<[Rational; 3]>),
    #[error("fiber conic at x = {x0} is singular")]
    SingularFiber { x0: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecializationDefect {
    LeadingVanishes,
    Singular,
}

/// `E_t0: y^2 = a3(t0) x^3 + ... + a0(t0)`.
pub fn specialize_curve(f: &QuadraticFamily, t0: &Rational) -> Result<CubicCurve<Rational>, SpecializationDefect> {
    let [c0, c1, c2, c3] = f.specialize(t0);
    let curve = CubicCurve::new(c3, c2, c1, c0).map_err(|_| SpecializationDefect::LeadingVanishes)?;
    if curve.is_nonsingular() {
        Ok(curve)
    } else {
        Err(SpecializationDefect::Singular)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `n P != O` for `1 <= n <= 12`.
    NonTorsion,
    Torsion { order: u32 },
    Defect { defect: SpecializationDefect },
    /// `q` has a pole at this `u`.
    Pole,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankOneSample {
    pub u: Rational,
    pub t: Option<Rational>,
    pub x: Rational,
    pub y: Option<Rational>,
    pub certificate: Certificate,
}

impl RankOneSample {
    pub fn is_certified(&self) -> bool {
        self.certificate == Certificate::NonTorsion
    }
}

fn func_text<S: Serializer>(f: &QFunc, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_text("u"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankOneFamily {
    pub x0: Rational,
    /// `t = q(u)`, of map degree 2.
    #[serde(serialize_with = "func_text")]
    pub q_of: QFunc,
    #[serde(serialize_with = "func_text")]
    pub y_of: QFunc,
    /// `y(u)^2 = a3(q(u)) x0^3 + ... + a0(q(u))` as rational functions.
    pub identity_holds: bool,
    /// Certified samples, in increasing `u`.
    pub samples: Vec<RankOneSample>,
    /// Poles, defective specializations and torsion points, in increasing `u`.
    pub exceptions: Vec<RankOneSample>,
}

/// Default `u` range.
pub const DEFAULT_U_RANGE: RangeInclusive<i64> = -20..=20;

fn certify(f: &QuadraticFamily, x0: &Rational, q_of: &QFunc, y_of: &QFunc, u: Rational) -> RankOneSample {
    let (Some(t), Some(y)) = (q_of.eval(&u), y_of.eval(&u)) else {
        return RankOneSample { u, t: None, x: x0.clone(), y: None, certificate: Certificate::Pole };
    };
    let certificate = match specialize_curve(f, &t) {
        Err(defect) => Certificate::Defect { defect },
        Ok(curve) => match torsion_order_bounded(&curve, &CurvePoint::affine(x0.clone(), y.clone())) {
            Ok(None) => Certificate::NonTorsion,
            Ok(Some(order)) => Certificate::Torsion { order },
            Err(_) => Certificate::Defect { defect: SpecializationDefect::Singular },
        },
    };
    RankOneSample { u, t: Some(t), x: x0.clone(), y: Some(y), certificate }
}

/// Parametrizes the fiber conic at `x0` through `(y0, t0)` and certifies
/// `(x0, y(u))` on `E_{q(u)}` for every integer `u` in `u_range`.
pub fn rank_one_family(
    f: &QuadraticFamily,
    (x0, y0, t0): (&Rational, &Rational, &Rational),
    u_range: RangeInclusive<i64>,
) -> Result<RankOneFamily, Rank1Error> {
    if !f.contains_point(x0, y0, t0) {
        return Err(Rank1Error::PointNotOnSurface(Box::new([x0.clone(), y0.clone(), t0.clone()])));
    }
    let conic = f.fiber_conic(x0);
    let param = parametrize(&conic, (y0.clone(), t0.clone())).map_err(|_| Rank1Error::SingularFiber { x0: x0.clone() })?;
    let (q_of, y_of) = (param.t_of, param.y_of);
    let identity_holds = y_of.square() == f.rhs(&QFunc::constant(x0.clone()), &q_of);
    let all: Vec<RankOneSample> = u_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|u| certify(f, x0, &q_of, &y_of, Rational::from(u)))
        .collect();
    let (samples, exceptions) = all.into_iter().partition(RankOneSample::is_certified);
    Ok(RankOneFamily { x0: x0.clone(), q_of, y_of, identity_holds, samples, exceptions })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionShape {
    /// Translated `a0` vanishes: every point of the fiber has `y = 0`.
    TwoTorsion,
    /// `a3 x^3 + a0 (beta x + 1)^2` with `beta != 0`.
    CubePlusSquare,
    /// `a3 x^3 + a0`.
    CubePlusConstant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionFiber {
    pub x0: Rational,
    pub shape: TorsionShape,
    pub order: u32,
}

/// Fibers in `xs` made of 2- or 3-torsion points.
pub fn torsion_fiber_scan(f: &QuadraticFamily, xs: &[Rational]) -> Vec<TorsionFiber> {
    xs.iter()
        .filter_map(|x0| {
            if f.translated(x0)[0].is_zero() {
                return Some(TorsionFiber { x0: x0.clone(), shape: TorsionShape::TwoTorsion, order: 2 });
            }
            let shape = match doubling_analysis(f, x0).ok()?.branch {
                DoublingBranch::Exceptional7 => TorsionShape::CubePlusSquare,
                DoublingBranch::Exceptional8 => TorsionShape::CubePlusConstant,
                _ => return None,
            };
            Some(TorsionFiber { x0: x0.clone(), shape, order: 3 })
        })
        .collect()
}

/// Integers `lo..=hi` as rationals.
pub fn integer_range(range: RangeInclusive<i64>) -> Vec<Rational> {
    range.map(Rational::from).collect()
}
