//! Rational multisections `s -> (x(s), z(s), u(s))` of the surface.
//!
//! Two constructions are provided:
//!
//! - for quartic families `z^2 = x^4 + a3(u) x^3 + ... + a0(u)` with
//!   `deg a3 = 2`, the image of the second point at infinity under the
//!   parabola trick ([`bertini_multisection`]), a section with `u` itself as
//!   parameter;
//! - for cubic families, doubling the points of a rational fiber conic
//!   ([`doubling_multisection`]), with a decision tree for the fibers where
//!   doubling collapses to a constant `x`.
//!
//! All algebra happens in the function field `K(s)`; a multisection is
//! accepted only after `z^2 = rhs(x, u)` has been checked as an identity of
//! rational functions.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::conics::{
    find_point, find_point_quadratic_ext, line_sample_t, parametrize, parametrize_line, quadratic_point_at, ConicError,
    ConicParam, ExtensionPoint, FiberConic, PointSearch,
};
use crate::curves::{double_at_zero, CubicCurve, CurveError, CurvePoint, QuarticCurve};
use crate::exact::{
    parse_rational_function, rational_poly_serde, ExactError, Field, QFunc, QPoly, QuadExt, Rational, RationalFunction,
};
use crate::surface::{FamilyError, QuadraticFamily};

/// Default number of alternative fibers tried when doubling collapses.
pub const DEFAULT_FALLBACK_LIMIT: usize = 20;
/// Bound on chained moves to another fiber.
pub const DEFAULT_RETRY_LIMIT: usize = 8;
/// Degree of the multisections the constructions aim for.
pub const TARGET_DEGREE: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultisectionError {
    #[error("the parabola construction degenerates: 64 a1 - 8 a3 (4 a2 - a3^2) vanishes identically")]
    NoParabolaSection,
    #[error("quartic family needs deg a3 = 2 and deg ai <= 2; a{index} has degree {degree:?}")]
    QuarticDegree { index: usize, degree: Option<usize> },
    #[error("fiber x = {x0} lies in the branch locus (translated a0 vanishes)")]
    BadFiber { x0: Rational },
    #[error("fiber x = {x0}: doubling is constant but {reason}; the input is not a smooth minimal model")]
    ModelInconsistent { x0: Rational, reason: String },
    #[error("fiber conic at x = {x0} is singular")]
    SingularFiber { x0: Rational },
    #[error("no rational point on the fiber conic at x = {x0}: {search:?}")]
    NoFiberPoint { x0: Rational, search: Box<PointSearch> },
    #[error("every attempted fiber consists of torsion points: {tried:?}")]
    TorsionFiberOnly { tried: Vec<Rational> },
    #[error("identity check failed for the constructed section")]
    IdentityFailed,
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Parse(#[from] ExactError),
}

/// Coefficient field of a multisection: `Q` or `Q(sqrt d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Q,
    Sqrt(BigInt),
}

impl std::fmt::Display for FieldTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Sqrt(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

impl std::str::FromStr for FieldTag {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, ExactError> {
        if s == "Q" {
            return Ok(FieldTag::Q);
        }
        s.strip_prefix("Q(sqrt(")
            .and_then(|r| r.strip_suffix("))"))
            .and_then(|d| d.parse::<BigInt>().ok())
            .map(FieldTag::Sqrt)
            .ok_or_else(|| ExactError::Parse(format!("bad field tag {s:?}")))
    }
}

/// `x(s), z(s), u(s)` with coefficients in `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiSection<K> {
    pub x_of: RationalFunction<K>,
    pub z_of: RationalFunction<K>,
    pub u_of: RationalFunction<K>,
    /// Map degree of `x_of`, the degree of the section over the base.
    pub base_degree: usize,
    pub field: FieldTag,
}

impl<K: Field> MultiSection<K> {
    pub fn new(x_of: RationalFunction<K>, z_of: RationalFunction<K>, u_of: RationalFunction<K>, field: FieldTag) -> Self {
        let base_degree = x_of.map_degree();
        MultiSection { x_of, z_of, u_of, base_degree, field }
    }

    /// `(x, z, u)` at `s`, or `None` at a pole of any coordinate.
    pub fn at(&self, s: &K) -> Option<(K, K, K)> {
        Some((self.x_of.eval(s)?, self.z_of.eval(s)?, self.u_of.eval(s)?))
    }
}

impl<K: Field> Serialize for MultiSection<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("MultiSection", 5)?;
        st.serialize_field("x", &self.x_of.to_text("s"))?;
        st.serialize_field("z", &self.z_of.to_text("s"))?;
        st.serialize_field("u", &self.u_of.to_text("s"))?;
        st.serialize_field("degree", &self.base_degree)?;
        st.serialize_field("field", &self.field.to_string())?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionFile {
    x: String,
    z: String,
    u: String,
    degree: usize,
    field: String,
}

/// A deserialized multisection over either coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMultiSection {
    Rational(MultiSection<Rational>),
    Extension(MultiSection<QuadExt>),
}

impl AnyMultiSection {
    pub fn from_json(text: &str) -> Result<Self, MultisectionError> {
        let f: SectionFile = serde_json::from_str(text).map_err(|e| ExactError::Parse(e.to_string()))?;
        let field: FieldTag = f.field.parse()?;
        let build = |tag: FieldTag| -> Result<AnyMultiSection, ExactError> {
            Ok(match tag {
                FieldTag::Q => AnyMultiSection::Rational(MultiSection {
                    x_of: parse_rational_function(&f.x)?,
                    z_of: parse_rational_function(&f.z)?,
                    u_of: parse_rational_function(&f.u)?,
                    base_degree: f.degree,
                    field: FieldTag::Q,
                }),
                tag => AnyMultiSection::Extension(MultiSection {
                    x_of: parse_rational_function(&f.x)?,
                    z_of: parse_rational_function(&f.z)?,
                    u_of: parse_rational_function(&f.u)?,
                    base_degree: f.degree,
                    field: tag,
                }),
            })
        };
        Ok(build(field)?)
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyMultiSection::Rational(m) => serde_json::to_string_pretty(m),
            AnyMultiSection::Extension(m) => serde_json::to_string_pretty(m),
        }
        .expect("serializable")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuarticFile {
    #[serde(with = "rational_poly_serde")]
    a0: QPoly,
    #[serde(with = "rational_poly_serde")]
    a1: QPoly,
    #[serde(with = "rational_poly_serde")]
    a2: QPoly,
    #[serde(with = "rational_poly_serde")]
    a3: QPoly,
}

impl TryFrom<QuarticFile> for QuarticFamily {
    type Error = MultisectionError;
    fn try_from(f: QuarticFile) -> Result<Self, MultisectionError> {
        QuarticFamily::new(f.a0, f.a1, f.a2, f.a3)
    }
}

/// `z^2 = x^4 + a3(u) x^3 + a2(u) x^2 + a1(u) x + a0(u)` with `deg a3 = 2`
/// and every `ai` of degree at most 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuarticFile")]
pub struct QuarticFamily {
    #[serde(with = "rational_poly_serde")]
    a0: QPoly,
    #[serde(with = "rational_poly_serde")]
    a1: QPoly,
    #[serde(with = "rational_poly_serde")]
    a2: QPoly,
    #[serde(with = "rational_poly_serde")]
    a3: QPoly,
}

impl QuarticFamily {
    pub fn new(a0: QPoly, a1: QPoly, a2: QPoly, a3: QPoly) -> Result<Self, MultisectionError> {
        for (index, a) in [&a0, &a1, &a2].into_iter().enumerate() {
            if a.degree().is_some_and(|d| d > 2) {
                return Err(MultisectionError::QuarticDegree { index, degree: a.degree() });
            }
        }
        if a3.degree() != Some(2) {
            return Err(MultisectionError::QuarticDegree { index: 3, degree: a3.degree() });
        }
        Ok(QuarticFamily { a0, a1, a2, a3 })
    }

    pub fn from_i64s(a0: &[i64], a1: &[i64], a2: &[i64], a3: &[i64]) -> Result<Self, MultisectionError> {
        Self::new(QPoly::from_i64s(a0), QPoly::from_i64s(a1), QPoly::from_i64s(a2), QPoly::from_i64s(a3))
    }

    /// `[a0, a1, a2, a3]`.
    pub fn coeffs(&self) -> [&QPoly; 4] {
        [&self.a0, &self.a1, &self.a2, &self.a3]
    }

    pub fn rhs<F: Field>(&self, x: &F, u: &F) -> F {
        self.coeffs().iter().rev().fold(F::one(), |acc, a| acc * x + a.eval_into(u))
    }

    pub fn contains_point(&self, x: &Rational, z: &Rational, u: &Rational) -> bool {
        z.square() == self.rhs(x, u)
    }
}

/// The surface a multisection is checked against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum SurfaceModel {
    Cubic(QuadraticFamily),
    Quartic(QuarticFamily),
}

impl SurfaceModel {
    pub fn rhs<F: Field>(&self, x: &F, u: &F) -> F {
        match self {
            SurfaceModel::Cubic(f) => f.rhs(x, u),
            SurfaceModel::Quartic(f) => f.rhs(x, u),
        }
    }
}

/// The section together with the unreduced closed-form data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BertiniSection {
    pub section: MultiSection<Rational>,
    /// `(4 a2 - a3^2)^2 - 64 a0`, before cancelling common factors.
    #[serde(serialize_with = "u_text")]
    pub unreduced_num: QPoly,
    /// `64 a1 - 8 a3 (4 a2 - a3^2)`.
    #[serde(serialize_with = "u_text")]
    pub unreduced_den: QPoly,
}

fn u_text<S: Serializer>(p: &QPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text("u"))
}

/// Image of the second point at infinity under negation about `p*`,
/// as a section parametrized by `u`.
pub fn bertini_multisection(q: &QuarticFamily) -> Result<BertiniSection, MultisectionError> {
    let [a0, a1, a2, a3] = q.coeffs();
    let e = &a2.scale(&Rational::from(4)) - &(a3 * a3);
    let unreduced_num = &(&e * &e) - &a0.scale(&Rational::from(64));
    let unreduced_den = &a1.scale(&Rational::from(64)) - &(a3 * &e).scale(&Rational::from(8));
    if unreduced_den.is_zero() {
        return Err(MultisectionError::NoParabolaSection);
    }
    let lift = |p: &QPoly| QFunc::from_poly(p.clone());
    let curve = QuarticCurve::new(lift(a3), lift(a2), lift(a1), lift(a0));
    let step = curve.bertini_image_of_pprime().map_err(|_| MultisectionError::NoParabolaSection)?;
    let section = MultiSection::new(step.x_img, step.z_img, QFunc::identity(), FieldTag::Q);
    if section.z_of.square() != q.rhs(&section.x_of, &section.u_of) {
        return Err(MultisectionError::IdentityFailed);
    }
    Ok(BertiniSection { section, unreduced_num, unreduced_den })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DoublingBranch {
    /// `x(2P)` moves with `u`: the image is a multisection.
    Generic,
    /// `x(2P)` is the constant `alpha != 0`; the fiber `x0 + alpha` is
    /// isomorphic to the fiber at `x0`.
    RetryAtAlpha,
    /// Shape `a3 x^3 + a0 (beta x + 1)^2`, `beta != 0`: the fiber at `x0`
    /// is 3-torsion; the fiber at `x0 - 1/beta` is smooth and usable.
    Exceptional7,
    /// Shape `a3 x^3 + a0`: the fiber at `x0` is 3-torsion.
    Exceptional8,
}

impl DoublingBranch {
    /// Order of the torsion the fiber at `x0` consists of, if any.
    pub fn fiber_torsion(self) -> Option<u32> {
        match self {
            DoublingBranch::Exceptional7 | DoublingBranch::Exceptional8 => Some(3),
            _ => None,
        }
    }
}

fn opt_text<S: Serializer>(f: &QFunc, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_text("u"))
}

/// Doubling at the fiber `x = x0`, after translating it to `x = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoublingAnalysis {
    pub x0: Rational,
    /// `x(2 (0, z0)) = (a1^2 - 4 a2 a0) / (4 a3 a0)` in the translated model.
    #[serde(serialize_with = "opt_text")]
    pub x71: QFunc,
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub branch: DoublingBranch,
}

pub fn doubling_analysis(f: &QuadraticFamily, x0: &Rational) -> Result<DoublingAnalysis, MultisectionError> {
    if f.a(3).is_zero() {
        return Err(FamilyError::IdenticallyZeroA3.into());
    }
    let [a0, a1, a2, a3] = f.translated(x0);
    if a0.is_zero() {
        return Err(MultisectionError::BadFiber { x0: x0.clone() });
    }
    let four = Rational::from(4);
    let x71 = QFunc::new(&(&a1 * &a1) - &(&a2 * &a0).scale(&four), (&a3 * &a0).scale(&four))
        .expect("a3 a0 is nonzero");
    let generic = |x71| DoublingAnalysis { x0: x0.clone(), x71, alpha: None, beta: None, branch: DoublingBranch::Generic };
    let Some(alpha) = x71.constant_value() else {
        return Ok(generic(x71));
    };
    let inconsistent = |reason: &str| MultisectionError::ModelInconsistent { x0: x0.clone(), reason: reason.to_string() };
    let ratio = QFunc::new(a1.clone(), a0.scale(&Rational::from(2))).expect("a0 is nonzero");
    let beta = ratio.constant_value().ok_or_else(|| inconsistent("a0 does not divide a1"))?;
    if a0.scale(&beta.square()) != &a2 + &a3.scale(&alpha) {
        return Err(inconsistent("beta^2 a0 != a2 + alpha a3"));
    }
    let branch = if !alpha.is_zero() {
        DoublingBranch::RetryAtAlpha
    } else if !beta.is_zero() {
        DoublingBranch::Exceptional7
    } else {
        DoublingBranch::Exceptional8
    };
    Ok(DoublingAnalysis { x0: x0.clone(), x71, alpha: Some(alpha), beta: Some(beta), branch })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingOptions {
    pub height_bound: u64,
    pub fallback_limit: usize,
    pub retry_limit: usize,
}

impl Default for DoublingOptions {
    fn default() -> Self {
        DoublingOptions { height_bound: 100, fallback_limit: DEFAULT_FALLBACK_LIMIT, retry_limit: DEFAULT_RETRY_LIMIT }
    }
}

/// A doubling multisection with the route taken to reach it.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "K: Field"))]
pub struct DoublingOutcome<K> {
    pub section: MultiSection<K>,
    /// Fiber that was doubled, in original coordinates.
    pub fiber_x: Rational,
    /// Times the doubling map was applied (2, or 4 through a fallback fiber).
    pub multiplier: u32,
    #[serde(skip)]
    pub fiber_param: ConicParam<K>,
    pub trace: Vec<DoublingAnalysis>,
}

/// Doubles the fiber point `(x0, y(s), t(s))` over `K(s)`, `times` times.
fn double_fiber<K: Field>(
    f: &QuadraticFamily,
    x0: &Rational,
    param: &ConicParam<K>,
    times: u32,
    field: FieldTag,
) -> Result<MultiSection<K>, MultisectionError> {
    let u = &param.t_of;
    let [a0, a1, a2, a3] = f.translated(x0).map(|a| a.lift::<K>().coeffs().iter().rev().fold(
        RationalFunction::<K>::zero(),
        |acc, c| acc * u + RationalFunction::constant(c.clone()),
    ));
    let mut point = double_at_zero(&a3, &a2, &a1, &a0, &param.y_of)?;
    if times == 4 {
        let curve = CubicCurve::new(a3, a2, a1, a0)?;
        point = curve.double(&point)?;
    }
    let CurvePoint::Affine { x, z } = point else {
        return Err(CurveError::TwoTorsionOrDegenerate.into());
    };
    let shift = RationalFunction::constant(K::from_rational(x0));
    let section = MultiSection::new(x + shift, z, u.clone(), field);
    if section.z_of.square() != f.rhs(&section.x_of, &section.u_of) {
        return Err(MultisectionError::IdentityFailed);
    }
    Ok(section)
}

// Image of the fiber point under doubling, on the fiber x0 + alpha.
fn transported_point(f: &QuadraticFamily, x0: &Rational, (z0, u0): &(Rational, Rational)) -> Option<(Rational, Rational)> {
    let tr = f.translated(x0).map(|a| a.eval(u0));
    match double_at_zero(&tr[3], &tr[2], &tr[1], &tr[0], z0).ok()? {
        CurvePoint::Affine { z, .. } => Some((z, u0.clone())),
        CurvePoint::Infinity => None,
    }
}

// The pencil through a rational point when the fiber conic is smooth; a
// rational line `t = s` when it splits into two lines.
fn rational_fiber(
    f: &QuadraticFamily,
    x0: &Rational,
    hint: Option<(Rational, Rational)>,
    bound: u64,
) -> Result<(ConicParam<Rational>, (Rational, Rational)), MultisectionError> {
    let conic = f.fiber_conic(x0);
    let singular = || MultisectionError::SingularFiber { x0: x0.clone() };
    if !conic.is_smooth() {
        let t = line_sample_t(&conic).ok_or_else(singular)?;
        let y = conic.rhs(&t).sqrt().ok_or_else(singular)?;
        let param = parametrize_line(&conic, (y.clone(), t.clone())).map_err(|_| singular())?;
        return Ok((param, (y, t)));
    }
    let point = match hint.filter(|(y, t)| conic.contains(y, t)) {
        Some(p) => p,
        None => match find_point(&conic, bound) {
            PointSearch::Found { y, t } => (y, t),
            search => return Err(MultisectionError::NoFiberPoint { x0: x0.clone(), search: Box::new(search) }),
        },
    };
    Ok((parametrize(&conic, point.clone())?, point))
}

/// Doubling multisection from a rational point on the fiber conic at `x0`.
pub fn doubling_multisection(
    f: &QuadraticFamily,
    x0: &Rational,
    height_bound: u64,
) -> Result<DoublingOutcome<Rational>, MultisectionError> {
    doubling_multisection_with(f, x0, &DoublingOptions { height_bound, ..Default::default() })
}

pub fn doubling_multisection_with(
    f: &QuadraticFamily,
    x0: &Rational,
    opts: &DoublingOptions,
) -> Result<DoublingOutcome<Rational>, MultisectionError> {
    let mut trace = Vec::new();
    let mut x = x0.clone();
    let mut hint = None;
    for _ in 0..=opts.retry_limit {
        let (param, point) = rational_fiber(f, &x, hint.take(), opts.height_bound)?;
        let analysis = doubling_analysis(f, &x)?;
        let branch = analysis.branch;
        let alpha = analysis.alpha.clone();
        let beta = analysis.beta.clone();
        trace.push(analysis);
        match branch {
            DoublingBranch::Generic => {
                let section = double_fiber(f, &x, &param, 2, FieldTag::Q)?;
                return Ok(DoublingOutcome { section, fiber_x: x, multiplier: 2, fiber_param: param, trace });
            }
            DoublingBranch::RetryAtAlpha => {
                hint = transported_point(f, &x, &point);
                x = x + alpha.expect("constant branch");
            }
            DoublingBranch::Exceptional7 => {
                x = x - beta.expect("constant branch").inv().expect("beta is nonzero");
            }
            DoublingBranch::Exceptional8 => return exceptional_fallback(f, &x, opts, trace),
        }
    }
    Err(MultisectionError::TorsionFiberOnly { tried: trace.into_iter().map(|a| a.x0).collect() })
}

// Scans x0 + 1, x0 - 1, x0 + 2, ... doubling (or quadrupling) the first
// usable fiber.
fn exceptional_fallback(
    f: &QuadraticFamily,
    x0: &Rational,
    opts: &DoublingOptions,
    mut trace: Vec<DoublingAnalysis>,
) -> Result<DoublingOutcome<Rational>, MultisectionError> {
    let mut tried = vec![x0.clone()];
    let offsets = (1..).flat_map(|k: i64| [k, -k]).take(opts.fallback_limit);
    for k in offsets {
        let x = x0 + &Rational::from(k);
        let Ok((param, _)) = rational_fiber(f, &x, None, opts.height_bound) else {
            continue;
        };
        let Ok(analysis) = doubling_analysis(f, &x) else {
            continue;
        };
        tried.push(x.clone());
        let times = if analysis.branch == DoublingBranch::Generic { 2 } else { 4 };
        trace.push(analysis);
        match double_fiber(f, &x, &param, times, FieldTag::Q) {
            Ok(section) if !section.x_of.is_constant() => {
                return Ok(DoublingOutcome { section, fiber_x: x, multiplier: times, fiber_param: param, trace });
            }
            _ => continue,
        }
    }
    Err(MultisectionError::TorsionFiberOnly { tried })
}

/// Doubling multisection over `Q(sqrt d)`, from a point `(sqrt(v), t0)` of
/// the fiber conic with rational `t0`.
pub fn extension_multisection(f: &QuadraticFamily, x0: &Rational) -> Result<DoublingOutcome<QuadExt>, MultisectionError> {
    let conic = f.fiber_conic(x0);
    let singular = || MultisectionError::SingularFiber { x0: x0.clone() };
    let smooth = conic.is_smooth();
    let point: ExtensionPoint = if smooth {
        find_point_quadratic_ext(&conic)?
    } else {
        line_sample_t(&conic).and_then(|t| quadratic_point_at(&conic, &t)).ok_or_else(singular)?
    };
    let analysis = doubling_analysis(f, x0)?;
    if analysis.branch != DoublingBranch::Generic {
        return Err(MultisectionError::TorsionFiberOnly { tried: vec![x0.clone()] });
    }
    let field = if point.d == BigInt::from(1) { FieldTag::Q } else { FieldTag::Sqrt(point.d.clone()) };
    let lifted = FiberConic::new(
        QuadExt::rational(conic.alpha.clone()),
        QuadExt::rational(conic.beta.clone()),
        QuadExt::rational(conic.gamma.clone()),
    );
    let base = (point.y, QuadExt::rational(point.t));
    let param = if smooth { parametrize(&lifted, base)? } else { parametrize_line(&lifted, base).map_err(|_| singular())? };
    let section = double_fiber(f, x0, &param, 2, field)?;
    Ok(DoublingOutcome { section, fiber_x: x0.clone(), multiplier: 2, fiber_param: param, trace: vec![analysis] })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCheck {
    pub s: i64,
    pub x: String,
    pub z: String,
    pub u: String,
    /// All three coordinates rational, so membership was tested over `Q`.
    pub rational: bool,
    pub on_surface: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity_holds: bool,
    /// `z^2 - rhs(x, u)` when it is not zero.
    pub residue: Option<String>,
    pub nonconstant: bool,
    pub recomputed_degree: usize,
    pub degree_matches: bool,
    pub degree_at_most_8: bool,
    pub samples: Vec<SampleCheck>,
    pub passed: bool,
}

/// Number of sample parameters `0, 1, -1, ...` examined by [`verify_multisection`].
pub const SAMPLE_COUNT: usize = 11;

fn sample_on_surface<K: Field>(model: &SurfaceModel, x: &K, z: &K, u: &K) -> (bool, bool) {
    match (x.to_rational(), z.to_rational(), u.to_rational()) {
        (Some(x), Some(z), Some(u)) => {
            let on = match model {
                SurfaceModel::Cubic(f) => f.contains_point(&x, &z, &u),
                SurfaceModel::Quartic(q) => q.contains_point(&x, &z, &u),
            };
            (true, on)
        }
        _ => (false, z.square() == model.rhs(x, u)),
    }
}

/// Re-checks a multisection from scratch.
pub fn verify_multisection<K: Field>(model: &SurfaceModel, sigma: &MultiSection<K>) -> VerificationReport {
    let residue = sigma.z_of.square() - model.rhs(&sigma.x_of, &sigma.u_of);
    let identity_holds = residue.is_zero();
    let nonconstant = !sigma.x_of.is_constant();
    let recomputed_degree = sigma.x_of.map_degree();
    let samples: Vec<SampleCheck> = (0..)
        .flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
        .take(SAMPLE_COUNT)
        .filter_map(|s| {
            let (x, z, u) = sigma.at(&K::from_i64(s))?;
            let (rational, on_surface) = sample_on_surface(model, &x, &z, &u);
            Some(SampleCheck { s, x: x.to_string(), z: z.to_string(), u: u.to_string(), rational, on_surface })
        })
        .collect();
    let degree_matches = recomputed_degree == sigma.base_degree;
    let passed = identity_holds && nonconstant && degree_matches && samples.iter().all(|c| c.on_surface);
    VerificationReport {
        identity_holds,
        residue: (!identity_holds).then(|| residue.to_text("s")),
        nonconstant,
        recomputed_degree,
        degree_matches,
        degree_at_most_8: recomputed_degree <= TARGET_DEGREE,
        samples,
        passed,
    }
}

/// [`verify_multisection`] for either coefficient field.
pub fn verify_any(model: &SurfaceModel, sigma: &AnyMultiSection) -> VerificationReport {
    match sigma {
        AnyMultiSection::Rational(m) => verify_multisection(model, m),
        AnyMultiSection::Extension(m) => verify_multisection(model, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CubicCurve;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_i64s(cs)
    }

    fn fam(a0: &[i64], a1: &[i64], a2: &[i64], a3: &[i64]) -> QuadraticFamily {
        QuadraticFamily::from_i64s(a0, a1, a2, a3).unwrap()
    }

    #[test]
    fn bertini_u_squared() {
        let q = QuarticFamily::from_i64s(&[1], &[], &[], &[0, 0, 1]).unwrap();
        let b = bertini_multisection(&q).unwrap();
        let expected = QFunc::new(p(&[-64, 0, 0, 0, 0, 0, 0, 0, 1]), p(&[0, 0, 0, 0, 0, 0, 8])).unwrap();
        assert_eq!(b.section.x_of, expected);
        assert_eq!(b.unreduced_num.degree(), Some(8));
        assert_eq!(b.unreduced_den.degree(), Some(6));
        assert_eq!(b.section.base_degree, 8);
        let u2 = QFunc::from_poly(p(&[0, 0, 1]));
        let x = &b.section.x_of;
        let z = x.square() + u2.clone() * x / QFunc::constant(r(2)) - u2.square() / QFunc::constant(r(8));
        assert_eq!(b.section.z_of, z);
        let (x1, z1, _) = b.section.at(&r(1)).unwrap();
        assert_eq!(x1, Rational::new(-63, 8));
        assert!(q.contains_point(&x1, &z1, &r(1)));
        let rep = verify_multisection(&SurfaceModel::Quartic(q), &b.section);
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn quartic_degrees() {
        assert_eq!(
            QuarticFamily::from_i64s(&[1], &[], &[], &[0, 1]).unwrap_err(),
            MultisectionError::QuarticDegree { index: 3, degree: Some(1) }
        );
        assert_eq!(
            QuarticFamily::from_i64s(&[0, 0, 0, 1], &[], &[], &[0, 0, 1]).unwrap_err(),
            MultisectionError::QuarticDegree { index: 0, degree: Some(3) }
        );
    }

    #[test]
    fn analysis_branches() {
        let a = doubling_analysis(&fam(&[1], &[0, 1], &[], &[1, 0, 1]), &r(0)).unwrap();
        assert_eq!(a.branch, DoublingBranch::Generic);
        assert_eq!(a.x71, QFunc::new(p(&[0, 0, 1]), p(&[4, 0, 4])).unwrap());

        let a = doubling_analysis(&fam(&[2, 0, 1], &[], &[], &[1, 0, 1]), &r(0)).unwrap();
        assert_eq!(a.branch, DoublingBranch::Exceptional8);
        assert_eq!((a.alpha, a.beta), (Some(r(0)), Some(r(0))));
        assert_eq!(a.branch.fiber_torsion(), Some(3));

        let a = doubling_analysis(&fam(&[2, 0, 1], &[-4, 0, -2], &[2, 0, 1], &[1, 0, 1]), &r(0)).unwrap();
        assert_eq!(a.branch, DoublingBranch::Exceptional7);
        assert_eq!(a.beta, Some(r(-1)));

        // a3 x^2 (x - 2) + a0 (x + 1)^2 with a0 = u^2 + 2, a3 = u^2 + 1
        let a0 = p(&[2, 0, 1]);
        let a3 = p(&[1, 0, 1]);
        let f = QuadraticFamily::from_coeffs(a0.clone(), a0.scale(&r(2)), &a0 - &a3.scale(&r(2)), a3).unwrap();
        let a = doubling_analysis(&f, &r(0)).unwrap();
        assert_eq!(a.branch, DoublingBranch::RetryAtAlpha);
        assert_eq!(a.alpha, Some(r(2)));

        assert_eq!(
            doubling_analysis(&fam(&[], &[1], &[], &[1, 0, 1]), &r(0)).unwrap_err(),
            MultisectionError::BadFiber { x0: r(0) }
        );
    }

    #[test]
    fn generic_doubling_pipeline() {
        let f = fam(&[1], &[0, 1], &[], &[1, 0, 1]);
        let out = doubling_multisection(&f, &r(0), 100).unwrap();
        assert_eq!(out.multiplier, 2);
        let sec = &out.section;
        assert!(sec.base_degree <= 8 && sec.base_degree > 0);
        let rep = verify_multisection(&SurfaceModel::Cubic(f.clone()), sec);
        assert!(rep.passed, "{rep:?}");
        // specialization agrees with the group law on E_t
        for s in 2..6 {
            let s = r(s);
            let (Some(y), Some(t)) = (out.fiber_param.y_of.eval(&s), out.fiber_param.t_of.eval(&s)) else {
                continue;
            };
            let c = f.specialize(&t);
            let curve = CubicCurve::new(c[3].clone(), c[2].clone(), c[1].clone(), c[0].clone()).unwrap();
            let twice = curve.multiply(2, &CurvePoint::affine(r(0), y)).unwrap();
            let (x, z, u) = sec.at(&s).unwrap();
            assert_eq!(u, t);
            assert_eq!(twice, CurvePoint::affine(x, z));
        }
    }

    #[test]
    fn retry_and_exceptional_routes() {
        let a0 = p(&[2, 0, 1]);
        let a3 = p(&[1, 0, 1]);
        let f = QuadraticFamily::from_coeffs(a0.clone(), a0.scale(&r(2)), &a0 - &a3.scale(&r(2)), a3).unwrap();
        let out = doubling_multisection(&f, &r(0), 100).unwrap();
        assert_eq!(out.trace[0].branch, DoublingBranch::RetryAtAlpha);
        assert_eq!(out.fiber_x, r(2));
        assert!(verify_multisection(&SurfaceModel::Cubic(f), &out.section).passed);

        let f = fam(&[2, 0, 1], &[-4, 0, -2], &[2, 0, 1], &[1, 0, 1]);
        let out = doubling_multisection(&f, &r(0), 100).unwrap();
        assert_eq!(out.trace[0].branch, DoublingBranch::Exceptional7);
        assert_eq!(out.fiber_x, r(1));
        assert!(verify_multisection(&SurfaceModel::Cubic(f), &out.section).passed);

        let f = fam(&[2, 0, 1], &[], &[], &[1, 0, 1]);
        let opts = DoublingOptions { fallback_limit: 0, ..Default::default() };
        assert_eq!(
            doubling_multisection_with(&f, &r(0), &opts).unwrap_err(),
            MultisectionError::TorsionFiberOnly { tried: vec![r(0)] }
        );
        let out = doubling_multisection(&f, &r(0), 100).unwrap();
        assert_eq!(out.trace[0].branch, DoublingBranch::Exceptional8);
        assert!(verify_multisection(&SurfaceModel::Cubic(f), &out.section).passed);
    }

    #[test]
    fn extension_route() {
        // fiber at x = 0 is z^2 = u^2 + 3: t0 = 0 gives sqrt(3)
        let f = fam(&[3, 0, 1], &[0, 1], &[], &[1, 0, 1]);
        let out = extension_multisection(&f, &r(0)).unwrap();
        assert_eq!(out.section.field, FieldTag::Sqrt(BigInt::from(3)));
        let rep = verify_multisection(&SurfaceModel::Cubic(f.clone()), &out.section);
        assert!(rep.passed, "{rep:?}");

        let g = fam(&[1], &[0, 1], &[], &[1, 0, 1]);
        let out = extension_multisection(&g, &r(0)).unwrap();
        assert_eq!(out.section.field, FieldTag::Q);
        assert!(rep.samples.iter().any(|s| !s.rational));

        let h = fam(&[2, 0, 1], &[], &[], &[1, 0, 1]);
        assert!(matches!(extension_multisection(&h, &r(0)), Err(MultisectionError::TorsionFiberOnly { .. })));
    }

    #[test]
    fn corrupted_section_fails() {
        let q = QuarticFamily::from_i64s(&[1], &[], &[], &[0, 0, 1]).unwrap();
        let mut sec = bertini_multisection(&q).unwrap().section;
        sec.z_of = sec.z_of + QFunc::one();
        let rep = verify_multisection(&SurfaceModel::Quartic(q), &sec);
        assert!(!rep.identity_holds);
        assert!(rep.residue.is_some());
        assert!(!rep.passed);
    }

    #[test]
    fn json_round_trip() {
        let f = fam(&[3, 0, 1], &[0, 1], &[], &[1, 0, 1]);
        for any in [
            AnyMultiSection::Rational(doubling_multisection(&f, &r(1), 100).unwrap().section),
            AnyMultiSection::Extension(extension_multisection(&f, &r(0)).unwrap().section),
        ] {
            let text = any.to_json();
            let back = AnyMultiSection::from_json(&text).unwrap();
            assert_eq!(back, any);
        }
        assert!(AnyMultiSection::from_json(r#"{"x":"s","z":"s","u":"s","degree":1,"field":"Q","extra":1}"#).is_err());
    }
}
