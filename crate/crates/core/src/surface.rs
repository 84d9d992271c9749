//! The surface `y^2 = a3(t) x^3 + a2(t) x^2 + a1(t) x + a0(t)`, every `ai` of
//! degree at most 2.
//!
//! Collecting powers of `t` gives `A(x) t^2 + B(x) t + C(x)` with cubics
//! `A, B, C`, so projection to `x` makes the surface a family of conics
//! `y^2 = A(x) t^2 + B(x) t + C(x)`. A fiber is singular where the
//! discriminant `B^2 - 4AC` (degree at most 6) vanishes; the fiber over
//! `x = infinity` is governed by `a3`. With `delta` singular fibers the
//! bundle has degree `8 - delta`.
//!
//! Fiber counts are geometric: `delta` is the number of distinct roots of
//! the discriminant over the algebraic closure. Model-form checks evaluate
//! the coefficient conditions for the smooth cubic (Type S) and quartic
//! (Type G) shapes; deciding the type of an arbitrary input would need a
//! minimal model, which is not computed here.

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::conics::FiberConic;
use crate::exact::{
    poly_square_root, projective_roots, quad_irreducible, rational_poly_serde, squarefree_part, Field,
    ProjectiveRoot, QPoly, Rational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("coefficient a{index} has degree {degree}, expected at most 2")]
    DegreeTooLarge { index: usize, degree: usize },
    #[error("a3 is identically zero")]
    IdenticallyZeroA3,
    #[error("all ai are constant multiples of the same square (root {root})")]
    TrivialCommonSquare { root: ProjectiveRoot },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    #[serde(with = "rational_poly_serde")]
    a0: QPoly,
    #[serde(with = "rational_poly_serde")]
    a1: QPoly,
    #[serde(with = "rational_poly_serde")]
    a2: QPoly,
    #[serde(with = "rational_poly_serde")]
    a3: QPoly,
}

impl TryFrom<FamilyFile> for QuadraticFamily {
    type Error = FamilyError;
    fn try_from(f: FamilyFile) -> Result<Self, FamilyError> {
        QuadraticFamily::from_coeffs(f.a0, f.a1, f.a2, f.a3)
    }
}

/// Coefficients `a0..a3` of the family, each of degree at most 2 in `t`.
///
/// [`QuadraticFamily::from_coeffs`] only enforces the degree bound, so
/// degenerate inputs can still be analysed; [`validate`] adds the
/// nontriviality conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyFile")]
pub struct QuadraticFamily {
    #[serde(with = "rational_poly_serde")]
    a0: QPoly,
    #[serde(with = "rational_poly_serde")]
    a1: QPoly,
    #[serde(with = "rational_poly_serde")]
    a2: QPoly,
    #[serde(with = "rational_poly_serde")]
    a3: QPoly,
}

impl QuadraticFamily {
    pub fn from_coeffs(a0: QPoly, a1: QPoly, a2: QPoly, a3: QPoly) -> Result<Self, FamilyError> {
        for (index, a) in [&a0, &a1, &a2, &a3].into_iter().enumerate() {
            if let Some(degree) = a.degree().filter(|&d| d > 2) {
                return Err(FamilyError::DegreeTooLarge { index, degree });
            }
        }
        Ok(QuadraticFamily { a0, a1, a2, a3 })
    }

    /// Shorthand for tests and examples: ascending integer coefficients.
    pub fn from_i64s(a0: &[i64], a1: &[i64], a2: &[i64], a3: &[i64]) -> Result<Self, FamilyError> {
        Self::from_coeffs(QPoly::from_i64s(a0), QPoly::from_i64s(a1), QPoly::from_i64s(a2), QPoly::from_i64s(a3))
    }

    /// `[a0, a1, a2, a3]`.
    pub fn coeffs(&self) -> [&QPoly; 4] {
        [&self.a0, &self.a1, &self.a2, &self.a3]
    }

    pub fn a(&self, i: usize) -> &QPoly {
        self.coeffs()[i]
    }

    /// The nontriviality conditions: `a3` not identically zero, and the
    /// `ai` not all constant multiples of one square `(t - alpha)^2`
    /// (or of the square at infinity, i.e. all constant).
    pub fn check(&self) -> Result<(), FamilyError> {
        if self.a3.is_zero() {
            return Err(FamilyError::IdenticallyZeroA3);
        }
        if let Some((p, _)) = self.common_factor() {
            if p.is_constant() {
                return Err(FamilyError::TrivialCommonSquare { root: ProjectiveRoot::Infinity });
            }
            if p.degree() == Some(2) && poly_square_root(&p).is_some() {
                let alpha = -(p.coeff(1) / Rational::from(2));
                return Err(FamilyError::TrivialCommonSquare { root: ProjectiveRoot::Finite(alpha) });
            }
        }
        Ok(())
    }

    /// Monic `P` and constants `ci` with `ai = ci P` for all `i`, if the
    /// coefficients are all proportional.
    pub fn common_factor(&self) -> Option<(QPoly, [Rational; 4])> {
        let base = self.coeffs().into_iter().find(|a| !a.is_zero())?.monic();
        let mut cs: [Rational; 4] = Default::default();
        for (i, a) in self.coeffs().into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if a.degree() != base.degree() {
                return None;
            }
            let c = a.leading().unwrap().clone();
            if a != &base.scale(&c) {
                return None;
            }
            cs[i] = c;
        }
        Some((base, cs))
    }

    /// Value of `a3 x^3 + ... + a0` at `(x, t)` in any field containing `Q`.
    pub fn rhs<F: Field>(&self, x: &F, t: &F) -> F {
        self.coeffs().iter().rev().fold(F::zero(), |acc, a| acc * x + a.eval_into(t))
    }

    /// Exact membership of `(x, y, t)` in the surface.
    pub fn contains_point(&self, x: &Rational, y: &Rational, t: &Rational) -> bool {
        y.square() == self.rhs(x, t)
    }

    /// Coefficients of `sum ai(u) (x + x0)^i` as a polynomial in `x`.
    pub fn translated(&self, x0: &Rational) -> [QPoly; 4] {
        let a = self.coeffs();
        let binom = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 2, 1, 0], [1, 3, 3, 1]];
        std::array::from_fn(|j| {
            (j..4).fold(QPoly::zero(), |acc, i| {
                let c = Rational::from(binom[i][j]) * x0.pow((i - j) as u32);
                &acc + &a[i].scale(&c)
            })
        })
    }

    /// `[a0(t0), a1(t0), a2(t0), a3(t0)]`.
    pub fn specialize(&self, t0: &Rational) -> [Rational; 4] {
        std::array::from_fn(|i| self.a(i).eval(t0))
    }

    /// The conic `y^2 = A(x0) t^2 + B(x0) t + C(x0)` over `x = x0`.
    pub fn fiber_conic(&self, x0: &Rational) -> FiberConic<Rational> {
        let at = |k: usize| {
            self.coeffs().iter().rev().fold(Rational::zero(), |acc, a| acc * x0 + a.coeff(k))
        };
        FiberConic::new(at(2), at(1), at(0))
    }
}

/// [`QuadraticFamily`] built from coefficients, rejecting trivial families.
pub fn validate(a0: QPoly, a1: QPoly, a2: QPoly, a3: QPoly) -> Result<QuadraticFamily, FamilyError> {
    let f = QuadraticFamily::from_coeffs(a0, a1, a2, a3)?;
    f.check()?;
    Ok(f)
}

fn x_text<S: Serializer>(p: &QPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text("x"))
}

fn t_text<S: Serializer>(p: &QPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text("t"))
}

fn factor_texts<S: Serializer>(fs: &[(QPoly, u32)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(fs.len()))?;
    for (f, m) in fs {
        seq.serialize_element(&(f.to_text("x"), m))?;
    }
    seq.end()
}

/// Shape of the fiber over `x = infinity`, read off `disc(a3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfinityFiber {
    /// Nonzero non-square discriminant: a conjugate pair of lines.
    Irreducible,
    /// Nonzero square discriminant: two lines over `Q`.
    Split,
    /// Zero discriminant: a double line.
    DoubleLine,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConicBundleView {
    #[serde(rename = "A", serialize_with = "x_text")]
    pub a: QPoly,
    #[serde(rename = "B", serialize_with = "x_text")]
    pub b: QPoly,
    #[serde(rename = "C", serialize_with = "x_text")]
    pub c: QPoly,
    #[serde(rename = "Delta", serialize_with = "x_text")]
    pub discriminant: QPoly,
    /// Square-free factors of the discriminant with multiplicity.
    #[serde(serialize_with = "factor_texts")]
    pub discriminant_factors: Vec<(QPoly, u32)>,
    /// Singular fibers; `None` when the discriminant vanishes identically.
    pub delta: Option<usize>,
    /// `8 - delta`.
    pub degree: Option<i64>,
    pub infinity_fiber: InfinityFiber,
    /// Set when the fiber at infinity is a double line, where `delta` only
    /// bounds the count from below.
    pub delta_is_lower_bound: bool,
    pub warnings: Vec<String>,
}

impl ConicBundleView {
    /// `ai` coefficient table: entry `[i][k]` is the coefficient of `x^i t^k`
    /// in `A t^2 + B t + C`.
    pub fn expand(&self) -> [[Rational; 3]; 4] {
        std::array::from_fn(|i| [self.c.coeff(i), self.b.coeff(i), self.a.coeff(i)])
    }
}

/// Discriminant of a binary quadratic form stored as `c + b t + a t^2`.
pub fn form_discriminant(f: &QPoly) -> Rational {
    f.coeff(1).square() - Rational::from(4) * f.coeff(2) * f.coeff(0)
}

pub fn conic_bundle_view(f: &QuadraticFamily) -> ConicBundleView {
    let collect = |k: usize| QPoly::new(f.coeffs().iter().map(|a| a.coeff(k)).collect());
    let (a, b, c) = (collect(2), collect(1), collect(0));
    let discriminant = &(&b * &b) - &(&a * &c).scale(&Rational::from(4));
    let disc_a3 = form_discriminant(f.a(3));
    let infinity_fiber = if disc_a3.is_zero() {
        InfinityFiber::DoubleLine
    } else if disc_a3.is_square() {
        InfinityFiber::Split
    } else {
        InfinityFiber::Irreducible
    };
    let mut warnings = Vec::new();
    let delta_is_lower_bound = disc_a3.is_zero();
    let (delta, degree, discriminant_factors) = match squarefree_part(&discriminant) {
        Err(_) => {
            warnings.push("discriminant vanishes identically; see degenerations".to_string());
            (None, None, Vec::new())
        }
        Ok(sf) => {
            let finite = sf.part.degree().unwrap_or(0);
            let at_infinity = usize::from(discriminant.degree().unwrap_or(0) < 6);
            let infinity_conic = usize::from(!disc_a3.is_zero());
            let delta = finite + at_infinity + infinity_conic;
            if !sf.is_squarefree() {
                warnings.push("discriminant has repeated factors: the model is not minimal".to_string());
            }
            if delta_is_lower_bound {
                warnings.push("worse-than-nodal degeneration at infinity: delta is a lower bound".to_string());
            }
            (Some(delta), Some(8 - delta as i64), sf.factors)
        }
    };
    ConicBundleView {
        a,
        b,
        c,
        discriminant,
        discriminant_factors,
        delta,
        degree,
        infinity_fiber,
        delta_is_lower_bound,
        warnings,
    }
}

fn cubic_texts<S: Serializer>(c: &[Rational; 4], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Cubic", 4)?;
    st.serialize_field("c3", &c[3])?;
    st.serialize_field("c2", &c[2])?;
    st.serialize_field("c1", &c[1])?;
    st.serialize_field("c0", &c[0])?;
    st.end()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Degeneration {
    None,
    /// `ai = ci (t - alpha)^2`; with `z = y / (t - alpha)` the surface is
    /// `z^2 = c3 x^3 + c2 x^2 + c1 x + c0` times a line. `alpha` at infinity
    /// means all `ai` are constant.
    ProductWithElliptic {
        alpha: ProjectiveRoot,
        #[serde(serialize_with = "cubic_texts")]
        cubic: [Rational; 4],
    },
    /// `ai = ci q(t)` with `q` nonconstant and not a square; with `y = q z`
    /// the surface is `q(t) z^2 = c3 x^3 + c2 x^2 + c1 x + c0`.
    CommonFactor {
        #[serde(serialize_with = "t_text")]
        q: QPoly,
        #[serde(serialize_with = "cubic_texts")]
        cubic: [Rational; 4],
    },
    /// `a3` has a rational root on the projective `t`-line.
    A3Reducible { roots: Vec<ProjectiveRoot> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerationReport {
    #[serde(flatten)]
    pub kind: Degeneration,
    pub notes: Vec<String>,
}

impl DegenerationReport {
    /// Re-expands the reported transform and compares with the family.
    pub fn transform_holds(&self, f: &QuadraticFamily) -> bool {
        let factor = match &self.kind {
            Degeneration::ProductWithElliptic { alpha: ProjectiveRoot::Finite(a), cubic } => {
                Some((QPoly::linear_root(a.clone()).pow(2), cubic))
            }
            Degeneration::ProductWithElliptic { alpha: ProjectiveRoot::Infinity, cubic } => Some((QPoly::one(), cubic)),
            Degeneration::CommonFactor { q, cubic } => Some((q.clone(), cubic)),
            _ => None,
        };
        match factor {
            None => true,
            Some((p, cubic)) => (0..4).all(|i| f.a(i) == &p.scale(&cubic[i])),
        }
    }
}

pub fn detect_degenerations(f: &QuadraticFamily) -> DegenerationReport {
    let mut notes = Vec::new();
    if let Some((p, cubic)) = f.common_factor() {
        if p.is_constant() {
            notes.push("all coefficients constant: the surface is a product with a line".to_string());
            return DegenerationReport {
                kind: Degeneration::ProductWithElliptic { alpha: ProjectiveRoot::Infinity, cubic },
                notes,
            };
        }
        if p.degree() == Some(2) && poly_square_root(&p).is_some() {
            let alpha = -(p.coeff(1) / Rational::from(2));
            notes.push(format!("z = y/(t - {alpha}) gives a constant elliptic curve times a line"));
            return DegenerationReport {
                kind: Degeneration::ProductWithElliptic { alpha: ProjectiveRoot::Finite(alpha), cubic },
                notes,
            };
        }
        notes.push("conic bundle with 4 singular fibers".to_string());
        return DegenerationReport { kind: Degeneration::CommonFactor { q: p, cubic }, notes };
    }
    let roots: Vec<ProjectiveRoot> = projective_roots(f.a(3), 2)
        .map(|rs| rs.into_iter().map(|(r, _)| r).collect())
        .unwrap_or_default();
    if !roots.is_empty() {
        notes.push("the fiber at infinity splits over Q".to_string());
        return DegenerationReport { kind: Degeneration::A3Reducible { roots }, notes };
    }
    DegenerationReport { kind: Degeneration::None, notes }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModelForm {
    /// Cubic shape with the smoothness conditions satisfied.
    TypeS,
    /// Quartic shape `z^2 = x^4 + ...` with the conditions satisfied.
    TypeG,
    /// Some condition fails: the branch curve is singular, so the model is
    /// not the smooth minimal form.
    NonMinimalHint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessCheck {
    pub condition: &'static str,
    pub passed: bool,
    pub witness: Option<ProjectiveRoot>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelFormReport {
    pub form: ModelForm,
    pub checks: Vec<SmoothnessCheck>,
}

impl ModelFormReport {
    pub fn check(&self, condition: &str) -> Option<&SmoothnessCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

/// Condition names reported by [`model_form_checks`] and [`model_form_checks_quartic`].
pub mod conditions {
    pub const A3_IRREDUCIBLE: &str = "a3_irreducible";
    pub const A0_DOUBLE_ROOT_OFF_A1: &str = "no_double_root_of_a0_on_a1";
    pub const A4_DOUBLE_ROOT_OFF_A3: &str = "no_double_root_of_a4_on_a3";
    pub const A4_SQUARE: &str = "a4_square";
}

fn vanishes_at(f: &QPoly, r: &ProjectiveRoot, form_degree: usize) -> bool {
    match r {
        ProjectiveRoot::Finite(x) => f.eval(x).is_zero(),
        ProjectiveRoot::Infinity => f.degree().is_none_or(|d| d < form_degree),
    }
}

// Double roots of a nonzero binary quadratic form.
fn double_roots(f: &QPoly) -> Vec<ProjectiveRoot> {
    match f.degree() {
        Some(2) if form_discriminant(f).is_zero() => {
            vec![ProjectiveRoot::Finite(-(f.coeff(1) / (Rational::from(2) * f.coeff(2))))]
        }
        Some(0) => vec![ProjectiveRoot::Infinity],
        _ => Vec::new(),
    }
}

// "No point that is a double root of `double` and a root of `other`",
// both binary quadratic forms.
fn double_root_check(condition: &'static str, double: &QPoly, other: &QPoly) -> SmoothnessCheck {
    if double.is_zero() {
        // every point is a double root; `other` vanishes somewhere over the closure
        let witness = projective_roots(other, 2).and_then(|rs| rs.into_iter().next().map(|(r, _)| r));
        return SmoothnessCheck { condition, passed: false, witness };
    }
    let witness = double_roots(double).into_iter().find(|r| vanishes_at(other, r, 2));
    SmoothnessCheck { condition, passed: witness.is_none(), witness }
}

/// Smoothness conditions for the cubic shape: `a3` irreducible as a binary
/// quadratic form, and no double root of `a0` that is also a root of `a1`.
pub fn model_form_checks(f: &QuadraticFamily) -> ModelFormReport {
    let a3 = f.a(3);
    let irreducible = a3.degree() == Some(2) && quad_irreducible(a3).unwrap_or(false);
    let a3_root = if irreducible {
        None
    } else {
        projective_roots(a3, 2).and_then(|rs| rs.into_iter().next().map(|(r, _)| r))
    };
    let checks = vec![
        SmoothnessCheck { condition: conditions::A3_IRREDUCIBLE, passed: irreducible, witness: a3_root },
        double_root_check(conditions::A0_DOUBLE_ROOT_OFF_A1, f.a(0), f.a(1)),
    ];
    let form = if checks.iter().all(|c| c.passed) { ModelForm::TypeS } else { ModelForm::NonMinimalHint };
    ModelFormReport { form, checks }
}

/// Quartic shape with general leading form `a4`: no double root of `a4` on
/// `a3`, and `a4` a square.
pub fn quartic_form_checks(a4: &QPoly, a3: &QPoly) -> ModelFormReport {
    let square = !a4.is_zero() && {
        let c = a4.leading().unwrap();
        // a square form up to a square constant: c * (monic square), c a square
        c.is_square() && poly_square_root(&a4.monic()).is_some()
    };
    let checks = vec![
        double_root_check(conditions::A4_DOUBLE_ROOT_OFF_A3, a4, a3),
        SmoothnessCheck { condition: conditions::A4_SQUARE, passed: square, witness: None },
    ];
    let form = if checks.iter().all(|c| c.passed) { ModelForm::TypeG } else { ModelForm::NonMinimalHint };
    ModelFormReport { form, checks }
}

/// Checks for `z^2 = x^4 + a3(u) x^3 + ... + a0(u)`, whose leading form is
/// the square `v^2`.
pub fn model_form_checks_quartic(a3: &QPoly) -> ModelFormReport {
    quartic_form_checks(&QPoly::one(), a3)
}
