//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use quadfam::counting::{census, enumerate_points, growth_report};
use quadfam::curves::{x_double_at_zero, CubicCurve, CurvePoint};
use quadfam::exact::{Field, QFunc, QPoly, Rational};
use quadfam::multisection::{
    bertini_multisection, doubling_analysis, doubling_multisection, verify_multisection, DoublingBranch,
    QuarticFamily, SurfaceModel,
};
use quadfam::rank1::{rank_one_family, specialize_curve, Certificate, DEFAULT_U_RANGE};
use quadfam::surface::{conic_bundle_view, detect_degenerations, model_form_checks, Degeneration, ModelForm, QuadraticFamily};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit as f64, || format!("took {elapsed:.2?}, limit {limit} s"))
}

fn fixture(name: &str) -> QuadraticFamily {
    let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

// x of 2(0, z0) from the tangent line z = z0 + m x, m = a1 / (2 z0): the cubic
// a3 x^3 + (a2 - m^2) x^2 has the double root 0 and the third root below.
fn tangent_x(a3: &Rational, a2: &Rational, a1: &Rational, z0: &Rational) -> Rational {
    let m = a1.clone() / (r(2) * z0);
    (m.square() - a2) / a3
}

fn doubling_formula() -> Outcome {
    let start = Instant::now();
    let mut g = rng(1);
    let mut n = 0;
    while n < 200 {
        let z0 = nonzero_rational(&mut g, 9);
        let (a1, a2, a3) = (small_rational(&mut g, 9), small_rational(&mut g, 9), nonzero_rational(&mut g, 9));
        let a0 = z0.square();
        let Ok(curve) = CubicCurve::new(a3.clone(), a2.clone(), a1.clone(), a0.clone()) else { continue };
        if !curve.is_nonsingular() {
            continue;
        }
        let closed = x_double_at_zero(&a3, &a2, &a1, &a0).map_err(|e| e.to_string())?;
        let doubled = curve.multiply(2, &CurvePoint::affine(r(0), z0.clone())).map_err(|e| e.to_string())?;
        ensure(doubled.x() == Some(&closed), || format!("a = ({a3}, {a2}, {a1}, {a0}): {closed} vs {doubled:?}"))?;
        ensure(closed == tangent_x(&a3, &a2, &a1, &z0), || format!("tangent oracle disagrees at ({a3}, {a2}, {a1}, {a0})"))?;
        n += 1;
    }
    within(start.elapsed(), 5)?;
    Ok(format!("200 tuples exact, {:.2?}", start.elapsed()))
}

// lambda = (4 a2 - a3^2) / 8, x = ((4 a2 - a3^2)^2 - 64 a0) / (64 a1 - 8 a3 (4 a2 - a3^2))
fn bertini_oracle(q: &QuarticFamily, u: &Rational) -> Option<Rational> {
    let [a0, a1, a2, a3] = q.coeffs().map(|p| p.eval(u));
    let w = r(4) * &a2 - a3.square();
    (w.square() - r(64) * &a0).checked_div(&(r(64) * &a1 - r(8) * &a3 * &w))
}

fn bertini() -> Outcome {
    let start = Instant::now();
    let mut g = rng(2);
    for _ in 0..50 {
        let a3 = loop {
            let p = int_poly(&mut g, 2, 6);
            if p.degree() == Some(2) {
                break p;
            }
        };
        let q = QuarticFamily::new(int_poly(&mut g, 2, 6), int_poly(&mut g, 2, 6), int_poly(&mut g, 2, 6), a3)
            .map_err(|e| e.to_string())?;
        let b = bertini_multisection(&q).map_err(|e| e.to_string())?;
        let label = || format!("{:?}", q.coeffs().map(|p| p.to_text("u")));
        ensure(b.unreduced_num.degree() == Some(8), || format!("{}: numerator degree {:?}", label(), b.unreduced_num.degree()))?;
        ensure(b.unreduced_den.degree().is_some_and(|d| d <= 6), || format!("{}: denominator degree", label()))?;
        let rep = verify_multisection(&SurfaceModel::Quartic(q.clone()), &b.section);
        ensure(rep.identity_holds && rep.nonconstant, || format!("{}: {rep:?}", label()))?;
        for u in -3..=3 {
            let u = r(u);
            if let (Some(want), Some((x, _, _))) = (bertini_oracle(&q, &u), b.section.at(&u)) {
                ensure(want == x, || format!("{}: x({u}) = {x}, closed form {want}", label()))?;
            }
        }
    }
    within(start.elapsed(), 10)?;
    Ok(format!("50 families, numerator degree 8, identity exact, {:.2?}", start.elapsed()))
}

fn doubling_end_to_end() -> Outcome {
    let start = Instant::now();
    let mut g = rng(3);
    let (mut done, mut attempts, mut max_degree) = (0, 0, 0);
    while done < 25 {
        attempts += 1;
        ensure(attempts < 2000, || format!("only {done} usable families in {attempts} draws"))?;
        let f = random_family(&mut g, 4);
        if model_form_checks(&f).form != ModelForm::TypeS {
            continue;
        }
        let Ok(out) = doubling_multisection(&f, &r(0), 100) else { continue };
        let sigma = &out.section;
        let rep = verify_multisection(&SurfaceModel::Cubic(f.clone()), sigma);
        ensure(rep.passed && sigma.base_degree <= 8, || format!("{f:?}: {rep:?}"))?;
        max_degree = max_degree.max(sigma.base_degree);
        let mut checked = 0;
        for s in 1..=40 {
            if checked == 10 {
                break;
            }
            let s = r(s);
            let (Some(y), Some(t)) = (out.fiber_param.y_of.eval(&s), out.fiber_param.t_of.eval(&s)) else { continue };
            let [c0, c1, c2, c3] = f.specialize(&t);
            let Ok(curve) = CubicCurve::new(c3, c2, c1, c0) else { continue };
            let Ok(image) = curve.multiply(out.multiplier as i64, &CurvePoint::affine(out.fiber_x.clone(), y)) else { continue };
            let Some((x, z, u)) = sigma.at(&s) else { continue };
            ensure(image == CurvePoint::affine(x, z) && u == t, || format!("{f:?}: spot check at s = {s}"))?;
            checked += 1;
        }
        ensure(checked == 10, || format!("{f:?}: only {checked} spot checks"))?;
        done += 1;
    }
    within(start.elapsed(), 60)?;
    Ok(format!("25 families, max degree {max_degree}, 250 spot checks, {:.2?}", start.elapsed()))
}

fn decision_tree() -> Outcome {
    let mut g = rng(4);
    let mut routed = 0;
    let shapes = [DoublingBranch::RetryAtAlpha, DoublingBranch::Exceptional7, DoublingBranch::Exceptional8];
    for (k, want) in shapes.iter().cycle().take(30).enumerate() {
        let a0 = loop {
            let p = int_poly(&mut g, 2, 5);
            if !p.is_zero() {
                break p;
            }
        };
        let a3 = irreducible_quadratic(&mut g, 4);
        let alpha = if *want == DoublingBranch::RetryAtAlpha { nonzero_rational(&mut g, 5) } else { r(0) };
        let beta = match want {
            DoublingBranch::Exceptional7 => nonzero_rational(&mut g, 5),
            DoublingBranch::Exceptional8 => r(0),
            _ => small_rational(&mut g, 5),
        };
        // a1 = 2 beta a0, a2 = beta^2 a0 - alpha a3, so a1^2 - 4 a2 a0 = 4 alpha a3 a0
        let a1 = a0.scale(&(r(2) * &beta));
        let a2 = &a0.scale(&beta.square()) - &a3.scale(&alpha);
        let f = QuadraticFamily::from_coeffs(a0, a1, a2, a3).map_err(|e| e.to_string())?;
        let d = doubling_analysis(&f, &r(0)).map_err(|e| format!("case {k}: {e}"))?;
        ensure(d.branch == *want, || format!("case {k}: {:?} routed to {:?}", want, d.branch))?;
        ensure(d.alpha.as_ref() == Some(&alpha) && d.beta.as_ref() == Some(&beta), || format!("case {k}: {d:?}"))?;
        routed += 1;
    }
    Ok(format!("{routed}/30 routed"))
}

fn abc(f: &QuadraticFamily) -> [QPoly; 3] {
    let form = |j: usize| QPoly::new((0..4).map(|i| f.a(i).coeff(j)).collect());
    [form(2), form(1), form(0)]
}

fn discriminant(f: &QuadraticFamily) -> QPoly {
    let [a, b, c] = abc(f);
    &(&b * &b) - &(&a * &c).scale(&r(4))
}

fn detectors() -> Outcome {
    let mut g = rng(5);
    let cubic = |g: &mut rand_chacha::ChaCha8Rng| loop {
        let c: Vec<Rational> = (0..4).map(|_| small_rational(g, 5)).collect();
        if c[3] != 0 && c[0] != 0 {
            break c;
        }
    };
    for k in 0..25 {
        let c = cubic(&mut g);
        let sq = if k % 5 == 0 { QPoly::one() } else { QPoly::linear_root(small_rational(&mut g, 5)).pow(2) };
        let f = QuadraticFamily::from_coeffs(sq.scale(&c[0]), sq.scale(&c[1]), sq.scale(&c[2]), sq.scale(&c[3]))
            .map_err(|e| e.to_string())?;
        let rep = detect_degenerations(&f);
        ensure(matches!(rep.kind, Degeneration::ProductWithElliptic { .. }), || format!("product {k}: {:?}", rep.kind))?;
        ensure(rep.transform_holds(&f), || format!("product {k}: transform"))?;
        // (y / (t - alpha))^2 is the constant cubic
        let t = r(7) + small_rational(&mut g, 3);
        let x = small_rational(&mut g, 4);
        let cx = c[3].clone() * x.pow(3) + c[2].clone() * x.square() + c[1].clone() * &x + &c[0];
        ensure(f.rhs(&x, &t) == sq.eval(&t) * cx, || format!("product {k}: cubic"))?;
        ensure(discriminant(&f).is_zero() && conic_bundle_view(&f).discriminant.is_zero(), || format!("product {k}: Delta"))?;
    }
    for k in 0..25 {
        let c = cubic(&mut g);
        let q = if k % 2 == 0 { QPoly::linear_root(small_rational(&mut g, 5)) } else { irreducible_quadratic(&mut g, 4) };
        let f = QuadraticFamily::from_coeffs(q.scale(&c[0]), q.scale(&c[1]), q.scale(&c[2]), q.scale(&c[3]))
            .map_err(|e| e.to_string())?;
        let rep = detect_degenerations(&f);
        let Degeneration::CommonFactor { q: found, cubic: found_c } = &rep.kind else {
            return Err(format!("common factor {k}: {:?}", rep.kind));
        };
        // q(t) z^2 = c3 x^3 + ... with y = q z: ai = ci q
        ensure((0..4).all(|i| found.scale(&found_c[i]) == *f.a(i)), || format!("common factor {k}: model"))?;
        ensure(found.divides(&q) && q.divides(found), || format!("common factor {k}: q"))?;
        ensure(rep.transform_holds(&f) && !discriminant(&f).is_zero(), || format!("common factor {k}"))?;
    }
    for k in 0..50 {
        let f = random_family(&mut g, 5);
        let rep = detect_degenerations(&f);
        ensure(rep.kind == Degeneration::None, || format!("generic {k}: {:?}", rep.kind))?;
        ensure(!discriminant(&f).is_zero(), || format!("generic {k}: Delta"))?;
    }
    // Delta = 0 without a common square: (x t + 1)^2 (x + 1) in t
    let f = QuadraticFamily::from_i64s(&[1], &[1, 2], &[0, 2, 1], &[0, 0, 1]).map_err(|e| e.to_string())?;
    ensure(discriminant(&f).is_zero() && conic_bundle_view(&f).discriminant.is_zero(), || "square bundle".into())?;
    ensure(!matches!(detect_degenerations(&f).kind, Degeneration::ProductWithElliptic { .. }), || "square bundle kind".into())?;
    Ok("25 products, 25 common factors, 50 generic, 1 square bundle".into())
}

fn brute_force(f: &QuadraticFamily, bound: i64) -> Vec<(Rational, Rational, Rational)> {
    let mut values: Vec<BigRational> = Vec::new();
    for p in -bound..=bound {
        for q in 1..=bound {
            let v = BigRational::new(p.into(), q.into());
            if !values.contains(&v) {
                values.push(v);
            }
        }
    }
    let h = |v: &BigRational| v.numer().abs().max(v.denom().clone());
    let mut out = Vec::new();
    for x in &values {
        for t in &values {
            if h(x) + h(t) > BigInt::from(bound) {
                continue;
            }
            let [a0, a1, a2, a3] = f.coeffs().map(|a| {
                a.coeffs().iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c.as_big())
            });
            let rhs = ((a3 * x + a2) * x + a1) * x + a0;
            if rhs.is_negative() {
                continue;
            }
            let (n, d) = (rhs.numer().sqrt(), rhs.denom().sqrt());
            if &(&n * &n) != rhs.numer() || &(&d * &d) != rhs.denom() {
                continue;
            }
            let y = BigRational::new(n, d);
            let wrap = |v: &BigRational| Rational::from_big(v.clone());
            out.push((wrap(x), wrap(&y), wrap(t)));
            if !y.is_zero() {
                out.push((wrap(x), wrap(&-y), wrap(t)));
            }
        }
    }
    out.sort();
    out
}

fn census_check() -> Outcome {
    let f = fixture("generic");
    let mut got: Vec<_> = enumerate_points(&f, 4, &[]).into_iter().map(|p| (p.x, p.y, p.t)).collect();
    got.sort();
    let want = brute_force(&f, 4);
    ensure(got == want, || format!("B = 4: {} enumerated, {} brute force", got.len(), want.len()))?;
    let start = Instant::now();
    let c = census(&f, &[2, 4, 8, 16], &[]).map_err(|e| e.to_string())?;
    within(start.elapsed(), 60)?;
    ensure(c.counts.windows(2).all(|w| w[0] <= w[1]), || format!("not monotone: {:?}", c.counts))?;
    let all = enumerate_points(&f, 16, &[]);
    ensure(all.iter().all(|p| f.contains_point(&p.x, &p.y, &p.t)), || "point off the surface".into())?;
    let slope = growth_report(&c).map_err(|e| e.to_string())?.slope;
    ensure(slope > 0.0, || format!("slope {slope}"))?;
    Ok(format!("B = 4 matches ({} points), N = {:?}, slope {slope:.3}, {:.2?}", want.len(), c.counts, start.elapsed()))
}

fn exception_witnessed(f: &QuadraticFamily, q_of: &QFunc, s: &quadfam::rank1::RankOneSample) -> bool {
    match &s.certificate {
        Certificate::Pole => q_of.den().eval(&s.u).is_zero(),
        Certificate::Defect { defect } => s.t.as_ref().is_some_and(|t| specialize_curve(f, t).err() == Some(*defect)),
        Certificate::Torsion { order } => {
            let (Some(t), Some(y)) = (&s.t, &s.y) else { return false };
            let Ok(curve) = specialize_curve(f, t) else { return false };
            let p = CurvePoint::affine(s.x.clone(), y.clone());
            let hits = |n: u32| curve.multiply(n as i64, &p).is_ok_and(|q| q.is_infinity());
            hits(*order) && (1..*order).all(|n| !hits(n))
        }
        Certificate::NonTorsion => false,
    }
}

fn rank_one() -> Outcome {
    let start = Instant::now();
    let f = fixture("rank_one");
    let fam = rank_one_family(&f, (&r(-1), &r(1), &r(1)), DEFAULT_U_RANGE).map_err(|e| e.to_string())?;
    within(start.elapsed(), 30)?;
    ensure(fam.identity_holds && fam.q_of.map_degree() == 2, || "parametrization".into())?;
    ensure(fam.samples.iter().all(|s| s.certificate == Certificate::NonTorsion), || "uncertified sample".into())?;
    ensure(fam.exceptions.len() <= 5, || format!("{} exceptions", fam.exceptions.len()))?;
    for e in &fam.exceptions {
        ensure(exception_witnessed(&f, &fam.q_of, e), || format!("unwitnessed exception {e:?}"))?;
    }
    let listed: Vec<String> = fam.exceptions.iter().map(|e| format!("u = {}: {:?}", e.u, e.certificate)).collect();
    Ok(format!("{} certified, exceptions [{}], {:.2?}", fam.samples.len(), listed.join("; "), start.elapsed()))
}

fn origin_point_note() -> String {
    let f = fixture("rank_one");
    match rank_one_family(&f, (&r(0), &r(1), &r(0)), DEFAULT_U_RANGE) {
        Ok(fam) => format!(
            "point (0, 1, 0): {} certified, {} exceptions (fiber x = 0 is 3-torsion)",
            fam.samples.len(),
            fam.exceptions.len()
        ),
        Err(e) => format!("point (0, 1, 0): {e}"),
    }
}

fn delta_bookkeeping() -> Outcome {
    let mut g = rng(8);
    let mut n = 0;
    while n < 50 {
        let f = random_family(&mut g, 6);
        let disc = discriminant(&f);
        if !disc.gcd(&disc.derivative()).is_constant() {
            continue;
        }
        let v = conic_bundle_view(&f);
        ensure(v.discriminant == disc, || format!("{f:?}: Delta"))?;
        let at_infinity = usize::from(disc.degree().unwrap_or(0) < 6);
        let want = disc.degree().unwrap_or(0) + at_infinity + 1;
        ensure(v.delta == Some(want) && want <= 7, || format!("{f:?}: delta {:?}, expected {want}", v.delta))?;
        ensure(v.degree == Some(8 - want as i64), || format!("{f:?}: degree {:?}", v.degree))?;
        n += 1;
    }
    Ok("50 families, delta = deg Delta + 1, degree = 8 - delta".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("doubling formula vs group law", doubling_formula),
        ("Bertini multisection", bertini),
        ("doubling multisection end to end", doubling_end_to_end),
        ("decision tree routing", decision_tree),
        ("degeneration detectors", detectors),
        ("census soundness and completeness", census_check),
        ("rank one families", rank_one),
        ("delta and degree bookkeeping", delta_bookkeeping),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("info: {}", origin_point_note());
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
