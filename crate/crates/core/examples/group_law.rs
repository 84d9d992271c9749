//! Chord-tangent arithmetic on `y^2 = x^3 + 1` over `Q`, and the doubling
//! formula at `x = 0` checked against it.

use quadfam::curves::{torsion_order_bounded, x_double_at_zero, CubicCurve, CurvePoint};
use quadfam::exact::Rational;

fn show(p: &CurvePoint<Rational>) -> String {
    match (p.x(), p.z()) {
        (Some(x), Some(z)) => format!("({x}, {z})"),
        _ => "O".to_string(),
    }
}

fn main() {
    let r = Rational::from;
    let curve = CubicCurve::new(r(1), r(0), r(0), r(1)).unwrap();
    let p = CurvePoint::affine(r(2), r(3));
    for n in 1..=6 {
        println!("{n} * (2, 3) = {}", show(&curve.multiply(n, &p).unwrap()));
    }
    println!("order of (2, 3): {:?}", torsion_order_bounded(&curve, &p).unwrap());

    // y^2 = 2x^3 - x^2 + 3x + 4 through (0, 2)
    let (a3, a2, a1, a0) = (r(2), r(-1), r(3), r(4));
    let e = CubicCurve::new(a3.clone(), a2.clone(), a1.clone(), a0.clone()).unwrap();
    let doubled = e.double(&CurvePoint::affine(r(0), r(2))).unwrap();
    let closed = x_double_at_zero(&a3, &a2, &a1, &a0).unwrap();
    println!("2 * (0, 2) = {}", show(&doubled));
    println!("closed form x = {closed}, agrees: {}", doubled.x() == Some(&closed));
}
