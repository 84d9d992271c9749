//! Curves `E_{q(u)}` with a point of infinite order, from the point
//! `(-1, 1, 1)` of `y^2 = (t^2 + 1) x^3 + t^2 + t + 1`.

use quadfam::exact::Rational;
use quadfam::rank1::{integer_range, rank_one_family, torsion_fiber_scan, DEFAULT_U_RANGE};
use quadfam::surface::QuadraticFamily;

fn main() {
    let f = QuadraticFamily::from_i64s(&[1, 1, 1], &[], &[], &[1, 0, 1]).unwrap();
    let torsion = torsion_fiber_scan(&f, &integer_range(-5..=5));
    println!("torsion fibers in [-5, 5]: {torsion:?}");

    let r = Rational::from;
    let fam = rank_one_family(&f, (&r(-1), &r(1), &r(1)), DEFAULT_U_RANGE).unwrap();
    println!("t = q(u) = {}", fam.q_of.to_text("u"));
    println!("y(u) = {}", fam.y_of.to_text("u"));
    println!("identity: {}", fam.identity_holds);
    println!("certified: {}", fam.samples.len());
    for s in fam.samples.iter().take(5) {
        println!("  u = {}: E_{} carries ({}, {})", s.u, s.t.as_ref().unwrap(), s.x, s.y.as_ref().unwrap());
    }
    for e in &fam.exceptions {
        println!("  exception at u = {}: {:?}", e.u, e.certificate);
    }
}
