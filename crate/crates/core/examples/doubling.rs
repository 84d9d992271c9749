//! Doubling multisections, including fibers where doubling is constant and
//! the construction moves to another fiber.

use quadfam::exact::Rational;
use quadfam::multisection::{doubling_multisection, verify_multisection, SurfaceModel};
use quadfam::surface::QuadraticFamily;

fn main() {
    let cases = [
        ("generic", QuadraticFamily::from_i64s(&[1], &[0, 1], &[], &[1, 0, 1])),
        ("x(2P) = 2 at x = 0", QuadraticFamily::from_i64s(&[2, 0, 1], &[4, 0, 2], &[0, 0, -1], &[1, 0, 1])),
        ("a3 x^3 + a0 (x - 1)^2", QuadraticFamily::from_i64s(&[2, 0, 1], &[-4, 0, -2], &[2, 0, 1], &[1, 0, 1])),
        ("a3 x^3 + a0", QuadraticFamily::from_i64s(&[2, 0, 1], &[], &[], &[1, 0, 1])),
    ];
    for (name, f) in cases {
        let f = f.unwrap();
        println!("== {name}");
        let out = doubling_multisection(&f, &Rational::from(0), 100).unwrap();
        for a in &out.trace {
            println!("  x0 = {}: {:?}", a.x0, a.branch);
        }
        let s = &out.section;
        println!("  fiber {} times {}: x(s) = {}", out.fiber_x, out.multiplier, s.x_of.to_text("s"));
        println!("  u(s) = {}", s.u_of.to_text("s"));
        let rep = verify_multisection(&SurfaceModel::Cubic(f), s);
        println!("  degree {}, verified {}", s.base_degree, rep.passed);
    }
}
