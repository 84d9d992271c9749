//! A multisection over `Q(sqrt 3)` from the point `(sqrt 3, 0)` of the
//! fiber conic `y^2 = t^2 + 3`.

use quadfam::exact::Rational;
use quadfam::multisection::{extension_multisection, verify_multisection, SurfaceModel};
use quadfam::surface::QuadraticFamily;

fn main() {
    let f = QuadraticFamily::from_i64s(&[3, 0, 1], &[0, 1], &[], &[1, 0, 1]).unwrap();
    let out = extension_multisection(&f, &Rational::from(0)).unwrap();
    let s = &out.section;
    println!("field: {}", s.field);
    println!("x(s) = {}", s.x_of.to_text("s"));
    println!("u(s) = {}", s.u_of.to_text("s"));
    let rep = verify_multisection(&SurfaceModel::Cubic(f), s);
    println!("identity {}, degree {}", rep.identity_holds, rep.recomputed_degree);
    for c in rep.samples.iter().take(3) {
        println!("  s = {}: x = {}, on surface: {}", c.s, c.x, c.on_surface);
    }
}
