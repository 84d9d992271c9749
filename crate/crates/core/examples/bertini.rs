//! The degree 8 multisection of `z^2 = x^4 + u^2 x^3 + 1` from the second
//! point at infinity.

use quadfam::multisection::{bertini_multisection, verify_multisection, QuarticFamily, SurfaceModel};

fn main() {
    let q = QuarticFamily::from_i64s(&[1], &[], &[], &[0, 0, 1]).unwrap();
    let b = bertini_multisection(&q).unwrap();
    println!("x(u) = {}", b.section.x_of.to_text("u"));
    println!("z(u) = {}", b.section.z_of.to_text("u"));
    println!("unreduced: ({}) / ({})", b.unreduced_num.to_text("u"), b.unreduced_den.to_text("u"));
    let rep = verify_multisection(&SurfaceModel::Quartic(q), &b.section);
    println!("degree {}, identity {}, verified {}", rep.recomputed_degree, rep.identity_holds, rep.passed);
    for s in rep.samples.iter().take(4) {
        println!("  u = {}: (x, z) = ({}, {})", s.s, s.x, s.z);
    }
    println!("{}", serde_json::to_string_pretty(&b.section).unwrap());
}
