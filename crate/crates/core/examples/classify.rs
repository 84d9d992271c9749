//! Conic bundle view, degenerations and model-form checks for a few families.
//!
//! Run with `cargo run --example classify`.

use quadfam::surface::{conic_bundle_view, detect_degenerations, model_form_checks, QuadraticFamily};

fn show(name: &str, f: &QuadraticFamily) {
    println!("== {name}");
    match f.check() {
        Ok(()) => println!("valid"),
        Err(e) => println!("rejected: {e}"),
    }
    let v = conic_bundle_view(f);
    println!("Delta = {}", v.discriminant.to_text("x"));
    println!("delta = {:?}, degree = {:?}, fiber at infinity: {:?}", v.delta, v.degree, v.infinity_fiber);
    for w in &v.warnings {
        println!("warning: {w}");
    }
    println!("degeneration: {:?}", detect_degenerations(f).kind);
    let forms = model_form_checks(f);
    for c in &forms.checks {
        println!("  {} -> {} {:?}", c.condition, c.passed, c.witness);
    }
    println!("form: {:?}", forms.form);
}

fn main() {
    let generic = QuadraticFamily::from_i64s(&[0, -1, 1], &[1], &[0, 1], &[1, 0, 1]).unwrap();
    show("generic", &generic);
    let product = QuadraticFamily::from_i64s(&[4, -4, 1], &[], &[], &[4, -4, 1]).unwrap();
    show("a_i = c_i (t - 2)^2", &product);
    let common = QuadraticFamily::from_i64s(&[1, 0, 1], &[2, 0, 2], &[], &[1, 0, 1]).unwrap();
    show("a_i = c_i (t^2 + 1)", &common);
    let split = QuadraticFamily::from_i64s(&[1, 0, 1], &[0, 1], &[2], &[-1, 0, 1]).unwrap();
    show("a3 = t^2 - 1", &split);
}
