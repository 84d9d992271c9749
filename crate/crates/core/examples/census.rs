//! Point counts `N(B)` of bounded height and the fitted log-log slope.

use quadfam::counting::{census, enumerate_points, growth_report};
use quadfam::surface::QuadraticFamily;

fn main() {
    let f = QuadraticFamily::from_i64s(&[1], &[0, 1], &[], &[1, 0, 1]).unwrap();
    for p in enumerate_points(&f, 3, &[]) {
        println!("  ({}, {}, {}) height {}", p.x, p.y, p.t, p.height);
    }
    let c = census(&f, &[2, 4, 8, 16], &[]).unwrap();
    let g = growth_report(&c).unwrap();
    for row in &g.table {
        println!("B = {:>3}  N = {}", row.b, row.n);
    }
    println!("slope {:.3}", g.slope);
}
