#![allow(dead_code)]

use quadfam::exact::{QPoly, Rational};
use quadfam::surface::QuadraticFamily;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64) -> Rational {
    Rational::from(n)
}

pub fn small_rational(g: &mut impl Rng, bound: i64) -> Rational {
    Rational::new(g.gen_range(-bound..=bound), g.gen_range(1..=bound))
}

pub fn nonzero_rational(g: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let q = small_rational(g, bound);
        if q != 0 {
            return q;
        }
    }
}

pub fn int_poly(g: &mut impl Rng, degree: usize, bound: i64) -> QPoly {
    QPoly::from_i64s(&(0..=degree).map(|_| g.gen_range(-bound..=bound)).collect::<Vec<_>>())
}

/// `c (t^2 + b t + e)` with `b^2 - 4e < 0`.
pub fn irreducible_quadratic(g: &mut impl Rng, bound: i64) -> QPoly {
    loop {
        let b = g.gen_range(-bound..=bound);
        let e = g.gen_range(1..=bound * bound);
        let c = g.gen_range(1..=bound) * if g.gen_bool(0.5) { 1 } else { -1 };
        if b * b < 4 * e {
            return QPoly::from_i64s(&[c * e, c * b, c]);
        }
    }
}

/// Random family with irreducible quadratic `a3` and `a0 != 0`.
pub fn random_family(g: &mut impl Rng, bound: i64) -> QuadraticFamily {
    loop {
        let a0 = int_poly(g, 2, bound);
        if a0.is_zero() {
            continue;
        }
        let a1 = int_poly(g, 2, bound);
        let a2 = int_poly(g, 2, bound);
        let a3 = irreducible_quadratic(g, bound);
        if let Ok(f) = QuadraticFamily::from_coeffs(a0, a1, a2, a3) {
            if f.check().is_ok() {
                return f;
            }
        }
    }
}
