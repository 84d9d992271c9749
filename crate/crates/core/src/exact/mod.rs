//! Exact arithmetic kernel.
//!
//! Rationals, dense univariate polynomials over any [`Field`], reduced
//! rational functions (themselves a [`Field`], so curves can be taken over a
//! function field), and quadratic extensions `Q(sqrt d)`.
//!
//! Homogeneous binary quadratic forms `a(u, v)` are stored dehomogenized as
//! `a(u) = a(u, 1)`; a degree below 2 means roots at infinity, see
//! [`projective_roots`].

mod field;
mod poly;
mod qpoly;
mod quadext;
mod rational;
mod ratfunc;
mod text;

use thiserror::Error;

pub use field::Field;
pub use poly::Polynomial;
pub use qpoly::{
    poly_gcd, poly_square_root, projective_roots, quad_irreducible, rational_roots, squarefree_part,
    ProjectiveRoot, SquarefreeDecomposition,
};
pub use quadext::QuadExt;
pub use rational::{exact_isqrt, squarefree_kernel, Rational};
pub use ratfunc::RationalFunction;
pub use text::{parse_polynomial, parse_rational_function, rational_poly_serde};

/// Polynomials over the rationals.
pub type QPoly = Polynomial<Rational>;
/// Rational functions over the rationals.
pub type QFunc = RationalFunction<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("degree {0} exceeds the supported bound 2")]
    DegreeTooLarge(usize),
    #[error("{0} does not define a quadratic extension (need square-free d other than 0, 1)")]
    BadExtension(String),
}
