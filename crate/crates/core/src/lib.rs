//! Exact constructions on quadratic families of elliptic curves
//! `y^2 = a3(t) x^3 + a2(t) x^2 + a1(t) x + a0(t)` with every `ai` of degree
//! at most 2 in `t`.
//!
//! Such a family is also a conic bundle over the `x`-line. The crate
//! provides:
//!
//! - [`exact`]: rationals, polynomials, rational functions, `Q(sqrt d)`;
//! - [`curves`]: cubic and quartic genus one models and their group law over
//!   any field, including function fields;
//! - [`conics`]: rational points and parametrizations of fiber conics;
//! - [`surface`]: validation, the conic bundle view, degenerations and
//!   model-form checks;
//! - [`multisection`]: rational multisections from the Bertini involution
//!   and from the doubling map;
//! - [`rank1`]: one-parameter families of curves with a certified point of
//!   infinite order;
//! - [`counting`]: bounded-height point censuses;
//! - [`cli`]: the batch front end behind the `quadfam` binary.

pub mod exact;
pub mod curves;
pub mod conics;
pub mod surface;
pub mod multisection;
pub mod rank1;
pub mod counting;
pub mod cli;
