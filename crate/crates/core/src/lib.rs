//! Weierstrass semigroups, pure gaps, Riemann-Roch spaces and algebraic
//! geometry codes on Kummer extensions `y^m = f(x)^lambda` over `F_q`.
//!
//! Every ramified place of such a curve is totally ramified, so the numbers
//! involved (gaps, dimensions, valuations) reduce to floor sums in `m`, `r`
//! and `lambda`. The modules build on each other:
//!
//! * [`gf`] and [`poly`]: finite fields and univariate polynomials.
//! * [`curve`]: the curve, its places and principal divisors.
//! * [`rr`]: divisors, `l(D)` and explicit bases of `L(D)`.
//! * [`onepoint`] and [`twopoint`]: Weierstrass semigroups and pure gaps.
//! * [`code`]: evaluation codes and their minimum distance.

pub mod cli;
pub mod code;
pub mod curve;
pub mod gf;
pub mod onepoint;
pub mod poly;
pub mod rr;
pub mod twopoint;

#[cfg(test)]
mod testutil;

pub use code::{build_cl, build_comega, exact_min_distance, shorten, LinearCode, Matrix};
pub use curve::{CurveConfig, KummerCurve, Place};
pub use gf::{make_field, Field, FieldElement};
pub use poly::Polynomial;
pub use rr::{rr_basis, rr_dim, Divisor};
