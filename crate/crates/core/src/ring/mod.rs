//! Coefficient fields and sparse multivariate polynomials.
//!
//! Polynomials stand for elements of the power-series ring `k[[x]]`: a
//! polynomial is a unit exactly when its constant term is nonzero, and
//! inverses of units are available to any finite precision.

mod parse;
mod poly;
mod scalar;

pub use poly::{Monomial, Poly, Ring, RingRef, TruncatedSeries};
pub use scalar::{is_prime, Field, Scalar};
