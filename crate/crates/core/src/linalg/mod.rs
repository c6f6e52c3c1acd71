//! Matrices over the power-series ring: block assembly, residue-field and
//! generic ranks, unitriangular inversion and unit-pivot reduction.

mod matrix;
mod reduce;
mod scalar_matrix;

pub use matrix::PolyMatrix;
pub use reduce::{elementary_reduce, BaseChange, Exactness, PivotPolicy, Reduction};
pub use scalar_matrix::{random_scalar, ScalarMatrix};
