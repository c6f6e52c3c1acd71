//! Exact construction and certification of matrix factorizations
//! `φ_1 φ_2 ··· φ_d = f·I` over a power-series ring.

pub mod acceptance;
pub mod cli;
pub mod corpus;
pub mod cover;
pub mod error;
pub mod frobenius;
pub mod gamma;
pub mod linalg;
pub mod mfcore;
pub mod ring;
pub mod split;

pub use error::{Error, Result};
