//! Secure multi-party evaluation of matrix polynomials with polynomial
//! sharing, plus an in-process cluster simulator.

pub mod analytics;
pub mod cluster;
pub mod circuit;
pub mod error;
pub mod field;
pub mod interpolation;
pub mod matrix;
pub mod privacy;
pub mod procedures;
pub mod rng;
pub mod sharing;
pub mod transcript;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, MERSENNE_61};
pub use matrix::{Matrix, MatrixDoc};
