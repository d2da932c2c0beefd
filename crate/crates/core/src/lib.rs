//! Exact computer algebra for Lie algebras with cosymplectic and Kähler
//! structures.
//!
//! Everything is computed over the rationals (or Gaussian rationals), so
//! every identity is decided by an exact zero test.

#![allow(clippy::needless_range_loop)]

pub mod catalogue;
pub mod ce;
pub mod correspondence;
pub mod deformation;
pub mod error;
pub mod exterior;
pub mod foliated;
pub mod json;
pub mod lie;
pub mod pipeline;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod structures;

pub use error::{Error, Result};
pub use matrix::{CMatrix, Matrix, QMatrix};
pub use report::{Report, Stage, Verdict, Witness};
pub use scalar::{ComplexScalar, Scalar};
