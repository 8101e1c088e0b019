//! Spectra and threshold scattering of thin trapezoidal strips with one
//! slanted Neumann end.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod eigen;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod model1d;
pub mod scattering;

pub use error::{Error, Result};
