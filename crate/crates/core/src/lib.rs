// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod domain;
pub mod eigen_bounds;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod spectra;
pub mod trace_bounds;
pub mod verify;

pub use error::{Error, Result};
