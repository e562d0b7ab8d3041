//! Special functions, adaptive quadrature and monotone root finding.
//!
//! Everything here is a pure function of its inputs.

mod bessel;
mod gamma;
mod quadrature;
mod roots;

pub use bessel::{
    bessel_first_zero, bessel_j, bessel_zeros_scan, mcmahon_guess, MAX_ARGUMENT, MAX_ORDER, SERIES_SWITCH,
};
pub use gamma::{gamma, ln_gamma};
pub use quadrature::{integrate, try_integrate, QuadratureResult, Tolerance};
pub use roots::{solve_increasing, RESIDUAL};

pub(crate) use gamma::gamma_pos;
