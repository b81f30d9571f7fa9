//! Special functions and quadrature.

mod bessel;
mod quadrature;

pub use bessel::bessel_jn;
pub use quadrature::{compensated_sum, integrate, integrate_with_error, Integral, QuadratureSpec};
