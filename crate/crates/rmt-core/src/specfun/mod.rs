//! Scalar special functions and quadrature rules used by every other module.

mod airy;
mod hermite;
pub mod quad;
mod scaling;

pub use airy::airy;
pub use hermite::{hermite_phi, hermite_phi_pair, scaled_pair, HERMITE_K_MAX};
pub use quad::{
    composite_gl, gauss_legendre, make_grid, make_grid_scaled, MapKind, QuadratureGrid,
};
pub use scaling::ScalingParams;

/// ln(n!) by direct summation; exact enough (\~1e-13 relative) for n <= 10^4.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
