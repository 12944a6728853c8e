//! Numerical foundations: the scaled complementary error function, adaptive
//! complex quadrature, uniform spectral grids, and the diagonal
//! (sum-frequency) projection of two-dimensional amplitudes.
//!
//! All closed-form physics in the crates above is cross-checked against these
//! routines, so they are written independently of those closed forms.

mod erfcx;
mod grid;
mod quad;

pub use erfcx::erfcx;
pub use grid::{DiagonalProjection, SpectralGrid1D, SpectralGrid2D};
pub use quad::{integrate_1d, integrate_1d_segmented, MAX_SUBDIVISIONS};

/// The complex sample type every grid constructor and quadrature closure
/// works in, re-exported so downstream crates need no direct dependency.
pub use num_complex::Complex64;

/// Weight of one uniform step under the spectral measure đω = dω/2π.
///
/// Every đ-integral in the crate funnels its 1/2π through here, so the measure
/// convention lives in exactly one place.
#[inline]
pub fn dbar_weight(step: f64) -> f64 {
    step / std::f64::consts::TAU
}

/// 1/2π, for quadratures parameterized directly in ω rather than by grid step.
pub const INV_TWO_PI: f64 = 1.0 / std::f64::consts::TAU;
