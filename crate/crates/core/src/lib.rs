//! Computational engine for one- and two-photon absorption with classical and
//! quantum light.
//!
//! The crate evaluates excitation probabilities for molecules driven by
//! coherent pulses and by time–frequency-entangled photon pairs, the
//! enhancement factor that compares the two at fixed photon budget, and the
//! absolute event rates a detector would see in a given sample geometry.
//!
//! Layout:
//!
//! * [`numerics`] — special functions, adaptive quadrature, spectral grids and
//!   the diagonal (sum-frequency) projection they support. Everything above is
//!   validated against these independent numerical paths.
//! * [`lightstates`] — spectral amplitudes for coherent beams, joint spectral
//!   amplitudes for photon pairs, dispersion, and time-domain envelopes.
//! * [`absorption`] — molecule/beam parameters and the absorption
//!   probabilities themselves (one-photon, two-photon coherent, two-photon
//!   entangled, impulsive and dispersed variants).
//! * [`enhancement`] — quantum enhancement factors, their factorization into
//!   photon-statistics and spectral-shape parts, and flux-based forms.
//! * [`rates`] — cross-section conversions, per-molecule and per-sample event
//!   rates, and end-to-end scenario evaluation.
//!
//! Conventions used throughout (documented once, relied on everywhere):
//!
//! * Angular frequencies in rad/s; the spectral measure is đω = dω/2π, and
//!   every spectral integral routes the 1/2π through a single helper.
//! * Spectral amplitudes are unit-normalized: ∫|φ(ω)|² đω = 1 and
//!   ∫∫|ψ(ω,ω̃)|² đω đω̃ = 1.
//! * Widths named `sigma` parameterize Gaussian amplitudes as
//!   exp(−(ω−ω₀)²/4σ²), so σ is the standard deviation of the corresponding
//!   *intensity* profile; always rad/s. Quantities named `bandwidth` are plain
//!   s⁻¹ counts used by the flux-form rate expressions.

pub mod absorption;
pub mod constants;
pub mod enhancement;
mod error;
pub mod lightstates;
pub mod numerics;
pub mod rates;
pub mod units;
mod validity;

pub use error::{Error, Result};
pub use validity::{Flagged, ValidityWarning};
