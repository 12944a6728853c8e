use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by constructors and evaluators.
///
/// The split between errors and [`crate::ValidityWarning`]s is deliberate:
/// errors are conditions under which a returned number would be meaningless
/// (bad domains, unnormalizable states, missing model data), while warnings
/// accompany numbers that are well-defined but computed outside the regime a
/// formula was derived for.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Arguments outside a constructor's documented domain.
    #[error("invalid construction: {0}")]
    Construction(String),

    /// Adaptive quadrature exhausted its subdivision budget before reaching
    /// the requested tolerance. Carries the partial estimate so callers can
    /// judge how bad the failure is.
    #[error(
        "quadrature did not converge: estimate {estimate:.6e}, \
         residual error bound {error_bound:.3e} after {subdivisions} subdivisions"
    )]
    QuadratureNotConverged {
        estimate: Complex64,
        error_bound: f64,
        subdivisions: usize,
    },

    /// A two-photon state built from distinguishable-photon (type-II) data
    /// was passed to an absorption evaluator before being symmetrized.
    #[error(
        "joint amplitude is asymmetric under photon exchange; \
         apply symmetrize_type2 before evaluating absorption"
    )]
    UnsymmetrizedJsa,

    /// One-photon absorption was requested for a molecule with no
    /// intermediate-level data.
    #[error("molecule has no one-photon level (transition frequency, linewidth, dipole coupling)")]
    MissingOnePhotonLevel,

    /// An intermediate level sits close enough to the driving frequency that
    /// the non-resonant cross-section sum is invalid.
    #[error(
        "intermediate level {index} is near-resonant: |omega_mg - omega_0| = {detuning:.3e} rad/s \
         is within 10x the two-photon linewidth {gamma_fg:.3e} rad/s; \
         the non-resonant sum-over-states formula does not apply"
    )]
    NearResonantLevel {
        index: usize,
        detuning: f64,
        gamma_fg: f64,
    },

    /// A ratio was requested whose denominator vanishes (e.g. an enhancement
    /// factor against a comparator that does not absorb).
    #[error("degenerate ratio: {0}")]
    Degenerate(String),

    /// Scenario-level validation failures, all collected before returning.
    #[error("scenario validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// Malformed serialized data (joint-amplitude files, etc.).
    #[error("format error: {0}")]
    Format(String),
}
