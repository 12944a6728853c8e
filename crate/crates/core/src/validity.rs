//! Regime guards that warn without aborting.
//!
//! Each closed-form probability or rate holds in a specific regime
//! (quasi-monochromatic driving, isolated pairs, first-order perturbation
//! theory, fully covered spectral grids). When an input leaves that regime the
//! evaluators still return the formula's value — it is often the quantity a
//! user wants to inspect — but attach a warning carrying the violated ratio so
//! severity can be judged programmatically.

use std::fmt;

/// A computed value together with any regime warnings raised on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub warnings: Vec<ValidityWarning>,
}

impl<T> Flagged<T> {
    /// Wraps a value with no warnings.
    pub fn clean(value: T) -> Self {
        Flagged {
            value,
            warnings: Vec::new(),
        }
    }

    /// Wraps a value with the given warnings.
    pub fn new(value: T, warnings: Vec<ValidityWarning>) -> Self {
        Flagged { value, warnings }
    }

    /// Adds a warning in place.
    pub fn push(&mut self, warning: ValidityWarning) {
        self.warnings.push(warning);
    }

    /// Appends warnings raised by an earlier stage.
    pub fn absorb(&mut self, mut earlier: Vec<ValidityWarning>) {
        let mut own = std::mem::take(&mut self.warnings);
        earlier.append(&mut own);
        self.warnings = earlier;
    }

    /// Maps the value, keeping warnings.
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Flagged<U> {
        Flagged {
            value: f(self.value),
            warnings: self.warnings,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Conditions under which a returned value is well-defined but lies outside
/// the regime its formula was derived for.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidityWarning {
    /// Long-pulse formulas assume the optical bandwidth is small against the
    /// two-photon linewidth; `ratio` is bandwidth/γ_fg (warned above 0.1).
    BandwidthVsLinewidth { ratio: f64 },

    /// Impulsive formulas assume the interaction is short against the
    /// final-state lifetime; `ratio` is duration·γ_fg for pulses or
    /// γ_fg/(correlation bandwidth) for pairs (warned above 0.1).
    DurationVsLifetime { ratio: f64 },

    /// Pair states are treated as isolated single pairs; multi-pair terms
    /// grow once the pair-generation probability ε² exceeds ~0.1.
    PairProbability { epsilon_sq: f64 },

    /// First-order perturbation theory: an excitation probability above ~0.1
    /// is no longer a small correction.
    LargeProbability { probability: f64 },

    /// The Lorentzian line factor still carried weight beyond the integration
    /// domain; `bound` is an upper bound on the missing mass relative to the
    /// returned value.
    LorentzianTail { bound: f64 },

    /// A diagonal (sum-frequency) sample fell outside grid coverage and was
    /// taken as zero; `sum_frequency` is the requested ω+ω̃ in rad/s.
    GridCoverage { sum_frequency: f64 },

    /// The pump-duration factor χ of the flux-form rate expressions is
    /// meant to be of order unity; values far above signal that the photon
    /// flux and bandwidth inputs describe an atypical source.
    LargeChi { chi: f64 },

    /// Pair arrivals overlap in time once the pair flux approaches the
    /// correlation bandwidth; `ratio` is flux/bandwidth (warned above 1).
    PairOverlap { ratio: f64 },
}

impl fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidityWarning::BandwidthVsLinewidth { ratio } => write!(
                f,
                "optical bandwidth is {ratio:.3} of the two-photon linewidth; \
                 the quasi-monochromatic formula degrades above 0.1"
            ),
            ValidityWarning::DurationVsLifetime { ratio } => write!(
                f,
                "interaction time is {ratio:.3} of the final-state lifetime; \
                 the impulsive formula degrades above 0.1"
            ),
            ValidityWarning::PairProbability { epsilon_sq } => write!(
                f,
                "pair-generation probability {epsilon_sq:.3} exceeds 0.1; \
                 multi-pair contributions are no longer negligible"
            ),
            ValidityWarning::LargeProbability { probability } => write!(
                f,
                "excitation probability {probability:.3e} exceeds 0.1; \
                 first-order perturbation theory is strained"
            ),
            ValidityWarning::LorentzianTail { bound } => write!(
                f,
                "integration domain truncates the line shape; \
                 missing tail bounded by {bound:.2e} of the result"
            ),
            ValidityWarning::GridCoverage { sum_frequency } => write!(
                f,
                "sum frequency {sum_frequency:.6e} rad/s lies outside grid coverage; \
                 the joint amplitude was taken as zero there"
            ),
            ValidityWarning::LargeChi { chi } => write!(
                f,
                "pump-duration factor chi = {chi:.3} is far from order unity; \
                 check the flux/bandwidth inputs"
            ),
            ValidityWarning::PairOverlap { ratio } => write!(
                f,
                "pair flux is {ratio:.3} of the correlation bandwidth; \
                 pairs overlap in time and the isolated-pair rate law saturates"
            ),
        }
    }
}
