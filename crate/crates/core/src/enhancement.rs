//! Quantum enhancement factors: how much more two-photon absorption a
//! time–frequency-entangled pair source drives than coherent light at the
//! same photon budget.
//!
//! The enhancement splits into two independent parts:
//!
//! * a **photon-number** part — pairs arrive exactly two at a time, so the
//!   two-photon coincidence scales with the pair flux instead of the square
//!   of the mean flux ([`qef_number`]);
//! * a **spectral** part — the sum-frequency amplitude of an entangled pair
//!   concentrates at 2ω₀ with the narrow pump envelope instead of the broad
//!   pulse self-convolution ([`qef_spectral`]).
//!
//! Closed forms for Gaussian models, regime labels at documented thresholds,
//! and the flux-based summary forms used by laboratory rate estimates are
//! provided alongside the general integral ratio.
//!
//! Probability-ratio convention: the full probability ratio
//! `tpa_epp / tpa_coherent` equals **2 ×** `qef_number × qef_spectral`. The
//! number part counts the mean entangled photon number N_EPP = 2ε² once,
//! while the pair amplitude enters the probability as 2εK — its square
//! carries 4ε². The factor 2 is part of the definition of the parts, not a
//! numerical error; [`QefBreakdown`] stores the parts and their product, and
//! the tests pin the ×2 bridge to the monolithic ratio.

use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use crate::absorption::{tpa_coherent, tpa_epp, Molecule};
use crate::lightstates::{JointSpectralAmplitude, SpectralAmplitude};
use crate::numerics::erfcx;
use crate::units::{PhotonFlux, TimeInterval};
use crate::validity::{Flagged, ValidityWarning};
use crate::{Error, Result};

/// Scale separation required before a limiting regime label is applied:
/// "much greater" means a ratio of at least this factor.
pub const REGIME_LABEL_SEPARATION: f64 = 10.0;

/// Pump-duration factor χ beyond which the flux-form expressions warn: the
/// long-pump derivation assumes χ of order unity.
pub const LARGE_CHI_GUARD: f64 = 10.0;

/// Limiting regime of the Gaussian spectral enhancement, classified by the
/// two-photon linewidth γ_fg against the coherent intensity width σ and the
/// pair sum-frequency (pump envelope) width σ_N, at
/// [`REGIME_LABEL_SEPARATION`]× separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralRegime {
    /// γ_fg ≫ σ and γ_fg ≫ σ_N: the line averages over both spectra.
    BroadLine,
    /// γ_fg ≪ σ and γ_fg ≪ σ_N: the line samples both sum-frequency peaks.
    NarrowLine,
    /// σ_N ≪ γ_fg ≪ σ: the line swallows the pair's sum-frequency peak but
    /// resolves only a slice of the coherent self-convolution.
    BetweenPumpAndPulse,
    /// σ ≪ γ_fg ≪ σ_N: the reverse ordering.
    BetweenPulseAndPump,
    /// No 10× separation on at least one side.
    General,
}

impl fmt::Display for SpectralRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            SpectralRegime::BroadLine => "line broader than both spectra",
            SpectralRegime::NarrowLine => "line narrower than both spectra",
            SpectralRegime::BetweenPumpAndPulse => {
                "line broader than the pump envelope, narrower than the pulse"
            }
            SpectralRegime::BetweenPulseAndPump => {
                "line broader than the pulse, narrower than the pump envelope"
            }
            SpectralRegime::General => "general (no limiting regime)",
        };
        f.write_str(text)
    }
}

/// The enhancement factor split into its photon-number and spectral parts.
///
/// `qef_total` is always the exact product of the two parts; the full
/// probability ratio is 2× this product (see the module notes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QefBreakdown {
    pub qef_number: f64,
    pub qef_spectral: f64,
    pub qef_total: f64,
    pub regime_label: SpectralRegime,
}

impl QefBreakdown {
    pub fn from_parts(qef_number: f64, qef_spectral: f64, regime_label: SpectralRegime) -> Self {
        QefBreakdown {
            qef_number,
            qef_spectral,
            qef_total: qef_number * qef_spectral,
            regime_label,
        }
    }
}

/// Photon-number part of the enhancement: N_EPP/N_coh² with N_EPP = 2ε².
///
/// Pairs deliver both photons of a two-photon event together, so the
/// coincidence statistics scale with the number of pairs rather than the
/// square of the mean photon number.
pub fn qef_number(epsilon_sq: f64, n_coh: f64) -> Result<f64> {
    if !(epsilon_sq > 0.0) || !epsilon_sq.is_finite() {
        return Err(Error::Construction(format!(
            "pair-generation probability must be positive and finite, got {epsilon_sq}"
        )));
    }
    if !(n_coh > 0.0) || !n_coh.is_finite() {
        return Err(Error::Construction(format!(
            "coherent photon number must be positive and finite, got {n_coh}"
        )));
    }
    Ok(2.0 * epsilon_sq / (n_coh * n_coh))
}

/// Spectral part of the enhancement: the ratio of the Lorentzian-line-
/// weighted sum-frequency intensities of the pair state and the coherent
/// comparator, independent of photon numbers and pair probability.
///
/// Equals 1 when |K_ψ| = |K_coh| pointwise (e.g. a separable pair built from
/// the comparator's own shape). Both states must share the carrier.
pub fn qef_spectral(
    psi: &JointSpectralAmplitude,
    spec_coh: &SpectralAmplitude,
    mol: &Molecule,
) -> Result<Flagged<f64>> {
    let w0 = spec_coh.carrier();
    if (psi.carrier() - w0).abs() > 1e-9 * w0 {
        return Err(Error::Construction(format!(
            "spectral enhancement compares states sharing one carrier; \
             got {:.6e} vs {:.6e} rad/s",
            psi.carrier(),
            w0
        )));
    }
    // Normalize out photon statistics: with one coherent photon the coherent
    // probability is Σ⁽²⁾L0⁴·I_coh, and dividing the pair probability by 4ε²
    // leaves Σ⁽²⁾L0⁴·I_ψ; the coupling cancels in the ratio.
    let unit = spec_coh.with_photons(1.0)?;
    let coh = tpa_coherent(&unit, mol)?;
    let epp = tpa_epp(psi, mol)?;
    if !(coh.value > 0.0) {
        return Err(Error::Degenerate(format!(
            "coherent comparator does not absorb at this line (weighted \
             sum-frequency intensity {:.3e})",
            coh.value
        )));
    }
    let value = epp.value / (4.0 * psi.epsilon_sq()) / coh.value;
    let mut out = Flagged::new(value, coh.warnings);
    out.absorb(epp.warnings);
    Ok(out)
}

/// Closed-form spectral enhancement for the Gaussian models —
/// (2σ_B/σ_N)·ξ(γ_fg/√2σ_N)/ξ(γ_fg/2σ) with ξ the scaled complementary
/// error function — plus the limiting-regime label at
/// [`REGIME_LABEL_SEPARATION`]× separation.
pub fn qef_spectral_gaussian_limits(
    sigma: f64,
    sigma_n: f64,
    sigma_b: f64,
    gamma_fg: f64,
) -> Result<(f64, SpectralRegime)> {
    for (name, v) in [
        ("coherent intensity width", sigma),
        ("pump envelope width", sigma_n),
        ("pair marginal width", sigma_b),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Construction(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if !(gamma_fg >= 0.0) || !gamma_fg.is_finite() {
        return Err(Error::Construction(format!(
            "two-photon linewidth must be non-negative and finite, got {gamma_fg}"
        )));
    }
    if sigma_n >= sigma_b {
        return Err(Error::Construction(format!(
            "pair model needs σ_N < σ_B (time–frequency correlation), \
             got σ_N = {sigma_n:.3e}, σ_B = {sigma_b:.3e}"
        )));
    }
    let value = 2.0 * sigma_b / sigma_n * erfcx(gamma_fg / (SQRT_2 * sigma_n))
        / erfcx(gamma_fg / (2.0 * sigma));
    let s = REGIME_LABEL_SEPARATION;
    let above_pump = gamma_fg >= s * sigma_n;
    let below_pump = gamma_fg <= sigma_n / s;
    let above_pulse = gamma_fg >= s * sigma;
    let below_pulse = gamma_fg <= sigma / s;
    let regime = match (above_pump, below_pump, above_pulse, below_pulse) {
        (true, _, true, _) => SpectralRegime::BroadLine,
        (_, true, _, true) => SpectralRegime::NarrowLine,
        (true, _, _, true) => SpectralRegime::BetweenPumpAndPulse,
        (_, true, true, _) => SpectralRegime::BetweenPulseAndPump,
        _ => SpectralRegime::General,
    };
    Ok((value, regime))
}

/// The closed form each limiting regime collapses to; `None` for
/// [`SpectralRegime::General`].
pub fn qef_spectral_regime_limit(
    regime: SpectralRegime,
    sigma: f64,
    sigma_n: f64,
    sigma_b: f64,
    gamma_fg: f64,
) -> Option<f64> {
    match regime {
        SpectralRegime::BroadLine => Some(SQRT_2 * sigma_b / sigma),
        SpectralRegime::NarrowLine => Some(2.0 * sigma_b / sigma_n),
        SpectralRegime::BetweenPumpAndPulse => {
            Some(2.0 * SQRT_2 * sigma_b / (PI.sqrt() * gamma_fg))
        }
        SpectralRegime::BetweenPulseAndPump => {
            Some(PI.sqrt() * sigma_b * gamma_fg / (sigma * sigma_n))
        }
        SpectralRegime::General => None,
    }
}

/// Full enhancement breakdown for a pair state against a coherent
/// comparator: number part from their photon statistics, spectral part from
/// the line-weighted intensity ratio, regime label from the Gaussian closed
/// form when both states are analytic Gaussians (otherwise
/// [`SpectralRegime::General`]).
pub fn qef_breakdown(
    psi: &JointSpectralAmplitude,
    spec_coh: &SpectralAmplitude,
    mol: &Molecule,
) -> Result<Flagged<QefBreakdown>> {
    let number = qef_number(psi.epsilon_sq(), spec_coh.photons())?;
    let spectral = qef_spectral(psi, spec_coh, mol)?;
    let regime = match (spec_coh.sigma(), psi.gaussian_pump_widths()) {
        (Some(sigma), Some((sigma_n, sigma_b))) => {
            qef_spectral_gaussian_limits(sigma, sigma_n, sigma_b, mol.gamma_fg())?.1
        }
        _ => SpectralRegime::General,
    };
    Ok(spectral.map(|s| QefBreakdown::from_parts(number, s, regime)))
}

/// Correlation bandwidth of the flux-form expressions: B = √2·σ_B, the
/// inverse of the pair correlation time.
pub fn correlation_bandwidth(sigma_b: f64) -> f64 {
    SQRT_2 * sigma_b
}

/// Pump-duration factor of the flux-form expressions: χ = √2/(T·σ_N), of
/// order unity when the interaction window matches the pump coherence time.
pub fn pump_duration_factor(sigma_n: f64, window: TimeInterval) -> f64 {
    SQRT_2 / (window.si() * sigma_n)
}

fn check_flux_form_inputs(f_epp: PhotonFlux, f_coh: PhotonFlux, b: f64, chi: f64) -> Result<()> {
    if !(f_epp.si() >= 0.0) || !f_epp.si().is_finite() {
        return Err(Error::Construction(format!(
            "pair photon flux must be non-negative and finite, got {}",
            f_epp.si()
        )));
    }
    if !(f_coh.si() > 0.0) || !f_coh.si().is_finite() {
        return Err(Error::Construction(format!(
            "coherent photon flux must be positive and finite, got {}",
            f_coh.si()
        )));
    }
    if !(b > 0.0) || !b.is_finite() || !(chi > 0.0) || !chi.is_finite() {
        return Err(Error::Construction(format!(
            "flux-form bandwidth and pump factor must be positive and finite, \
             got B = {b}, chi = {chi}"
        )));
    }
    Ok(())
}

/// Flux-form enhancement with explicit bandwidth and pump factor:
/// QEF ≈ F_EPP·B·χ/F_coh². Linear in the pair flux and inversely quadratic
/// in the coherent flux; warns when χ strays far above order unity.
pub fn qef_flux_form_raw(
    f_epp: PhotonFlux,
    f_coh: PhotonFlux,
    bandwidth_b: f64,
    chi: f64,
) -> Result<Flagged<f64>> {
    check_flux_form_inputs(f_epp, f_coh, bandwidth_b, chi)?;
    let value = f_epp.si() * bandwidth_b * chi / (f_coh.si() * f_coh.si());
    let mut out = Flagged::clean(value);
    if chi > LARGE_CHI_GUARD {
        out.push(ValidityWarning::LargeChi { chi });
    }
    Ok(out)
}

/// Flux-form enhancement from Gaussian source parameters: B and χ are
/// computed from σ_B, σ_N and the interaction window, never assumed unity.
/// The pair flux should be the mean photon flux 2ε²/T of the source.
pub fn qef_flux_form(
    f_epp: PhotonFlux,
    f_coh: PhotonFlux,
    sigma_b: f64,
    sigma_n: f64,
    window: TimeInterval,
) -> Result<Flagged<f64>> {
    if !(window.si() > 0.0) || !window.si().is_finite() {
        return Err(Error::Construction(format!(
            "interaction window must be positive and finite, got {}",
            window.si()
        )));
    }
    if !(sigma_b > 0.0) || !(sigma_n > 0.0) {
        return Err(Error::Construction(format!(
            "spectral widths must be positive, got σ_B = {sigma_b}, σ_N = {sigma_n}"
        )));
    }
    qef_flux_form_raw(
        f_epp,
        f_coh,
        correlation_bandwidth(sigma_b),
        pump_duration_factor(sigma_n, window),
    )
}

/// Equal-flux enhancement — both sources delivering F_EQ photons/s:
/// QEF = B·χ/F_EQ, the single number quoted for a source comparison.
pub fn qef_equal_flux(bandwidth_b: f64, chi: f64, f_eq: PhotonFlux) -> Result<Flagged<f64>> {
    qef_flux_form_raw(f_eq, f_eq, bandwidth_b, chi)
}

/// The coherent photon flux at which coherent and entangled-pair absorption
/// rates coincide (the enhancement crosses 1 at equal flux): F_cross = B·χ.
pub fn crossover_flux(bandwidth_b: f64, chi: f64) -> Result<PhotonFlux> {
    if !(bandwidth_b > 0.0) || !bandwidth_b.is_finite() || !(chi > 0.0) || !chi.is_finite() {
        return Err(Error::Construction(format!(
            "crossover flux needs positive finite inputs, got B = {bandwidth_b}, chi = {chi}"
        )));
    }
    Ok(PhotonFlux::from_si(bandwidth_b * chi))
}
