//! Cross-section bookkeeping, photon-budget conversions, and absolute event
//! rates.
//!
//! The absorption engines work with the dimensionless two-photon coupling
//! Σ⁽²⁾L0⁴; laboratories quote a cross-section σ⁽²⁾ in cm⁴·s. The two are
//! related through the beam area and the two-photon linewidth,
//!
//! ```text
//! σ⁽²⁾ = 2·Σ⁽²⁾L0⁴·A0²/γ_fg,
//! ```
//!
//! and this module is the single home of that conversion. On top of it sit
//! the flux forms: photon flux from optical power, per-molecule excitation
//! rates for coherent light and entangled pairs, the effective linear-regime
//! pair cross-section, and whole-scenario evaluation (sample, detector,
//! counting window).
//!
//! Flux convention: `F_EPP` always means the **mean photon flux** of the
//! pair source, 2ε²/T — twice the pair flux. The conventional bracketed
//! entangled cross-section form ([`rate_epp_gaussian`]) historically mixes
//! the two conventions; see its documentation for the explicit factor-2
//! bridge to the probability engine, which the tests pin.

use serde::Serialize;
use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use crate::absorption::Molecule;
use crate::constants::{PLANCK, SPEED_OF_LIGHT, SQRT_PI};
use crate::enhancement::{
    correlation_bandwidth, pump_duration_factor, qef_equal_flux, LARGE_CHI_GUARD,
};
use crate::lightstates::{dispersion_attenuation, JointSpectralAmplitude, SpectralAmplitude};
use crate::numerics::erfcx;
use crate::units::{
    Area, NumberDensity, PairCrossSection, PathLength, PhotonFlux, Power, TimeInterval,
    TpaCrossSection, Wavelength,
};
use crate::validity::{Flagged, ValidityWarning};
use crate::{Error, Result};

/// Relative disagreement tolerated between a pair source's stated optical
/// power and the photon flux implied by its pair probability and window
/// before scenario validation rejects the combination.
pub const POWER_FLUX_CONSISTENCY: f64 = 0.01;

/// Conventional two-photon cross-section σ⁽²⁾ (m⁴·s) from the dimensionless
/// per-pulse coupling Σ⁽²⁾L0⁴, given the beam area A0 and the two-photon
/// linewidth γ_fg (rad/s): σ⁽²⁾ = 2·Σ⁽²⁾L0⁴·A0²/γ_fg.
pub fn cross_section_from_coupling(
    sigma2_l04: f64,
    gamma_fg: f64,
    area: Area,
) -> TpaCrossSection {
    let a0 = area.si();
    TpaCrossSection::from_si(2.0 * sigma2_l04 * a0 * a0 / gamma_fg)
}

/// Dimensionless coupling Σ⁽²⁾L0⁴ from a conventional cross-section, the
/// exact inverse of [`cross_section_from_coupling`].
pub fn coupling_from_cross_section(
    sigma2: TpaCrossSection,
    gamma_fg: f64,
    area: Area,
) -> f64 {
    let a0 = area.si();
    sigma2.si() * gamma_fg / (2.0 * a0 * a0)
}

/// Photon flux of a beam of optical power P at vacuum wavelength λ:
/// F = P·λ/(hc) photons per second.
pub fn flux_from_power(power: Power, wavelength: Wavelength) -> Result<PhotonFlux> {
    if !(power.si() >= 0.0) || !power.si().is_finite() {
        return Err(Error::Construction(format!(
            "optical power must be non-negative and finite, got {} W",
            power.si()
        )));
    }
    if !(wavelength.si() > 0.0) || !wavelength.si().is_finite() {
        return Err(Error::Construction(format!(
            "wavelength must be positive and finite, got {} m",
            wavelength.si()
        )));
    }
    Ok(PhotonFlux::from_si(
        power.si() * wavelength.si() / (PLANCK * SPEED_OF_LIGHT),
    ))
}

/// Mean photon flux of a pair source: 2ε²/T, twice the pair flux — every
/// generated pair carries two photons through the interaction window.
pub fn pair_photon_flux(epsilon_sq: f64, window: TimeInterval) -> Result<PhotonFlux> {
    if !(epsilon_sq > 0.0) || !epsilon_sq.is_finite() {
        return Err(Error::Construction(format!(
            "pair-generation probability must be positive and finite, got {epsilon_sq}"
        )));
    }
    if !(window.si() > 0.0) || !window.si().is_finite() {
        return Err(Error::Construction(format!(
            "interaction window must be positive and finite, got {} s",
            window.si()
        )));
    }
    Ok(PhotonFlux::from_si(2.0 * epsilon_sq / window.si()))
}

/// Per-molecule two-photon excitation rate under narrow-band coherent
/// illumination: σ⁽²⁾·(F/A0)², quadratic in the flux.
pub fn rate_coherent(sigma2: TpaCrossSection, f_coh: PhotonFlux, area: Area) -> Result<f64> {
    for (name, v) in [
        ("cross-section", sigma2.si()),
        ("beam area", area.si()),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Construction(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if !(f_coh.si() >= 0.0) || !f_coh.si().is_finite() {
        return Err(Error::Construction(format!(
            "photon flux must be non-negative and finite, got {}",
            f_coh.si()
        )));
    }
    let density = f_coh.si() / area.si();
    Ok(sigma2.si() * density * density)
}

/// Per-molecule entangled-pair rate together with the effective linear
/// cross-section behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EppRate {
    /// Excitation events per second per molecule.
    pub rate: f64,
    /// Effective linear-regime pair cross-section σ_e⁽²⁾ = σ⁽²⁾·B·χ/A0, m².
    pub sigma_e: PairCrossSection,
}

/// Per-molecule two-photon excitation rate under an isolated-pair source of
/// mean photon flux F_EPP, correlation bandwidth B and pump-duration factor
/// χ: the pair behaves like a one-photon absorber of cross-section
/// σ_e⁽²⁾ = σ⁽²⁾·B·χ/A0, so the rate σ_e⁽²⁾·F_EPP/A0 is linear in flux.
///
/// Warns when the flux approaches the correlation bandwidth — pairs then
/// overlap in time and the isolated-pair law saturates.
pub fn rate_epp(
    sigma2: TpaCrossSection,
    bandwidth_b: f64,
    chi: f64,
    f_epp: PhotonFlux,
    area: Area,
) -> Result<Flagged<EppRate>> {
    for (name, v) in [
        ("cross-section", sigma2.si()),
        ("correlation bandwidth", bandwidth_b),
        ("pump-duration factor", chi),
        ("beam area", area.si()),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Construction(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if !(f_epp.si() >= 0.0) || !f_epp.si().is_finite() {
        return Err(Error::Construction(format!(
            "pair photon flux must be non-negative and finite, got {}",
            f_epp.si()
        )));
    }
    let sigma_e = PairCrossSection::from_si(sigma2.si() * bandwidth_b * chi / area.si());
    let rate = sigma_e.si() * f_epp.si() / area.si();
    let mut out = Flagged::clean(EppRate { rate, sigma_e });
    let overlap = f_epp.si() / bandwidth_b;
    if overlap > 1.0 {
        out.push(ValidityWarning::PairOverlap { ratio: overlap });
    }
    Ok(out)
}

/// Per-molecule entangled-pair rate in the conventional bracketed form for
/// Gaussian models:
///
/// ```text
/// rate = [σ⁽²⁾·2σ_B·σ·ξ(γ_fg/√2σ_N) / (A0·√π·σ_N·ξ(γ_fg/2σ))] · F_EPP/A0,
/// ```
///
/// where σ is the intensity width of the narrow-band coherent reference that
/// defined σ⁽²⁾ and ξ is the scaled complementary error function.
///
/// Convention bridge (pinned by tests): with γ_fg far above both widths this
/// collapses to [`rate_epp`] with B = √2σ_B and χ = 1/√π, while the
/// time-integrated probability engine (`tpa_epp` over a window T carrying
/// the same mean photon flux) corresponds to χ = 2/√π — exactly twice. The
/// factor 2 is the pairs-versus-photons flux ambiguity of the conventional
/// form; this crate resolves it by always meaning *photon* flux and keeping
/// the bracketed form verbatim for comparison with quoted cross-sections.
pub fn rate_epp_gaussian(
    sigma2: TpaCrossSection,
    sigma_b: f64,
    sigma_n: f64,
    sigma: f64,
    gamma_fg: f64,
    f_epp: PhotonFlux,
    area: Area,
) -> Result<Flagged<f64>> {
    for (name, v) in [
        ("cross-section", sigma2.si()),
        ("pair marginal width", sigma_b),
        ("pump envelope width", sigma_n),
        ("coherent reference width", sigma),
        ("two-photon linewidth", gamma_fg),
        ("beam area", area.si()),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Construction(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if sigma_n >= sigma_b {
        return Err(Error::Construction(format!(
            "pair model needs σ_N < σ_B, got σ_N = {sigma_n:.3e}, σ_B = {sigma_b:.3e}"
        )));
    }
    let a0 = area.si();
    let sigma_e = sigma2.si() * 2.0 * sigma_b * sigma * erfcx(gamma_fg / (SQRT_2 * sigma_n))
        / (a0 * SQRT_PI * sigma_n * erfcx(gamma_fg / (2.0 * sigma)));
    let rate = sigma_e * f_epp.si() / a0;
    let mut out = Flagged::clean(rate);
    let overlap = f_epp.si() / correlation_bandwidth(sigma_b);
    if overlap > 1.0 {
        out.push(ValidityWarning::PairOverlap { ratio: overlap });
    }
    Ok(out)
}

/// The light source driving a scenario.
#[derive(Debug, Clone)]
pub enum LightSource {
    /// Classical coherent beam; the spectrum's photon number is read as the
    /// photons delivered per interaction window when no power is given.
    Coherent(SpectralAmplitude),
    /// Time–frequency-entangled pair source; the mean photon flux is always
    /// 2ε²/T.
    Pairs(JointSpectralAmplitude),
}

/// Illuminated sample: molecular concentration and optical path length.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub concentration: NumberDensity,
    pub path_length: PathLength,
}

/// A complete laboratory scenario: source, molecule (with its beam
/// geometry), counting window, sample, and detector.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub light: LightSource,
    pub mol: Molecule,
    /// Interaction / counting window T.
    pub window: TimeInterval,
    pub sample: Sample,
    /// Detection efficiency η ∈ [0, 1]; fluorescence quantum yield is taken
    /// as 1, so detected counts = events × η.
    pub detector_efficiency: f64,
    /// Optional source power; for coherent light it sets the flux, for pair
    /// sources it must agree with 2ε²/T to [`POWER_FLUX_CONSISTENCY`].
    pub power: Option<Power>,
}

/// Everything [`evaluate_scenario`] computes, JSON-serializable and
/// printable as aligned text.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    /// Output schema tag for downstream scripts.
    pub schema: &'static str,
    /// "coherent" or "entangled-pairs".
    pub light: &'static str,
    /// Mean photon flux at the sample, photons/s.
    pub photon_flux: f64,
    /// Excitation events per second for one molecule.
    pub per_molecule_rate: f64,
    /// Illuminated molecules: concentration × A0 × path length.
    pub molecules: f64,
    /// Excitation events per second across the sample.
    pub sample_rate: f64,
    /// Detected fluorescence counts per second (η × sample rate).
    pub detected_counts: f64,
    /// Per-molecule excitation probability over one window, rate × T.
    pub window_probability: f64,
    /// Pair sources only: effective linear cross-section σ_e⁽²⁾, m².
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_cross_section: Option<f64>,
    /// Pair sources only: correlation bandwidth B = √2σ_B, s⁻¹.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation_bandwidth: Option<f64>,
    /// Pair sources only: pump-duration factor χ = √2/(Tσ_N).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pump_duration_factor: Option<f64>,
    /// Pair sources only: enhancement over coherent light of equal flux.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qef_equal_flux: Option<f64>,
    /// Pair sources only: broad-line rate attenuation from accumulated
    /// group-delay dispersion, (1 + 16D²σ_B⁴)^{−1/2}; 1 when undispersed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dispersion_attenuation: Option<f64>,
    /// Regime warnings, rendered.
    pub warnings: Vec<String>,
}

impl RateReport {
    /// Numeric fields in a stable order (pair-only columns appear only for
    /// pair sources), for CSV emission and sweeps.
    pub fn scalars(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("photon_flux", self.photon_flux),
            ("per_molecule_rate", self.per_molecule_rate),
            ("molecules", self.molecules),
            ("sample_rate", self.sample_rate),
            ("detected_counts", self.detected_counts),
            ("window_probability", self.window_probability),
        ];
        if let Some(v) = self.pair_cross_section {
            out.push(("pair_cross_section", v));
        }
        if let Some(v) = self.correlation_bandwidth {
            out.push(("correlation_bandwidth", v));
        }
        if let Some(v) = self.pump_duration_factor {
            out.push(("pump_duration_factor", v));
        }
        if let Some(v) = self.qef_equal_flux {
            out.push(("qef_equal_flux", v));
        }
        if let Some(v) = self.dispersion_attenuation {
            out.push(("dispersion_attenuation", v));
        }
        out
    }

    /// Aligned human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<22} {}", "schema", self.schema);
        let _ = writeln!(s, "{:<22} {}", "light", self.light);
        let _ = writeln!(
            s,
            "{:<22} {:.4e} photons/s",
            "photon flux", self.photon_flux
        );
        let _ = writeln!(
            s,
            "{:<22} {:.4e} events/s",
            "per-molecule rate", self.per_molecule_rate
        );
        let _ = writeln!(s, "{:<22} {:.4e}", "molecules", self.molecules);
        let _ = writeln!(s, "{:<22} {:.4e} events/s", "sample rate", self.sample_rate);
        let _ = writeln!(
            s,
            "{:<22} {:.4e} counts/s",
            "detected counts", self.detected_counts
        );
        let _ = writeln!(
            s,
            "{:<22} {:.4e}",
            "window probability", self.window_probability
        );
        if let Some(v) = self.pair_cross_section {
            let _ = writeln!(
                s,
                "{:<22} {:.4e} m² ({:.4e} cm²)",
                "pair cross-section",
                v,
                PairCrossSection::from_si(v).square_centimeters()
            );
        }
        if let Some(v) = self.correlation_bandwidth {
            let _ = writeln!(s, "{:<22} {:.4e} 1/s", "correlation bandwidth", v);
        }
        if let Some(v) = self.pump_duration_factor {
            let _ = writeln!(s, "{:<22} {:.4}", "pump factor chi", v);
        }
        if let Some(v) = self.qef_equal_flux {
            let _ = writeln!(s, "{:<22} {:.4e}", "equal-flux enhancement", v);
        }
        if let Some(v) = self.dispersion_attenuation {
            let _ = writeln!(s, "{:<22} {:.6}", "dispersion attenuation", v);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "{:<22} {}", "warning", w);
        }
        s
    }
}

/// Evaluates a complete scenario into per-molecule, sample, and detector
/// quantities. All validation failures are collected into one
/// [`Error::Validation`] before anything is computed.
pub fn evaluate_scenario(s: &Scenario) -> Result<RateReport> {
    let mut problems = Vec::new();

    let t = s.window.si();
    if !(t > 0.0) || !t.is_finite() {
        problems.push(format!(
            "window: interaction window must be positive and finite, got {t} s"
        ));
    }
    let eta = s.detector_efficiency;
    if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
        problems.push(format!(
            "detection.eta: efficiency must lie in [0, 1], got {eta}"
        ));
    }
    let area = s.mol.geometry().area();
    let conc = s.sample.concentration.si();
    let path = s.sample.path_length.si();
    if !(conc > 0.0) || !conc.is_finite() {
        problems.push(format!(
            "sample.concentration: must be positive and finite, got {conc} /m³"
        ));
    }
    if !(path > 0.0) || !path.is_finite() {
        problems.push(format!(
            "sample.path_length: must be positive and finite, got {path} m"
        ));
    }
    if let Some(p) = s.power {
        if !(p.si() >= 0.0) || !p.si().is_finite() {
            problems.push(format!(
                "power: must be non-negative and finite, got {} W",
                p.si()
            ));
        }
    }

    // Source-specific flux determination, still collecting problems.
    let carrier = match &s.light {
        LightSource::Coherent(spec) => spec.carrier(),
        LightSource::Pairs(psi) => psi.carrier(),
    };
    let wavelength = Wavelength::from_meters(std::f64::consts::TAU * SPEED_OF_LIGHT / carrier);
    let flux: Option<PhotonFlux> = match &s.light {
        LightSource::Coherent(spec) => match s.power {
            Some(p) => flux_from_power(p, wavelength).ok(),
            None => {
                if spec.photons() > 0.0 && t > 0.0 {
                    Some(PhotonFlux::from_si(spec.photons() / t))
                } else {
                    problems.push(
                        "light: coherent scenarios need either a source power or a \
                         positive photon number per window"
                            .into(),
                    );
                    None
                }
            }
        },
        LightSource::Pairs(psi) => {
            if t > 0.0 {
                let f = PhotonFlux::from_si(2.0 * psi.epsilon_sq() / t);
                if let Some(p) = s.power {
                    if let Ok(fp) = flux_from_power(p, wavelength) {
                        let dev = (fp.si() - f.si()).abs() / f.si().max(f64::MIN_POSITIVE);
                        if dev > POWER_FLUX_CONSISTENCY {
                            problems.push(format!(
                                "power: {} W implies {:.4e} photons/s but the pair \
                                 probability and window give 2ε²/T = {:.4e} photons/s \
                                 ({:.2}% apart)",
                                p.si(),
                                fp.si(),
                                f.si(),
                                100.0 * dev
                            ));
                        }
                    }
                }
                Some(f)
            } else {
                None
            }
        }
    };

    if let LightSource::Pairs(psi) = &s.light {
        if psi.gaussian_pump_widths().is_none() {
            problems.push(
                "light: pair-source scenarios need the pumped-Gaussian pair model \
                 (sampled joint amplitudes have no closed-form bandwidth B and pump \
                 factor χ; evaluate those through the probability engine instead)"
                    .into(),
            );
        }
    }

    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    let flux = flux.expect("flux is set whenever validation passed");
    let molecules = conc * area.si() * path;
    let sigma2 = s.mol.sigma2();

    let mut warnings: Vec<ValidityWarning> = Vec::new();
    let (light_kind, per_molecule_rate, pair_fields) = match &s.light {
        LightSource::Coherent(spec) => {
            // The CW rate law assumes the optical bandwidth sits inside the
            // two-photon line.
            let ratio = spec.width() / s.mol.gamma_fg();
            if ratio > 0.1 {
                warnings.push(ValidityWarning::BandwidthVsLinewidth { ratio });
            }
            let rate = rate_coherent(sigma2, flux, area)?;
            ("coherent", rate, None)
        }
        LightSource::Pairs(psi) => {
            let (sigma_n, sigma_b) = psi
                .gaussian_pump_widths()
                .expect("validated above");
            let b = correlation_bandwidth(sigma_b);
            let chi = pump_duration_factor(sigma_n, s.window);
            if chi > LARGE_CHI_GUARD {
                warnings.push(ValidityWarning::LargeChi { chi });
            }
            let rated = rate_epp(sigma2, b, chi, flux, area)?;
            warnings.extend(rated.warnings.iter().cloned());
            let qef = qef_equal_flux(b, chi, flux)?;
            let att = dispersion_attenuation(sigma_b, psi.gdd().unwrap_or(0.0));
            (
                "entangled-pairs",
                rated.value.rate * att,
                Some((rated.value.sigma_e.si(), b, chi, qef.value * att, att)),
            )
        }
    };

    let sample_rate = per_molecule_rate * molecules;
    let (pair_cross_section, bandwidth, chi, qef, attenuation) = match pair_fields {
        Some((se, b, c, q, a)) => (Some(se), Some(b), Some(c), Some(q), Some(a)),
        None => (None, None, None, None, None),
    };
    Ok(RateReport {
        schema: "etpa-report/1",
        light: light_kind,
        photon_flux: flux.si(),
        per_molecule_rate,
        molecules,
        sample_rate,
        detected_counts: sample_rate * eta,
        window_probability: per_molecule_rate * t,
        pair_cross_section,
        correlation_bandwidth: bandwidth,
        pump_duration_factor: chi,
        qef_equal_flux: qef,
        dispersion_attenuation: attenuation,
        warnings: warnings.iter().map(|w| w.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorption::{tpa_epp, BeamGeometry, Coupling};
    use crate::enhancement::qef_flux_form_raw;

    const OMEGA0: f64 = 1.770_346_6e15; // 2πc/1064 nm

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    /// The reference molecule of the worked examples: 9 GM cross-section,
    /// 10-THz-full-width two-photon line, 10⁻⁶ cm² beam.
    fn reference_molecule() -> Molecule {
        let geometry =
            BeamGeometry::new(OMEGA0, Area::from_square_centimeters(1e-6), 1.0).unwrap();
        Molecule::new(
            2.0 * OMEGA0,
            std::f64::consts::PI * 1e13,
            Coupling::CrossSection(TpaCrossSection::from_gm(9.0)),
            geometry,
        )
        .unwrap()
    }

    #[test]
    fn photon_flux_from_power_hits_the_worked_numbers() {
        let f = flux_from_power(
            Power::from_milliwatts(100.0),
            Wavelength::from_nanometers(1064.0),
        )
        .unwrap();
        assert!(rel(f.si(), 5.36e17) < 5e-3);

        let weak = flux_from_power(
            Power::from_nanowatts(20.0),
            Wavelength::from_nanometers(1064.0),
        )
        .unwrap();
        assert!(rel(weak.si(), 1.07e11) < 5e-3);

        let zero = flux_from_power(Power::from_watts(0.0), Wavelength::from_nanometers(1064.0))
            .unwrap();
        assert_eq!(zero.si(), 0.0);
    }

    #[test]
    fn coupling_conversion_round_trips() {
        let area = Area::from_si(1e-10);
        let gamma = std::f64::consts::PI * 1e13;
        let coupling = 1.414_213_6e-24;

        let sigma2 = cross_section_from_coupling(coupling, gamma, area);
        // 2·Σ⁽²⁾L0⁴·A0²/γ: 2·1.4142136e-24·1e-20/(π·1e13) ≈ 9.0032e-58 m⁴s,
        // i.e. about 9 GM.
        assert!((sigma2.si() - 9.003_2e-58).abs() / 9.003_2e-58 < 1e-4);

        let back = coupling_from_cross_section(sigma2, gamma, area);
        assert!((back - coupling).abs() / coupling < 1e-12);
    }

    #[test]
    fn coupling_scales_inversely_with_squared_area() {
        let gamma = 1e13;
        let sigma2 = TpaCrossSection::from_gm(9.0);
        let c1 = coupling_from_cross_section(sigma2, gamma, Area::from_si(1e-10));
        let c2 = coupling_from_cross_section(sigma2, gamma, Area::from_si(2e-10));
        assert!(rel(c1, 4.0 * c2) < 1e-12);
    }

    #[test]
    fn coherent_rate_reproduces_the_bright_beam_example() {
        let f = flux_from_power(
            Power::from_milliwatts(100.0),
            Wavelength::from_nanometers(1064.0),
        )
        .unwrap();
        let rate = rate_coherent(
            TpaCrossSection::from_gm(9.0),
            f,
            Area::from_square_centimeters(1e-6),
        )
        .unwrap();
        assert!(rel(rate, 2.6e-2) < 0.01, "got {rate}");

        let dark = rate_coherent(
            TpaCrossSection::from_gm(9.0),
            PhotonFlux::from_si(0.0),
            Area::from_si(1e-10),
        )
        .unwrap();
        assert_eq!(dark, 0.0);
    }

    #[test]
    fn pair_rate_carries_the_effective_cross_section() {
        let out = rate_epp(
            TpaCrossSection::from_gm(9.0),
            1e13,
            1.0,
            PhotonFlux::from_si(1.07e11),
            Area::from_square_centimeters(1e-6),
        )
        .unwrap();
        // σ_e⁽²⁾ = σ⁽²⁾Bχ/A0 = 9×10⁻³¹ cm².
        assert!(rel(out.value.sigma_e.square_centimeters(), 9e-31) < 1e-12);
        assert!(out.is_clean());

        // Linear in flux: halving F halves the rate.
        let half = rate_epp(
            TpaCrossSection::from_gm(9.0),
            1e13,
            1.0,
            PhotonFlux::from_si(0.535e11),
            Area::from_square_centimeters(1e-6),
        )
        .unwrap();
        assert!(rel(out.value.rate, 2.0 * half.value.rate) < 1e-12);

        // Flux beyond the correlation bandwidth trips the overlap warning.
        let crowded = rate_epp(
            TpaCrossSection::from_gm(9.0),
            1e13,
            1.0,
            PhotonFlux::from_si(2e13),
            Area::from_square_centimeters(1e-6),
        )
        .unwrap();
        assert!(crowded
            .warnings
            .iter()
            .any(|w| matches!(w, ValidityWarning::PairOverlap { .. })));
    }

    #[test]
    fn pair_rate_equals_coherent_rate_times_equal_flux_enhancement() {
        let sigma2 = TpaCrossSection::from_gm(9.0);
        let area = Area::from_si(1e-10);
        let f = PhotonFlux::from_si(3e11);
        let (b, chi) = (1e13, 0.8);
        let epp = rate_epp(sigma2, b, chi, f, area).unwrap().value.rate;
        let coh = rate_coherent(sigma2, f, area).unwrap();
        let qef = qef_flux_form_raw(f, f, b, chi).unwrap().value;
        assert!(rel(epp, coh * qef) < 1e-12);
    }

    #[test]
    fn gaussian_pair_rate_limits_and_probability_bridge() {
        let sigma2 = TpaCrossSection::from_gm(9.0);
        let area = Area::from_si(1e-10);
        let f = PhotonFlux::from_si(1e11);
        let (sigma_n, sigma_b) = (1e12, 4e12);

        // γ_fg → 0: both ξ factors → 1, rate ∝ 2σ_Bσ/(√πσ_N).
        let sigma = 2e12;
        let cold = rate_epp_gaussian(sigma2, sigma_b, sigma_n, sigma, 1e2, f, area)
            .unwrap()
            .value;
        let expect = sigma2.si() * 2.0 * sigma_b * sigma / (area.si() * SQRT_PI * sigma_n)
            * f.si()
            / area.si();
        assert!(rel(cold, expect) < 1e-6);

        // γ_fg ≫ σ, σ_N at 100×: collapses to the flux form with B = √2σ_B
        // and χ = 1/√π.
        let gamma = 100.0 * sigma.max(sigma_n);
        let broad = rate_epp_gaussian(sigma2, sigma_b, sigma_n, sigma, gamma, f, area)
            .unwrap()
            .value;
        let flux_form = rate_epp(sigma2, SQRT_2 * sigma_b, 1.0 / SQRT_PI, f, area)
            .unwrap()
            .value
            .rate;
        assert!(
            rel(broad, flux_form) < 0.05,
            "bracketed {broad:e} vs flux form {flux_form:e}"
        );

        // Probability bridge: the time-integrated engine over a window T at
        // the same mean photon flux gives exactly twice the bracketed form
        // in the narrow-reference limit — the conventional form counts pair
        // flux where this crate counts photon flux.
        let t = 1e-13;
        let eps_sq = f.si() * t / 2.0;
        let psi =
            JointSpectralAmplitude::gaussian_pump(OMEGA0, sigma_n, sigma_b, eps_sq).unwrap();
        let geometry = BeamGeometry::new(OMEGA0, area, 1.0).unwrap();
        let gamma = 5e13;
        let mol = Molecule::new(
            2.0 * OMEGA0,
            gamma,
            Coupling::CrossSection(sigma2),
            geometry,
        )
        .unwrap();
        let p = tpa_epp(&psi, &mol).unwrap().value;
        let narrow_ref = gamma / 100.0;
        let bracketed = rate_epp_gaussian(sigma2, sigma_b, sigma_n, narrow_ref, gamma, f, area)
            .unwrap()
            .value;
        assert!(
            rel(p / t, 2.0 * bracketed) < 1e-3,
            "probability path {:e} vs twice the bracketed rate {:e}",
            p / t,
            2.0 * bracketed
        );
    }

    fn sample_2mm_1cm() -> Sample {
        Sample {
            concentration: NumberDensity::from_millimolar(2.0),
            path_length: PathLength::from_centimeters(1.0),
        }
    }

    fn narrowband_spectrum() -> SpectralAmplitude {
        SpectralAmplitude::gaussian(OMEGA0, 1e9, 1.0).unwrap()
    }

    #[test]
    fn bright_coherent_scenario_reproduces_the_sample_rate() {
        let report = evaluate_scenario(&Scenario {
            light: LightSource::Coherent(narrowband_spectrum()),
            mol: reference_molecule(),
            window: TimeInterval::from_si(1.0),
            sample: sample_2mm_1cm(),
            detector_efficiency: 0.01,
            power: Some(Power::from_milliwatts(100.0)),
        })
        .unwrap();
        assert!(rel(report.sample_rate, 3e10) < 0.25, "{}", report.sample_rate);
        assert!(
            rel(report.detected_counts, 3e8) < 0.25,
            "{}",
            report.detected_counts
        );
        assert!(rel(report.molecules, 1.2044e12) < 1e-3);
        assert_eq!(report.light, "coherent");
        assert!(report.pair_cross_section.is_none());
    }

    #[test]
    fn weak_coherent_scenario_is_unobservable() {
        let report = evaluate_scenario(&Scenario {
            light: LightSource::Coherent(narrowband_spectrum()),
            mol: reference_molecule(),
            window: TimeInterval::from_si(1.0),
            sample: sample_2mm_1cm(),
            detector_efficiency: 0.01,
            power: Some(Power::from_nanowatts(20.0)),
        })
        .unwrap();
        assert!(rel(report.sample_rate, 1e-3) < 0.3, "{}", report.sample_rate);
        assert!(
            rel(report.detected_counts, 1e-5) < 0.3,
            "{}",
            report.detected_counts
        );
    }

    #[test]
    fn pair_scenario_reproduces_the_quantum_enhanced_rate() {
        // B = 10¹³ s⁻¹ and χ = 1 correspond to σ_B = 10¹³/√2 and T = √2/σ_N.
        let sigma_n = 1e12;
        let sigma_b = 1e13 / SQRT_2;
        let t = SQRT_2 / sigma_n;
        let f = flux_from_power(
            Power::from_nanowatts(20.0),
            Wavelength::from_nanometers(1064.0),
        )
        .unwrap();
        let eps_sq = f.si() * t / 2.0;
        let psi =
            JointSpectralAmplitude::gaussian_pump(OMEGA0, sigma_n, sigma_b, eps_sq).unwrap();
        let report = evaluate_scenario(&Scenario {
            light: LightSource::Pairs(psi),
            mol: reference_molecule(),
            window: TimeInterval::from_si(t),
            sample: sample_2mm_1cm(),
            detector_efficiency: 0.01,
            power: Some(Power::from_nanowatts(20.0)),
        })
        .unwrap();
        assert!(rel(report.photon_flux, 1.07e11) < 5e-3);
        assert!(rel(report.sample_rate, 0.1) < 0.3, "{}", report.sample_rate);
        assert!(
            rel(report.detected_counts, 1e-3) < 0.3,
            "{}",
            report.detected_counts
        );
        let se = report.pair_cross_section.unwrap();
        assert!(rel(PairCrossSection::from_si(se).square_centimeters(), 9e-31) < 1e-3);
        // Rate identity against the coherent law at the same flux.
        let coh = rate_coherent(
            TpaCrossSection::from_gm(9.0),
            PhotonFlux::from_si(report.photon_flux),
            Area::from_square_centimeters(1e-6),
        )
        .unwrap();
        assert!(
            rel(report.per_molecule_rate, coh * report.qef_equal_flux.unwrap()) < 1e-6
        );
    }

    #[test]
    fn window_probability_follows_the_time_integrated_engine() {
        // With T = √(π/2)/σ_N the flux form has χ = 2/√π and its window
        // probability matches the probability engine; at 100× linewidth
        // separation the residual is the asymptotic ξ correction.
        let sigma_n = 1e12;
        let sigma_b = 4e12;
        let gamma = 100.0 * sigma_n;
        let t = (std::f64::consts::PI / 2.0_f64).sqrt() / sigma_n;
        let eps_sq = 0.01;
        let psi =
            JointSpectralAmplitude::gaussian_pump(OMEGA0, sigma_n, sigma_b, eps_sq).unwrap();
        let geometry = BeamGeometry::new(OMEGA0, Area::from_si(1e-10), 1.0).unwrap();
        let mol = Molecule::new(
            2.0 * OMEGA0,
            gamma,
            Coupling::SumOverStates(1e-24),
            geometry,
        )
        .unwrap();
        let report = evaluate_scenario(&Scenario {
            light: LightSource::Pairs(psi.clone()),
            mol: mol.clone(),
            window: TimeInterval::from_si(t),
            sample: sample_2mm_1cm(),
            detector_efficiency: 1.0,
            power: None,
        })
        .unwrap();
        let engine = tpa_epp(&psi, &mol).unwrap().value;
        assert!(
            rel(report.window_probability, engine) < 0.05,
            "flux form {:e} vs engine {:e}",
            report.window_probability,
            engine
        );
    }

    #[test]
    fn counts_scale_linearly_for_pairs_and_quadratically_for_coherent() {
        let scenario = |power: f64| Scenario {
            light: LightSource::Coherent(narrowband_spectrum()),
            mol: reference_molecule(),
            window: TimeInterval::from_si(1.0),
            sample: sample_2mm_1cm(),
            detector_efficiency: 0.01,
            power: Some(Power::from_milliwatts(power)),
        };
        let c1 = evaluate_scenario(&scenario(25.0)).unwrap().detected_counts;
        let c2 = evaluate_scenario(&scenario(50.0)).unwrap().detected_counts;
        let c4 = evaluate_scenario(&scenario(100.0)).unwrap().detected_counts;
        assert!(rel(c2, 4.0 * c1) < 1e-9);
        assert!(rel(c4, 4.0 * c2) < 1e-9);

        let pair_scenario = |eps_sq: f64| {
            let psi =
                JointSpectralAmplitude::gaussian_pump(OMEGA0, 1e12, 7e12, eps_sq).unwrap();
            Scenario {
                light: LightSource::Pairs(psi),
                mol: reference_molecule(),
                window: TimeInterval::from_si(1e-9),
                sample: sample_2mm_1cm(),
                detector_efficiency: 0.01,
                power: None,
            }
        };
        let p1 = evaluate_scenario(&pair_scenario(0.01)).unwrap().detected_counts;
        let p2 = evaluate_scenario(&pair_scenario(0.02)).unwrap().detected_counts;
        let p4 = evaluate_scenario(&pair_scenario(0.04)).unwrap().detected_counts;
        assert!(rel(p2, 2.0 * p1) < 1e-9);
        assert!(rel(p4, 2.0 * p2) < 1e-9);
    }

    #[test]
    fn dispersed_pair_scenario_attenuates_by_the_closed_form() {
        let sigma_b = 7e12;
        let scenario = |gdd: f64| {
            let psi = JointSpectralAmplitude::gaussian_pump(OMEGA0, 1e12, sigma_b, 0.01)
                .unwrap()
                .apply_dispersion(gdd);
            Scenario {
                light: LightSource::Pairs(psi),
                mol: reference_molecule(),
                window: TimeInterval::from_si(1e-9),
                sample: sample_2mm_1cm(),
                detector_efficiency: 0.01,
                power: None,
            }
        };
        let clean = evaluate_scenario(&scenario(0.0)).unwrap();
        assert_eq!(clean.dispersion_attenuation, Some(1.0));
        let d = 1e-26; // 10⁴ fs²
        let dispersed = evaluate_scenario(&scenario(d)).unwrap();
        let expect = 1.0 / (1.0 + 16.0 * d * d * sigma_b.powi(4)).sqrt();
        assert!(rel(dispersed.dispersion_attenuation.unwrap(), expect) < 1e-12);
        assert!(rel(
            dispersed.detected_counts,
            clean.detected_counts * expect
        ) < 1e-12);
        // Coherent light is immune to quadratic phase, so the equal-flux
        // enhancement carries the same attenuation.
        assert!(rel(
            dispersed.qef_equal_flux.unwrap(),
            clean.qef_equal_flux.unwrap() * expect
        ) < 1e-12);
    }

    #[test]
    fn validation_collects_every_problem_at_once() {
        let psi = JointSpectralAmplitude::gaussian_pump(OMEGA0, 1e12, 7e12, 0.01).unwrap();
        let err = evaluate_scenario(&Scenario {
            light: LightSource::Pairs(psi),
            mol: reference_molecule(),
            window: TimeInterval::from_si(1e-9),
            sample: Sample {
                concentration: NumberDensity::from_si(0.0),
                path_length: PathLength::from_centimeters(1.0),
            },
            detector_efficiency: 1.5,
            power: None,
        })
        .unwrap_err();
        match err {
            Error::Validation(problems) => {
                assert!(problems.iter().any(|p| p.contains("detection.eta")));
                assert!(problems.iter().any(|p| p.contains("sample.concentration")));
                assert_eq!(problems.len(), 2, "{problems:?}");
            }
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn pair_power_must_agree_with_the_pair_probability() {
        let sigma_n = 1e12;
        let t = SQRT_2 / sigma_n;
        let f = flux_from_power(
            Power::from_nanowatts(20.0),
            Wavelength::from_nanometers(1064.0),
        )
        .unwrap();
        let psi = JointSpectralAmplitude::gaussian_pump(
            OMEGA0,
            sigma_n,
            1e13 / SQRT_2,
            f.si() * t / 2.0,
        )
        .unwrap();
        let scenario = Scenario {
            light: LightSource::Pairs(psi),
            mol: reference_molecule(),
            window: TimeInterval::from_si(t),
            sample: sample_2mm_1cm(),
            detector_efficiency: 0.01,
            power: Some(Power::from_nanowatts(40.0)), // twice the implied flux
        };
        match evaluate_scenario(&scenario).unwrap_err() {
            Error::Validation(problems) => {
                assert!(problems.iter().any(|p| p.contains("power")), "{problems:?}");
            }
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn report_serializes_and_renders() {
        let report = evaluate_scenario(&Scenario {
            light: LightSource::Coherent(narrowband_spectrum()),
            mol: reference_molecule(),
            window: TimeInterval::from_si(1.0),
            sample: sample_2mm_1cm(),
            detector_efficiency: 0.01,
            power: Some(Power::from_milliwatts(100.0)),
        })
        .unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["schema"], "etpa-report/1");
        assert!(json.get("pair_cross_section").is_none());
        let text = report.to_text();
        assert!(text.contains("sample rate"));
        let names: Vec<&str> = report.scalars().iter().map(|(n, _)| *n).collect();
        assert_eq!(
            names,
            vec![
                "photon_flux",
                "per_molecule_rate",
                "molecules",
                "sample_rate",
                "detected_counts",
                "window_probability"
            ]
        );
    }

    #[test]
    fn unit_audit_every_boundary_quantity_converts_to_si() {
        // One pass over every unit-tagged constructor used by the rate layer.
        assert!(rel(Power::from_milliwatts(100.0).si(), 0.1) < 1e-15);
        assert!(rel(Wavelength::from_nanometers(1064.0).si(), 1.064e-6) < 1e-15);
        assert!(rel(Area::from_square_centimeters(1e-6).si(), 1e-10) < 1e-15);
        assert!(rel(PathLength::from_centimeters(1.0).si(), 1e-2) < 1e-15);
        assert!(rel(TpaCrossSection::from_gm(9.0).si(), 9e-58) < 1e-15);
        assert!(rel(TpaCrossSection::from_cm4_s(9e-50).si(), 9e-58) < 1e-15);
        assert!(
            rel(NumberDensity::from_millimolar(2.0).si(), 1.204_428_152e24) < 1e-9
        );
        assert!(rel(
            PairCrossSection::from_si(9e-35).square_centimeters(),
            9e-31
        ) < 1e-15);
        // And the flux chain is dimensionally closed: W·m/(J·s·m/s) = 1/s.
        let f = flux_from_power(
            Power::from_watts(1.0),
            Wavelength::from_meters(1e-6),
        )
        .unwrap();
        assert!(rel(f.si(), 1e-6 / (PLANCK * SPEED_OF_LIGHT)) < 1e-15);
    }
}
