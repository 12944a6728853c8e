//! Molecule and beam parameters, and the absorption probability engines.
//!
//! Everything here evaluates the probability that a molecule parked in a beam
//! is excited by one photon (to an intermediate level) or by two photons (to
//! the final level), for three kinds of driving light:
//!
//! * a coherent pulse of `N` photons on average ([`tpa_coherent`], plus the
//!   long-pulse and impulsive short-cuts),
//! * a single time–frequency-entangled photon pair produced with probability
//!   ε² ([`tpa_epp`] and its impulsive/dispersed variants),
//! * any normalized spectrum for one-photon absorption ([`opa_probability`]).
//!
//! The two-photon engines share one integral: the squared sum-frequency
//! amplitude |K(x)|² weighted by the final-state line. The line enters as the
//! complex kernel 1/(γ_fg − i(Δ − x)) with Δ = ω_fg − 2ω₀, and the physical
//! probability takes twice the real part at the end, so the dispersive
//! (imaginary) parts of off-resonant contributions cancel the way the
//! perturbation series says they should. Closed Gaussian forms and
//! grid-sampled states run through the same quadrature, which is how the
//! analytic results get cross-checked.
//!
//! Regime guards (quasi-monochromatic, impulsive, isolated pairs, small
//! excitation probability) are reported as [`ValidityWarning`]s on the
//! returned [`Flagged`] values, never as hard errors: the formulas stay
//! evaluable outside their regime and the caller sees both the number and the
//! caveat.

use num_complex::Complex64;

use crate::constants::{HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::lightstates::{ComplexEnvelope, JointSpectralAmplitude, SpectralAmplitude, TimeEnvelope};
use crate::numerics::{integrate_1d_segmented, INV_TWO_PI};
use crate::rates::{coupling_from_cross_section, cross_section_from_coupling};
use crate::units::{Area, GroupDelayDispersion, TpaCrossSection};
use crate::{Error, Flagged, Result, ValidityWarning};

/// Quadrature tolerance for analytic (closed-form) integrands.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// Quadrature tolerance when the integrand comes from grid interpolation:
/// chasing digits far below the interpolation error just wastes subdivisions
/// on the kinks between grid cells.
pub const GRID_QUAD_TOL: f64 = 1e-6;

/// Excitation probabilities above this are flagged: first-order perturbation
/// theory stops being a small correction.
const SMALL_PROBABILITY_GUARD: f64 = 0.1;

/// Regime-guard ratios (bandwidth/linewidth, duration·linewidth) above this
/// raise a warning.
const REGIME_RATIO_GUARD: f64 = 0.1;

// ---------------------------------------------------------------------------
// Beam geometry and molecule parameters
// ---------------------------------------------------------------------------

/// Where the molecule sits in the beam: carrier frequency, effective
/// transverse area at the focus, and the refractive index of the host medium.
///
/// These three numbers fix the single-photon field normalization
/// L0² = ħω₀/(2ε₀ncA0), the factor that converts squared dipole couplings
/// into the dimensionless per-pulse strengths the probability formulas use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    omega0: f64,
    area: Area,
    refractive_index: f64,
}

impl BeamGeometry {
    /// `omega0` in rad/s, `area` the effective beam area at the molecule,
    /// `refractive_index` ≥ 1.
    pub fn new(omega0: f64, area: Area, refractive_index: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::Construction(format!(
                "carrier frequency must be positive and finite (got {omega0:e} rad/s)"
            )));
        }
        if !(area.si() > 0.0) || !area.si().is_finite() {
            return Err(Error::Construction(format!(
                "beam area must be positive and finite (got {:e} m²)",
                area.si()
            )));
        }
        if !(refractive_index >= 1.0) || !refractive_index.is_finite() {
            return Err(Error::Construction(format!(
                "refractive index must be ≥ 1 (got {refractive_index})"
            )));
        }
        Ok(BeamGeometry {
            omega0,
            area,
            refractive_index,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn area(&self) -> Area {
        self.area
    }

    pub fn refractive_index(&self) -> f64 {
        self.refractive_index
    }

    /// Squared single-photon field scale L0² = ħω₀/(2ε₀ncA0).
    ///
    /// A squared dipole matrix element divided by ħ² and multiplied by this
    /// has units of s⁻¹; multiplied by its square, the fourth-order dipole
    /// products in the two-photon sum become dimensionless.
    pub fn l0_squared(&self) -> f64 {
        HBAR * self.omega0
            / (2.0 * VACUUM_PERMITTIVITY * self.refractive_index * SPEED_OF_LIGHT * self.area.si())
    }
}

/// An intermediate one-photon level: transition frequency ω_mg and half-width
/// γ_mg (both rad/s), and the squared dipole coupling already scaled by the
/// beam, μ²L0² (s⁻¹).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePhotonLevel {
    pub omega_mg: f64,
    pub gamma_mg: f64,
    pub mu_sq_l02: f64,
}

/// The two-photon coupling strength, in either bookkeeping convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Dimensionless per-configuration strength Σ⁽²⁾L0⁴ (sum over
    /// intermediate states times the fourth power of the field scale).
    SumOverStates(f64),
    /// Conventional flux-form cross-section σ⁽²⁾ (m⁴·s).
    CrossSection(TpaCrossSection),
}

/// Two-photon absorber: final-state transition frequency ω_fg and half-width
/// γ_fg, the coupling strength in both conventions, the beam geometry the
/// conversion was done against, and optionally a one-photon level.
///
/// The coupling is converted eagerly at construction, so both Σ⁽²⁾L0⁴ and
/// σ⁽²⁾ are always available and always consistent with the stored geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Molecule {
    omega_fg: f64,
    gamma_fg: f64,
    sigma2_l04: f64,
    sigma2: TpaCrossSection,
    geometry: BeamGeometry,
    one_photon: Option<OnePhotonLevel>,
}

impl Molecule {
    pub fn new(
        omega_fg: f64,
        gamma_fg: f64,
        coupling: Coupling,
        geometry: BeamGeometry,
    ) -> Result<Self> {
        if !(omega_fg > 0.0) || !omega_fg.is_finite() {
            return Err(Error::Construction(format!(
                "two-photon transition frequency must be positive (got {omega_fg:e} rad/s)"
            )));
        }
        if !(gamma_fg > 0.0) || !gamma_fg.is_finite() {
            return Err(Error::Construction(format!(
                "two-photon linewidth must be positive (got {gamma_fg:e} rad/s)"
            )));
        }
        let (sigma2_l04, sigma2) = match coupling {
            Coupling::SumOverStates(s) => (
                s,
                cross_section_from_coupling(s, gamma_fg, geometry.area()),
            ),
            Coupling::CrossSection(cs) => (
                coupling_from_cross_section(cs, gamma_fg, geometry.area()),
                cs,
            ),
        };
        if !(sigma2_l04 > 0.0) || !sigma2_l04.is_finite() {
            return Err(Error::Construction(format!(
                "two-photon coupling must be positive (Σ⁽²⁾L0⁴ came out {sigma2_l04:e})"
            )));
        }
        Ok(Molecule {
            omega_fg,
            gamma_fg,
            sigma2_l04,
            sigma2,
            geometry,
            one_photon: None,
        })
    }

    /// Attaches an intermediate one-photon level (enables
    /// [`opa_probability`]).
    pub fn with_one_photon_level(mut self, level: OnePhotonLevel) -> Result<Self> {
        if !(level.omega_mg > 0.0) || !(level.gamma_mg > 0.0) || !(level.mu_sq_l02 > 0.0) {
            return Err(Error::Construction(format!(
                "one-photon level needs positive frequency, linewidth and coupling \
                 (got ω_mg {:e}, γ_mg {:e}, μ²L0² {:e})",
                level.omega_mg, level.gamma_mg, level.mu_sq_l02
            )));
        }
        self.one_photon = Some(level);
        Ok(self)
    }

    pub fn omega_fg(&self) -> f64 {
        self.omega_fg
    }

    pub fn gamma_fg(&self) -> f64 {
        self.gamma_fg
    }

    /// Dimensionless two-photon coupling Σ⁽²⁾L0⁴.
    pub fn sigma2_l04(&self) -> f64 {
        self.sigma2_l04
    }

    /// Conventional two-photon cross-section σ⁽²⁾.
    pub fn sigma2(&self) -> TpaCrossSection {
        self.sigma2
    }

    pub fn geometry(&self) -> BeamGeometry {
        self.geometry
    }

    pub fn one_photon(&self) -> Option<&OnePhotonLevel> {
        self.one_photon.as_ref()
    }

    /// Two-photon detuning Δ = ω_fg − 2ω₀ for a given carrier.
    pub fn detuning(&self, omega0: f64) -> f64 {
        self.omega_fg - 2.0 * omega0
    }
}

// ---------------------------------------------------------------------------
// Coupling from a sum over intermediate levels
// ---------------------------------------------------------------------------

/// One intermediate level's contribution to the two-photon coupling: dipole
/// matrix elements d_fm (final ← intermediate) and d_mg (intermediate ←
/// ground) in C·m, and the corresponding transition frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleLevel {
    pub d_fm: f64,
    pub d_mg: f64,
    pub omega_fm: f64,
    pub omega_mg: f64,
}

/// The two-photon coupling produced by [`sigma2_from_dipoles`], in both
/// conventions (they are related by the beam area and linewidth, see
/// [`cross_section_from_coupling`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleCoupling {
    pub sigma2_l04: f64,
    pub sigma2: TpaCrossSection,
}

impl From<DipoleCoupling> for Coupling {
    fn from(c: DipoleCoupling) -> Coupling {
        Coupling::SumOverStates(c.sigma2_l04)
    }
}

/// Two-photon coupling from an explicit sum over non-resonant intermediate
/// levels:
///
/// ```text
/// Σ⁽²⁾ = Σ_{m,m'} μ_fm·μ_mg·μ_m'f·μ_gm' / ((ω₀−ω_fm)·(ω_m'g−ω₀)),
/// ```
///
/// with μ_ij = d_ij/ħ, made dimensionless by L0⁴ from the geometry and
/// converted to a cross-section against `gamma_fg`.
///
/// Every level must be far from one-photon resonance (detuning more than
/// 10·γ_fg on both the ω_mg and ω_fm sides); otherwise the far-off-resonance
/// reduction behind this formula does not apply and the offending level is
/// reported in the error.
pub fn sigma2_from_dipoles(
    levels: &[DipoleLevel],
    omega0: f64,
    gamma_fg: f64,
    geometry: &BeamGeometry,
) -> Result<DipoleCoupling> {
    if levels.is_empty() {
        return Err(Error::Construction(
            "sum-over-states coupling needs at least one intermediate level".into(),
        ));
    }
    for (index, level) in levels.iter().enumerate() {
        let finite = level.d_fm.is_finite()
            && level.d_mg.is_finite()
            && level.omega_fm.is_finite()
            && level.omega_mg.is_finite();
        if !finite {
            return Err(Error::Construction(format!(
                "intermediate level {index} has non-finite parameters"
            )));
        }
        let detuning = (level.omega_mg - omega0)
            .abs()
            .min((level.omega_fm - omega0).abs());
        if detuning <= 10.0 * gamma_fg {
            return Err(Error::NearResonantLevel {
                index,
                detuning,
                gamma_fg,
            });
        }
    }

    let mut sum = 0.0;
    for m in levels {
        for mp in levels {
            let numerator =
                (m.d_fm / HBAR) * (m.d_mg / HBAR) * (mp.d_fm / HBAR) * (mp.d_mg / HBAR);
            sum += numerator / ((omega0 - m.omega_fm) * (mp.omega_mg - omega0));
        }
    }

    let l02 = geometry.l0_squared();
    let sigma2_l04 = sum * l02 * l02;
    if !(sigma2_l04 > 0.0) || !sigma2_l04.is_finite() {
        return Err(Error::Construction(format!(
            "sum-over-states coupling came out non-positive (Σ⁽²⁾L0⁴ = {sigma2_l04:e}); \
             the detuning signs make this level set destructively interfere"
        )));
    }
    Ok(DipoleCoupling {
        sigma2_l04,
        sigma2: cross_section_from_coupling(sigma2_l04, gamma_fg, geometry.area()),
    })
}

// ---------------------------------------------------------------------------
// Shared line-overlap integral
// ---------------------------------------------------------------------------

/// 2·Re[(1/2π)·∫ w(x) / (γ − i(c − x)) dx] over a window wide enough for both
/// the spectral weight and the Lorentzian line, plus the analytic Lorentzian
/// tail beyond the window.
///
/// `weight` is the squared spectral amplitude being overlapped with the line
/// (|φ(ω)|² for one-photon absorption, |K(x)|² for two-photon), centered near
/// `weight_center` with scale `weight_width`. `coverage` clips the window
/// where the weight is sampled from a grid — outside coverage the state is
/// identically zero, so no tail is added there; instead a
/// [`ValidityWarning::GridCoverage`] fires when the line still had weight at
/// the clipped edge. `line_center` is the Lorentzian center `c` in the same
/// variable and `gamma` its half-width γ. `report_shift` is added to a
/// clipped edge when reporting it as an absolute sum frequency.
///
/// The integrand is rescaled by its peak over the seed knots before
/// integration, so the quadrature tolerance acts relatively even when the
/// raw magnitudes are far from 1.
fn lorentzian_line_overlap(
    weight: &mut dyn FnMut(f64) -> f64,
    weight_center: f64,
    weight_width: f64,
    coverage: Option<(f64, f64)>,
    gamma: f64,
    line_center: f64,
    report_shift: f64,
    tol: f64,
) -> Result<Flagged<f64>> {
    let wide = (50.0 * gamma).max(10.0 * weight_width);
    let mut lo = (weight_center - wide).min(line_center - 50.0 * gamma);
    let mut hi = (weight_center + wide).max(line_center + 50.0 * gamma);
    let (mut clipped_lo, mut clipped_hi) = (false, false);
    if let Some((cov_lo, cov_hi)) = coverage {
        if cov_lo > lo {
            lo = cov_lo;
            clipped_lo = true;
        }
        if cov_hi < hi {
            hi = cov_hi;
            clipped_hi = true;
        }
    }
    if !(lo < hi) {
        // Grid coverage and the line window are disjoint: the state simply
        // cannot see the line. Zero, but say where coverage gave out.
        return Ok(Flagged::new(
            0.0,
            vec![ValidityWarning::GridCoverage {
                sum_frequency: line_center + report_shift,
            }],
        ));
    }

    // Knots at the structure of both factors so the adaptive pass starts from
    // segments that each contain at most one feature.
    let mut knots = vec![lo, hi];
    for c in [
        weight_center - 5.0 * weight_width,
        weight_center - weight_width,
        weight_center,
        weight_center + weight_width,
        weight_center + 5.0 * weight_width,
        line_center - 5.0 * gamma,
        line_center - gamma,
        line_center,
        line_center + gamma,
        line_center + 5.0 * gamma,
    ] {
        if c > lo && c < hi {
            knots.push(c);
        }
    }
    knots.sort_by(f64::total_cmp);
    let span = hi - lo;
    knots.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * span);

    let kernel = |x: f64| Complex64::new(gamma, x - line_center);

    // Peak scale over knots and midpoints, for the relative-tolerance rescale.
    let mut peak = 0.0_f64;
    for w in knots.windows(2) {
        for x in [w[0], 0.5 * (w[0] + w[1]), w[1]] {
            let f = weight(x) / kernel(x).norm();
            if f > peak {
                peak = f;
            }
        }
    }
    if peak == 0.0 {
        // The weight vanishes over the whole window (e.g. the zero state
        // left by symmetrizing an antisymmetric pair): nothing to integrate.
        return Ok(Flagged::clean(0.0));
    }

    let integral = integrate_1d_segmented(
        |x| Complex64::new(weight(x) / peak, 0.0) / kernel(x),
        &knots,
        tol,
    )?;
    let mut value = 2.0 * INV_TWO_PI * peak * integral.re;

    // Lorentzian mass (in the đx measure, so the full line integrates to 1)
    // beyond each edge, with the weight frozen at the edge value. Where the
    // window was cut by grid coverage the weight truly ends, so the mass is a
    // loss estimate rather than a correction.
    let mass_lo = 0.5 + (lo - line_center).atan2(gamma) / std::f64::consts::PI;
    let mass_hi = 0.5 - (hi - line_center).atan2(gamma) / std::f64::consts::PI;

    // Loss estimates at clipped edges probe a short step inside the edge as
    // well: the diagonal projection of a sampled pair amplitude pinches to
    // zero exactly at the coverage corner, which would otherwise hide weight
    // sitting just inside the cut.
    let inset = (0.02 * (hi - lo)).min(gamma);
    let mut warnings = Vec::new();
    let mut tail_added = 0.0;
    let mut loss_lo = 0.0;
    let mut loss_hi = 0.0;
    if clipped_lo {
        loss_lo = weight(lo).max(weight(lo + inset)) * mass_lo;
    } else {
        let tail = weight(lo) * mass_lo;
        value += tail;
        tail_added += tail;
    }
    if clipped_hi {
        loss_hi = weight(hi).max(weight(hi - inset)) * mass_hi;
    } else {
        let tail = weight(hi) * mass_hi;
        value += tail;
        tail_added += tail;
    }
    let denom = value.abs().max(f64::MIN_POSITIVE);
    if tail_added / denom > 1e-9 {
        warnings.push(ValidityWarning::LorentzianTail {
            bound: tail_added / denom,
        });
    }
    if (loss_lo + loss_hi) / denom > 1e-9 {
        let edge = if loss_lo >= loss_hi { lo } else { hi };
        warnings.push(ValidityWarning::GridCoverage {
            sum_frequency: edge + report_shift,
        });
    }

    Ok(Flagged::new(value, warnings))
}

fn guard_small_probability(out: &mut Flagged<f64>) {
    if out.value > SMALL_PROBABILITY_GUARD {
        out.push(ValidityWarning::LargeProbability {
            probability: out.value,
        });
    }
}

// ---------------------------------------------------------------------------
// One-photon absorption
// ---------------------------------------------------------------------------

/// One-photon excitation probability of the intermediate level:
/// P_m = μ²L0² · N · ∫ đω |φ(ω)|² · 2γ_mg/(γ_mg² + (ω_mg − ω)²).
///
/// Linear in the photon number and blind to spectral phase (only |φ|²
/// enters). Errors if the molecule has no one-photon level.
pub fn opa_probability(spec: &SpectralAmplitude, mol: &Molecule) -> Result<Flagged<f64>> {
    opa_with_photons(spec, mol, spec.photons())
}

/// [`opa_probability`] for a single-photon wave packet with the same
/// normalized spectrum: identical to the coherent result with N set to 1.
pub fn opa_probability_single_photon(
    spec: &SpectralAmplitude,
    mol: &Molecule,
) -> Result<Flagged<f64>> {
    opa_with_photons(spec, mol, 1.0)
}

fn opa_with_photons(spec: &SpectralAmplitude, mol: &Molecule, n: f64) -> Result<Flagged<f64>> {
    let level = *mol.one_photon().ok_or(Error::MissingOnePhotonLevel)?;
    let coverage = spec.grid().map(|g| (g.start(), g.end()));
    let tol = if spec.grid().is_some() {
        GRID_QUAD_TOL
    } else {
        DEFAULT_QUAD_TOL
    };
    // Only the intensity |φ(ω)|² drives one-photon absorption, so sampled
    // spectra are interpolated as node intensities: interpolating the complex
    // amplitude instead would let a rapidly wound spectral phase bleed into
    // the modulus between nodes.
    let mut weight: Box<dyn FnMut(f64) -> f64> = match spec.grid() {
        Some(g) => {
            let ints: Vec<f64> = g.values().iter().map(|v| v.norm_sqr()).collect();
            let (start, step) = (g.start(), g.step());
            let n_nodes = ints.len();
            Box::new(move |omega: f64| {
                let u = (omega - start) / step;
                if u <= 0.0 || u >= (n_nodes - 1) as f64 {
                    return 0.0;
                }
                let i = u.floor() as usize;
                let f = u - i as f64;
                ints[i] * (1.0 - f) + ints[i + 1] * f
            })
        }
        None => Box::new(|omega: f64| spec.shape_at(omega).norm_sqr()),
    };
    let overlap = lorentzian_line_overlap(
        &mut weight,
        spec.carrier(),
        spec.width(),
        coverage,
        level.gamma_mg,
        level.omega_mg,
        0.0,
        tol,
    )?;
    let mut out = overlap.map(|i| level.mu_sq_l02 * n * i);
    guard_small_probability(&mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Two-photon absorption, coherent light
// ---------------------------------------------------------------------------

/// Sum-frequency amplitude of a coherent spectrum,
/// K_coh(x) = ∫ đz φ(ω₀+z)·φ(ω₀+x−z): every ordered pair of frequencies that
/// adds up to 2ω₀+x, closed-form for Gaussian shapes and a grid convolution
/// otherwise.
pub fn k_coh(spec: &SpectralAmplitude, x: f64) -> Complex64 {
    spec.self_convolution_at(x)
}

/// Two-photon excitation probability under a coherent pulse:
/// P = N²·Σ⁽²⁾L0⁴·∫ đx |K_coh(x)|²·2γ_fg/(γ_fg² + (Δ−x)²), Δ = ω_fg − 2ω₀.
pub fn tpa_coherent(spec: &SpectralAmplitude, mol: &Molecule) -> Result<Flagged<f64>> {
    let omega0 = spec.carrier();
    // |K_coh|² is the self-convolution's intensity: √2 times wider than |φ|².
    let width = std::f64::consts::SQRT_2 * spec.width();
    let coverage = spec
        .grid()
        .map(|g| (2.0 * (g.start() - omega0), 2.0 * (g.end() - omega0)));
    let tol = if spec.grid().is_some() {
        GRID_QUAD_TOL
    } else {
        DEFAULT_QUAD_TOL
    };
    let mut weight = |x: f64| spec.self_convolution_at(x).norm_sqr();
    let overlap = lorentzian_line_overlap(
        &mut weight,
        0.0,
        width,
        coverage,
        mol.gamma_fg(),
        mol.detuning(omega0),
        2.0 * omega0,
        tol,
    )?;
    let n = spec.photons();
    let mut out = overlap.map(|i| n * n * mol.sigma2_l04() * i);
    guard_small_probability(&mut out);
    Ok(out)
}

/// Two-photon excitation probability for a long, quasi-monochromatic pulse of
/// arbitrary intensity profile:
/// P = 2Σ⁽²⁾L0⁴ · γ_fg/(γ_fg² + Δ²) · ∫|A(t)|⁴ dt.
///
/// Warns when the pulse bandwidth is not small against γ_fg (the
/// quasi-monochromatic assumption).
pub fn tpa_coherent_longpulse(
    envelope: &TimeEnvelope,
    mol: &Molecule,
    omega0: f64,
) -> Flagged<f64> {
    let gamma = mol.gamma_fg();
    let delta = mol.detuning(omega0);
    let line = gamma / (gamma * gamma + delta * delta);
    let mut out = Flagged::clean(2.0 * mol.sigma2_l04() * line * envelope.quartic_integral());
    let ratio = envelope.bandwidth_estimate() / gamma;
    if ratio > REGIME_RATIO_GUARD {
        out.push(ValidityWarning::BandwidthVsLinewidth { ratio });
    }
    guard_small_probability(&mut out);
    out
}

/// Impulsive two-photon excitation, with the zero-π diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulsiveTpa {
    pub probability: f64,
    /// True when the two-photon drive ∫A²(t)e^{iΔt}dt cancels to below 10⁻⁶
    /// of its no-cancellation scale (∫|A|²dt)² — a "two-photon zero-π" pulse
    /// whose spectral phase kills K(Δ) while leaving the energy untouched.
    pub zero_pi: bool,
}

/// Two-photon excitation probability for a pulse much shorter than the
/// final-state dephasing time: P = Σ⁽²⁾L0⁴·|∫A²(t)·e^{iΔt} dt|², evaluated on
/// complex field samples in the rotating frame at `omega0` (Δ = ω_fg − 2ω₀).
///
/// Unlike one-photon absorption this is fully phase-sensitive: chirping a
/// real envelope strictly lowers the probability, and a π phase flip between
/// two halves of A² cancels it entirely (flagged as `zero_pi`). Warns when
/// the pulse is not actually short against 1/γ_fg.
pub fn tpa_coherent_impulsive(
    envelope: &ComplexEnvelope,
    mol: &Molecule,
    omega0: f64,
) -> Flagged<ImpulsiveTpa> {
    let drive = envelope.squared_integral(mol.detuning(omega0));
    let photons = envelope.photon_number();
    let probability = mol.sigma2_l04() * drive.norm_sqr();
    let zero_pi = photons > 0.0 && drive.norm_sqr() / (photons * photons) < 1e-6;
    let mut out = Flagged::clean(ImpulsiveTpa {
        probability,
        zero_pi,
    });
    let ratio = envelope.duration_rms() * mol.gamma_fg();
    if ratio > REGIME_RATIO_GUARD {
        out.push(ValidityWarning::DurationVsLifetime { ratio });
    }
    if probability > SMALL_PROBABILITY_GUARD {
        out.push(ValidityWarning::LargeProbability { probability });
    }
    out
}

// ---------------------------------------------------------------------------
// Two-photon absorption, entangled pairs
// ---------------------------------------------------------------------------

/// Two-photon excitation probability from a single entangled-pair generation
/// event: P = 2Re[ε²·4Σ⁽²⁾L0⁴·∫ đx |K_ψ(x)|²/(γ_fg − i(Δ−x))].
///
/// Linear in ε², hence in pair flux. Asymmetric (distinguishable-photon)
/// states must be symmetrized first; passing one is an error rather than a
/// silently wrong number.
pub fn tpa_epp(psi: &JointSpectralAmplitude, mol: &Molecule) -> Result<Flagged<f64>> {
    if psi.needs_symmetrization() {
        return Err(Error::UnsymmetrizedJsa);
    }
    let omega0 = psi.carrier();
    let tol = if psi.x_coverage().is_some() {
        GRID_QUAD_TOL
    } else {
        DEFAULT_QUAD_TOL
    };
    let mut weight = |x: f64| psi.k(x).value.norm_sqr();
    let overlap = lorentzian_line_overlap(
        &mut weight,
        0.0,
        psi.k_width(),
        psi.x_coverage(),
        mol.gamma_fg(),
        mol.detuning(omega0),
        2.0 * omega0,
        tol,
    )?;
    let mut out = overlap.map(|i| 4.0 * psi.epsilon_sq() * mol.sigma2_l04() * i);
    out.absorb(psi.validity_warnings());
    guard_small_probability(&mut out);
    Ok(out)
}

/// Impulsive limit of [`tpa_epp`], for pair correlation times much shorter
/// than 1/γ_fg: P = 4ε²Σ⁽²⁾L0⁴·|∫đω ψ(ω, 2ω₀−ω)|² — the squared sum-frequency
/// amplitude on resonance, K_ψ(0).
///
/// The diagonal integral is unchanged by photon exchange, so symmetrization
/// is not required here. Warns when γ_fg is not actually small against the
/// sum-frequency bandwidth.
pub fn tpa_epp_impulsive(psi: &JointSpectralAmplitude, mol: &Molecule) -> Flagged<f64> {
    let k0 = psi.k(0.0).value;
    let mut out = Flagged::new(
        4.0 * psi.epsilon_sq() * mol.sigma2_l04() * k0.norm_sqr(),
        psi.validity_warnings(),
    );
    let k_width = psi.k_width();
    if k_width > 0.0 {
        let ratio = mol.gamma_fg() / k_width;
        if ratio > REGIME_RATIO_GUARD {
            out.push(ValidityWarning::DurationVsLifetime { ratio });
        }
    }
    guard_small_probability(&mut out);
    out
}

/// [`tpa_epp_impulsive`] evaluated the long way around: materialize ψ on an
/// n×n grid, build the equal-time diagonal of its two-dimensional time
/// transform in the rotating frame, and integrate it over time — the drive
/// is |∫ψ̃(t,t)dt|², which equals |K_ψ(0)|² by the Fourier identity
/// ∫dt e^{−i(δ+δ̃)t} = 2πδ(δ+δ̃).
///
/// This is the independent oracle for the frequency-domain path; the two are
/// held together to 1e-4 in tests. The time integral runs over exactly one
/// period of the sampled spectrum's frequency lattice — see the note at the
/// integration step.
pub fn tpa_epp_impulsive_time_domain(
    psi: &JointSpectralAmplitude,
    mol: &Molecule,
    n: usize,
) -> Result<Flagged<f64>> {
    let grid = psi.to_grid(n)?;
    let omega0 = psi.carrier();
    let (n0, n1) = grid.values().dim();
    let start = grid.start();
    let end = grid.end();
    let step = grid.step();

    // Trapezoid weights in the đω measure along each axis.
    let axis_weights = |count: usize, step: f64| -> Vec<f64> {
        (0..count)
            .map(|i| {
                let edge = i == 0 || i + 1 == count;
                step * INV_TWO_PI * if edge { 0.5 } else { 1.0 }
            })
            .collect()
    };
    let w0 = axis_weights(n0, step[0]);
    let w1 = axis_weights(n1, step[1]);

    // ψ̃(t,t) = Σ_ij w_i w_j ψ_ij e^{−i(δ_i+δ̃_j)t}, rotating frame δ = ω−ω₀.
    let diag_at = |t: f64| -> Complex64 {
        let phase0: Vec<Complex64> = (0..n0)
            .map(|i| Complex64::from_polar(w0[i], -(grid.omega(i) - omega0) * t))
            .collect();
        let phase1: Vec<Complex64> = (0..n1)
            .map(|j| Complex64::from_polar(w1[j], -(grid.omega_tilde(j) - omega0) * t))
            .collect();
        let mut acc = Complex64::ZERO;
        for i in 0..n0 {
            let mut row = Complex64::ZERO;
            for j in 0..n1 {
                row += grid.values()[[i, j]] * phase1[j];
            }
            acc += phase0[i] * row;
        }
        acc
    };

    // Every term of diag_at beats at δ_i+δ̃_j, a point of the sum-frequency
    // lattice with pitch h (the common axis step), so the diagonal transform
    // is periodic in t with period 2π/h. Integrate over exactly one period:
    // each oscillating mode then averages to zero and each zero-sum-frequency
    // mode contributes exactly its delta weight, which together reproduce
    // ∫dt e^{−i(δ+δ̃)t} = 2πδ(δ+δ̃) with no truncation tuning. A longer
    // window would not converge — the zero modes grow linearly with it. With
    // a uniform trapezoid over the full period (endpoints equal, so it is a
    // plain average) and more samples than twice the largest mode index, the
    // oscillating modes cancel exactly by discrete orthogonality.
    let h = step[0];
    if (step[0] - step[1]).abs() > 1e-9 * h {
        return Err(Error::Construction(
            "time-domain diagonal transform needs the same frequency step on \
             both grid axes so all beat frequencies share one lattice"
                .into(),
        ));
    }
    let span_sum = (end[0] - start[0]) + (end[1] - start[1]);
    let half_window = std::f64::consts::PI / h;
    let modes = (span_sum / h).round() as usize;
    let steps = 2 * modes + 8;
    let dt = 2.0 * half_window / steps as f64;
    let mut integral = Complex64::ZERO;
    for s in 0..=steps {
        let t = -half_window + s as f64 * dt;
        let w = if s == 0 || s == steps { 0.5 } else { 1.0 };
        integral += diag_at(t) * w;
    }
    let integral = integral * dt;

    let mut out = Flagged::new(
        4.0 * psi.epsilon_sq() * mol.sigma2_l04() * integral.norm_sqr(),
        psi.validity_warnings(),
    );
    guard_small_probability(&mut out);
    Ok(out)
}

/// Two-photon excitation probability after sending a pumped-Gaussian pair
/// through group-delay dispersion D on each photon: the sum-frequency
/// intensity is attenuated uniformly, so
/// P(D) = tpa_epp(ψ) · (1 + 16D²σ_B⁴)^{−1/2}, even in D.
///
/// `psi` must be the pumped Gaussian pair model with no dispersion of its
/// own (fold pre-existing dispersion into `apply_dispersion` instead); the
/// grid path — apply_dispersion, then [`tpa_epp`] — is the oracle this
/// closed form is tested against.
pub fn tpa_epp_dispersed(
    psi: &JointSpectralAmplitude,
    d: GroupDelayDispersion,
    mol: &Molecule,
) -> Result<Flagged<f64>> {
    let (_, sigma_b) = psi.gaussian_pump_widths().ok_or_else(|| {
        Error::Construction(
            "dispersed two-photon probability has a closed form only for the \
             pumped Gaussian pair model"
            .into(),
        )
    })?;
    if psi.gdd().unwrap_or(0.0) != 0.0 {
        return Err(Error::Construction(
            "pair state already carries group-delay dispersion; apply the extra \
             dispersion with apply_dispersion and evaluate tpa_epp directly"
                .into(),
        ));
    }
    let base = tpa_epp(psi, mol)?;
    Ok(base.map(|p| p * crate::lightstates::dispersion_attenuation(sigma_b, d.si())))
}
