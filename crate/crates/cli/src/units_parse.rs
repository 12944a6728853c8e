//! Kind-directed parsing of unit-suffixed scalars ("1064 nm", "9 GM",
//! "10 THz", "20 nW") from scenario files and command-line overrides.
//!
//! Every dimensioned value must carry an explicit unit; a bare number is
//! rejected with a message naming the offending key. The key's physical kind
//! selects the admissible units and the conversion to the engine's SI
//! conventions (angular frequencies in rad/s, everything else plain SI).

/// Physical kind of a configuration value; decides which unit suffixes are
/// accepted and what they convert to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Vacuum wavelength → meters. Units: nm, um, m.
    Wavelength,
    /// Optical power → watts. Units: nW, uW, mW, W.
    Power,
    /// Gaussian intensity width σ. Ordinary-frequency units (Hz…THz) are
    /// converted to angular rad/s (×2π); "rad/s" is taken as-is.
    SpectralWidth,
    /// Lorentzian full width at half maximum. Ordinary-frequency units give
    /// the half-width γ = π·f; "rad/s" means the angular full width, γ = v/2.
    LinewidthFwhm,
    /// Duration → seconds. Units: fs, ps, ns, us, ms, s.
    Time,
    /// Two-photon cross-section → m⁴·s. Units: GM, cm4s.
    CrossSection,
    /// Number density → 1/m³. Units: M, mM, uM (molar family).
    Concentration,
    /// Length → meters. Units: um, mm, cm, m.
    Length,
    /// Area → m². Units: um2, mm2, cm2, m2.
    Area,
    /// Group-delay dispersion → s². Units: fs2, ps2, s2.
    Gdd,
    /// Photon flux → 1/s. Unit: 1/s.
    Flux,
    /// Pure number; any unit suffix is rejected.
    Dimensionless,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Wavelength => "a wavelength (nm, um, m)",
            Kind::Power => "a power (nW, uW, mW, W)",
            Kind::SpectralWidth => "a spectral width (Hz, kHz, MHz, GHz, THz, rad/s)",
            Kind::LinewidthFwhm => {
                "a full width at half maximum (Hz, kHz, MHz, GHz, THz, rad/s)"
            }
            Kind::Time => "a duration (fs, ps, ns, us, ms, s)",
            Kind::CrossSection => "a two-photon cross-section (GM, cm4s)",
            Kind::Concentration => "a concentration (uM, mM, M)",
            Kind::Length => "a length (um, mm, cm, m)",
            Kind::Area => "an area (um2, mm2, cm2, m2)",
            Kind::Gdd => "a group-delay dispersion (fs2, ps2, s2)",
            Kind::Flux => "a photon flux (1/s)",
            Kind::Dimensionless => "a plain number",
        }
    }
}

/// Splits a raw scalar into numeric prefix and unit suffix. The unit may be
/// separated by whitespace or attached directly ("20 nW" and "20nW" are both
/// accepted).
fn split_number(raw: &str) -> Result<(f64, &str), String> {
    let s = raw.trim();
    if s.is_empty() {
        return Err("empty value".into());
    }
    let bytes = s.as_bytes();
    let mut end = 0;
    while end < bytes.len() {
        let c = bytes[end] as char;
        let is_num = c.is_ascii_digit()
            || c == '.'
            || ((c == '+' || c == '-') && end == 0)
            || ((c == 'e' || c == 'E')
                && end + 1 < bytes.len()
                && {
                    let next = bytes[end + 1] as char;
                    next.is_ascii_digit()
                        || ((next == '+' || next == '-')
                            && end + 2 < bytes.len()
                            && (bytes[end + 2] as char).is_ascii_digit())
                })
            || ((c == '+' || c == '-')
                && end > 0
                && matches!(bytes[end - 1] as char, 'e' | 'E'));
        if is_num {
            end += 1;
        } else {
            break;
        }
    }
    let number: f64 = s[..end]
        .parse()
        .map_err(|_| format!("cannot read a number from {s:?}"))?;
    Ok((number, s[end..].trim()))
}

/// Parses `raw` as a value of physical kind `kind`, returning the SI
/// magnitude (rad/s for the frequency kinds). Errors are plain messages;
/// callers prefix the key name and location.
pub fn parse_quantity(kind: Kind, raw: &str) -> Result<f64, String> {
    let (v, unit) = split_number(raw)?;
    if kind == Kind::Dimensionless {
        return if unit.is_empty() {
            Ok(v)
        } else {
            Err(format!(
                "expected a plain number, got unit suffix {unit:?}"
            ))
        };
    }
    if unit.is_empty() {
        return Err(format!(
            "needs an explicit unit: expected {}",
            kind.describe()
        ));
    }
    let converted = match kind {
        Kind::Wavelength => match unit {
            "nm" => Some(v * 1e-9),
            "um" => Some(v * 1e-6),
            "m" => Some(v),
            _ => None,
        },
        Kind::Power => match unit {
            "nW" => Some(v * 1e-9),
            "uW" => Some(v * 1e-6),
            "mW" => Some(v * 1e-3),
            "W" => Some(v),
            _ => None,
        },
        Kind::SpectralWidth | Kind::LinewidthFwhm => {
            let ordinary = match unit {
                "Hz" => Some(v),
                "kHz" => Some(v * 1e3),
                "MHz" => Some(v * 1e6),
                "GHz" => Some(v * 1e9),
                "THz" => Some(v * 1e12),
                _ => None,
            };
            match (ordinary, unit) {
                (Some(f), _) => Some(if kind == Kind::SpectralWidth {
                    std::f64::consts::TAU * f
                } else {
                    std::f64::consts::PI * f
                }),
                (None, "rad/s") => Some(if kind == Kind::SpectralWidth {
                    v
                } else {
                    0.5 * v
                }),
                _ => None,
            }
        }
        Kind::Time => match unit {
            "fs" => Some(v * 1e-15),
            "ps" => Some(v * 1e-12),
            "ns" => Some(v * 1e-9),
            "us" => Some(v * 1e-6),
            "ms" => Some(v * 1e-3),
            "s" => Some(v),
            _ => None,
        },
        Kind::CrossSection => match unit {
            "GM" => Some(v * 1e-58),
            "cm4s" => Some(v * 1e-8),
            _ => None,
        },
        Kind::Concentration => {
            // mol/L → 1/m³: × N_A × 10³.
            let per_m3 = etpa_core::constants::AVOGADRO * 1e3;
            match unit {
                "uM" => Some(v * 1e-6 * per_m3),
                "mM" => Some(v * 1e-3 * per_m3),
                "M" => Some(v * per_m3),
                _ => None,
            }
        }
        Kind::Length => match unit {
            "um" => Some(v * 1e-6),
            "mm" => Some(v * 1e-3),
            "cm" => Some(v * 1e-2),
            "m" => Some(v),
            _ => None,
        },
        Kind::Area => match unit {
            "um2" => Some(v * 1e-12),
            "mm2" => Some(v * 1e-6),
            "cm2" => Some(v * 1e-4),
            "m2" => Some(v),
            _ => None,
        },
        Kind::Gdd => match unit {
            "fs2" => Some(v * 1e-30),
            "ps2" => Some(v * 1e-24),
            "s2" => Some(v),
            _ => None,
        },
        Kind::Flux => match unit {
            "1/s" => Some(v),
            _ => None,
        },
        Kind::Dimensionless => unreachable!("handled above"),
    };
    converted.ok_or_else(|| {
        format!(
            "unsupported unit {unit:?}: expected {}",
            kind.describe()
        )
    })
}
