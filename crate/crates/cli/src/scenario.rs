//! Scenario files: strict plain-text configuration for a laboratory run.
//!
//! A scenario is TOML with five fixed sections (`light`, `molecule`,
//! `geometry`, `sample`, `detection`) and an optional `sweep` section. Every
//! dimensioned value is a string carrying an explicit unit ("1064 nm",
//! "9 GM"); bare numbers are accepted only for dimensionless keys. Unknown
//! keys anywhere are rejected, and every complaint carries the line it came
//! from. Command-line overrides (`key=value` with dotted paths like
//! `detection.eta=0.02`) replace file values before anything is built.

use std::collections::BTreeMap;

use serde::Deserialize;
use toml::{Spanned, Value};

use etpa_core::lightstates::{JointSpectralAmplitude, SpectralAmplitude};
use etpa_core::rates::{LightSource, Sample, Scenario};
use etpa_core::units::{
    Area, NumberDensity, PathLength, Power, TimeInterval, TpaCrossSection, Wavelength,
};
use etpa_core::absorption::{BeamGeometry, Coupling, Molecule};
use etpa_core::{Error, Result};

use crate::units_parse::{parse_quantity, Kind};

pub const SCENARIO_SCHEMA: &str = "etpa-scenario/1";

/// Dotted paths accepted as overrides and sweep parameters.
pub const SETTABLE_KEYS: &[&str] = &[
    "light.kind",
    "light.wavelength",
    "light.width",
    "light.photons",
    "light.pump_width",
    "light.marginal_width",
    "light.pair_probability",
    "light.pair_flux",
    "light.gdd",
    "light.power",
    "molecule.cross_section",
    "molecule.coupling",
    "molecule.linewidth",
    "molecule.detuning",
    "geometry.area",
    "geometry.refractive_index",
    "sample.concentration",
    "sample.path_length",
    "detection.eta",
    "detection.window",
];

type Field = Option<Spanned<Value>>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LightSection {
    kind: Field,
    wavelength: Field,
    width: Field,
    photons: Field,
    pump_width: Field,
    marginal_width: Field,
    pair_probability: Field,
    gdd: Field,
    power: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoleculeSection {
    cross_section: Field,
    coupling: Field,
    linewidth: Field,
    detuning: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometrySection {
    area: Field,
    refractive_index: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleSection {
    concentration: Field,
    path_length: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectionSection {
    eta: Field,
    window: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    parameter: Field,
    from: Field,
    to: Field,
    steps: Field,
    scale: Field,
}

/// Parsed but not yet validated scenario file, plus the source text for
/// line-number reporting.
#[derive(Debug)]
pub struct ScenarioConfig {
    file: ScenarioFile,
    src: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema: Field,
    light: LightSection,
    molecule: MoleculeSection,
    geometry: GeometrySection,
    sample: SampleSection,
    detection: DetectionSection,
    sweep: Option<SweepSection>,
}

/// A value on its way into the builder: from the file (with its span), from
/// a textual `--set` override, or an SI number injected by the sweep driver.
#[derive(Debug, Clone, Copy)]
enum Val<'a> {
    File(&'a Spanned<Value>),
    Text(&'a str),
    Si(f64),
}

/// Override payload: raw text from `--set key=value`, or an SI value from
/// the sweep driver.
#[derive(Debug, Clone)]
pub enum OverrideValue {
    Text(String),
    Si(f64),
}

/// Parses `key=value` strings from the command line.
pub fn parse_overrides(pairs: &[String]) -> Result<Vec<(String, OverrideValue)>> {
    let mut out = Vec::new();
    for pair in pairs {
        let Some((key, value)) = pair.split_once('=') else {
            return Err(Error::Validation(vec![format!(
                "override {pair:?} is not of the form key=value"
            )]));
        };
        out.push((
            key.trim().to_string(),
            OverrideValue::Text(value.trim().to_string()),
        ));
    }
    Ok(out)
}

/// Parses scenario TOML. Syntax and unknown-key errors surface here with the
/// line numbers the TOML parser reports.
pub fn parse_scenario(src: &str) -> Result<ScenarioConfig> {
    let file: ScenarioFile = toml::from_str(src)
        .map_err(|e| Error::Validation(vec![format!("scenario file: {e}")]))?;
    Ok(ScenarioConfig {
        file,
        src: src.to_string(),
    })
}

/// Everything a scenario file can describe: the scenario itself and an
/// optional sweep request.
#[derive(Debug, Clone)]
pub struct Built {
    pub scenario: Scenario,
    pub sweep: Option<SweepRequest>,
}

/// A validated sweep: dotted parameter path and SI endpoint values.
#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log: bool,
}

/// The physical kind a settable path parses as.
pub fn path_kind(path: &str) -> Option<Kind> {
    Some(match path {
        "light.wavelength" => Kind::Wavelength,
        "light.width" | "light.pump_width" | "light.marginal_width" | "molecule.detuning" => {
            Kind::SpectralWidth
        }
        "light.photons"
        | "light.pair_probability"
        | "geometry.refractive_index"
        | "detection.eta"
        | "molecule.coupling" => Kind::Dimensionless,
        "light.pair_flux" => Kind::Flux,
        "light.gdd" => Kind::Gdd,
        "light.power" => Kind::Power,
        "molecule.cross_section" => Kind::CrossSection,
        "molecule.linewidth" => Kind::LinewidthFwhm,
        "geometry.area" => Kind::Area,
        "sample.concentration" => Kind::Concentration,
        "sample.path_length" => Kind::Length,
        "detection.window" => Kind::Time,
        _ => return None,
    })
}

struct Builder<'a> {
    src: &'a str,
    overrides: BTreeMap<&'a str, &'a OverrideValue>,
    problems: Vec<String>,
}

impl<'a> Builder<'a> {
    fn line_of(&self, byte: usize) -> usize {
        1 + self.src.as_bytes()[..byte.min(self.src.len())]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
    }

    /// Resolves a field against the override map (consuming the override).
    fn resolve(&mut self, path: &'static str, file_val: &'a Field) -> Option<Val<'a>> {
        if let Some(ov) = self.overrides.remove(path) {
            return Some(match ov {
                OverrideValue::Text(s) => Val::Text(s),
                OverrideValue::Si(v) => Val::Si(*v),
            });
        }
        file_val.as_ref().map(Val::File)
    }

    fn complain(&mut self, path: &str, val: Val<'a>, msg: &str) {
        let loc = match val {
            Val::File(sp) => format!("line {}", self.line_of(sp.span().start)),
            Val::Text(_) => "override".to_string(),
            Val::Si(_) => "sweep value".to_string(),
        };
        self.problems.push(format!("{path} ({loc}): {msg}"));
    }

    /// Extracts an SI number of the given kind, recording any problem.
    fn quantity(&mut self, path: &str, val: Option<Val<'a>>, kind: Kind) -> Option<f64> {
        let val = val?;
        let parsed = match val {
            Val::Si(v) => return Some(v),
            Val::Text(s) => parse_quantity(kind, s),
            Val::File(sp) => match sp.get_ref() {
                Value::String(s) => parse_quantity(kind, s),
                Value::Integer(i) => {
                    if kind == Kind::Dimensionless {
                        Ok(*i as f64)
                    } else {
                        Err(format!(
                            "needs an explicit unit (e.g. a string like \"20 nW\"), \
                             got the bare number {i}"
                        ))
                    }
                }
                Value::Float(f) => {
                    if kind == Kind::Dimensionless {
                        Ok(*f)
                    } else {
                        Err(format!(
                            "needs an explicit unit (e.g. a string like \"20 nW\"), \
                             got the bare number {f}"
                        ))
                    }
                }
                other => Err(format!(
                    "expected a unit-suffixed string, got a {}",
                    other.type_str()
                )),
            },
        };
        match parsed {
            Ok(v) => Some(v),
            Err(msg) => {
                self.complain(path, val, &msg);
                None
            }
        }
    }

    fn string(&mut self, path: &str, val: Option<Val<'a>>) -> Option<String> {
        let val = val?;
        match val {
            Val::Text(s) => Some(s.to_string()),
            Val::File(sp) => match sp.get_ref() {
                Value::String(s) => Some(s.clone()),
                other => {
                    let msg = format!("expected a string, got a {}", other.type_str());
                    self.complain(path, val, &msg);
                    None
                }
            },
            Val::Si(_) => {
                self.complain(path, val, "expected a string");
                None
            }
        }
    }

    fn integer(&mut self, path: &str, val: Option<Val<'a>>) -> Option<i64> {
        let val = val?;
        match val {
            Val::Si(v) => Some(v as i64),
            Val::Text(s) => match s.parse::<i64>() {
                Ok(v) => Some(v),
                Err(_) => {
                    self.complain(path, val, "expected an integer");
                    None
                }
            },
            Val::File(sp) => match sp.get_ref() {
                Value::Integer(i) => Some(*i),
                other => {
                    let msg = format!("expected an integer, got a {}", other.type_str());
                    self.complain(path, val, &msg);
                    None
                }
            },
        }
    }

    fn require<T>(&mut self, path: &str, v: Option<T>, had_input: bool) -> Option<T> {
        if v.is_none() && !had_input {
            self.problems.push(format!("{path}: missing required key"));
        }
        v
    }
}

/// Builds the core [`Scenario`] (plus any sweep request) from a parsed file
/// and overrides, collecting every problem before failing.
pub fn build_scenario(
    cfg: &ScenarioConfig,
    overrides: &[(String, OverrideValue)],
) -> Result<Built> {
    let mut b = Builder {
        src: &cfg.src,
        overrides: BTreeMap::new(),
        problems: Vec::new(),
    };
    for (key, value) in overrides {
        if !SETTABLE_KEYS.contains(&key.as_str()) {
            b.problems.push(format!(
                "override {key:?} is not a settable key; valid keys: {}",
                SETTABLE_KEYS.join(", ")
            ));
            continue;
        }
        b.overrides.insert(key.as_str(), value);
    }

    let f = &cfg.file;
    if let Some(schema) = &f.schema {
        if let Value::String(s) = schema.get_ref() {
            if s != SCENARIO_SCHEMA {
                let line = 1 + cfg.src.as_bytes()[..schema.span().start]
                    .iter()
                    .filter(|&&b| b == b'\n')
                    .count();
                b.problems.push(format!(
                    "schema (line {line}): unsupported schema {s:?}, this build reads \
                     {SCENARIO_SCHEMA:?}"
                ));
            }
        }
    }

    // Detection first: the window participates in pair-flux bookkeeping.
    let v = b.resolve("detection.eta", &f.detection.eta);
    let eta = b.quantity("detection.eta", v, Kind::Dimensionless);
    let eta = b.require("detection.eta", eta, v.is_some());
    let v = b.resolve("detection.window", &f.detection.window);
    let window = b.quantity("detection.window", v, Kind::Time);
    let window = b.require("detection.window", window, v.is_some());

    // Light.
    let v = b.resolve("light.kind", &f.light.kind);
    let kind = b.string("light.kind", v);
    let kind = b.require("light.kind", kind, v.is_some());
    let v = b.resolve("light.wavelength", &f.light.wavelength);
    let wavelength = b.quantity("light.wavelength", v, Kind::Wavelength);
    let wavelength = b.require("light.wavelength", wavelength, v.is_some());
    let v = b.resolve("light.width", &f.light.width);
    let width = b.quantity("light.width", v, Kind::SpectralWidth);
    let v = b.resolve("light.photons", &f.light.photons);
    let photons = b.quantity("light.photons", v, Kind::Dimensionless);
    let v = b.resolve("light.pump_width", &f.light.pump_width);
    let pump_width = b.quantity("light.pump_width", v, Kind::SpectralWidth);
    let v = b.resolve("light.marginal_width", &f.light.marginal_width);
    let marginal_width = b.quantity("light.marginal_width", v, Kind::SpectralWidth);
    let v = b.resolve("light.pair_probability", &f.light.pair_probability);
    let pair_probability = b.quantity("light.pair_probability", v, Kind::Dimensionless);
    // pair_flux is an override/sweep-only alias (it has no file field): it
    // resolves to a pair probability through the detection window below.
    let pair_flux = match b.overrides.remove("light.pair_flux") {
        None => None,
        Some(OverrideValue::Si(v)) => Some(*v),
        Some(OverrideValue::Text(s)) => match parse_quantity(Kind::Flux, s) {
            Ok(v) => Some(v),
            Err(msg) => {
                b.problems.push(format!("light.pair_flux (override): {msg}"));
                None
            }
        },
    };
    let v = b.resolve("light.gdd", &f.light.gdd);
    let gdd = b.quantity("light.gdd", v, Kind::Gdd);
    let v = b.resolve("light.power", &f.light.power);
    let power = b.quantity("light.power", v, Kind::Power);

    // Molecule.
    let v = b.resolve("molecule.cross_section", &f.molecule.cross_section);
    let cross_section = b.quantity("molecule.cross_section", v, Kind::CrossSection);
    let v = b.resolve("molecule.coupling", &f.molecule.coupling);
    let coupling = b.quantity("molecule.coupling", v, Kind::Dimensionless);
    let v = b.resolve("molecule.linewidth", &f.molecule.linewidth);
    let linewidth = b.quantity("molecule.linewidth", v, Kind::LinewidthFwhm);
    let linewidth = b.require("molecule.linewidth", linewidth, v.is_some());
    let v = b.resolve("molecule.detuning", &f.molecule.detuning);
    let detuning = b.quantity("molecule.detuning", v, Kind::SpectralWidth);

    // Geometry.
    let v = b.resolve("geometry.area", &f.geometry.area);
    let area = b.quantity("geometry.area", v, Kind::Area);
    let area = b.require("geometry.area", area, v.is_some());
    let v = b.resolve("geometry.refractive_index", &f.geometry.refractive_index);
    let refractive_index = b.quantity("geometry.refractive_index", v, Kind::Dimensionless);

    // Sample.
    let v = b.resolve("sample.concentration", &f.sample.concentration);
    let concentration = b.quantity("sample.concentration", v, Kind::Concentration);
    let concentration = b.require("sample.concentration", concentration, v.is_some());
    let v = b.resolve("sample.path_length", &f.sample.path_length);
    let path_length = b.quantity("sample.path_length", v, Kind::Length);
    let path_length = b.require("sample.path_length", path_length, v.is_some());

    // Sweep section.
    let sweep = match &f.sweep {
        None => None,
        Some(s) => {
            let v = b.resolve("sweep.parameter", &s.parameter);
            let parameter = b.string("sweep.parameter", v);
            let parameter = b.require("sweep.parameter", parameter, v.is_some());
            let sweep_kind = parameter.as_deref().and_then(|p| {
                if !SETTABLE_KEYS.contains(&p) {
                    b.problems.push(format!(
                        "sweep.parameter: {p:?} is not sweepable; valid parameters: {}",
                        SETTABLE_KEYS.join(", ")
                    ));
                    return None;
                }
                path_kind(p)
            });
            let v = b.resolve("sweep.from", &s.from);
            let from = sweep_kind.and_then(|k| b.quantity("sweep.from", v, k));
            let from = b.require("sweep.from", from, v.is_some());
            let v = b.resolve("sweep.to", &s.to);
            let to = sweep_kind.and_then(|k| b.quantity("sweep.to", v, k));
            let to = b.require("sweep.to", to, v.is_some());
            let v = b.resolve("sweep.steps", &s.steps);
            let steps = b.integer("sweep.steps", v);
            let steps = b.require("sweep.steps", steps, v.is_some());
            if let Some(n) = steps {
                if n < 2 {
                    b.problems
                        .push(format!("sweep.steps: need at least 2 steps, got {n}"));
                }
            }
            let v = b.resolve("sweep.scale", &s.scale);
            let scale = b.string("sweep.scale", v);
            let log = match scale.as_deref() {
                None | Some("linear") => false,
                Some("log") => true,
                Some(other) => {
                    b.problems.push(format!(
                        "sweep.scale: expected \"linear\" or \"log\", got {other:?}"
                    ));
                    false
                }
            };
            if log {
                if let (Some(lo), Some(hi)) = (from, to) {
                    if lo <= 0.0 || hi <= 0.0 {
                        b.problems.push(
                            "sweep.scale: log spacing needs strictly positive endpoints"
                                .to_string(),
                        );
                    }
                }
            }
            match (parameter, from, to, steps) {
                (Some(parameter), Some(from), Some(to), Some(steps)) if steps >= 2 => {
                    Some(SweepRequest {
                        parameter,
                        from,
                        to,
                        steps: steps as usize,
                        log,
                    })
                }
                _ => None,
            }
        }
    };

    // Leftover overrides were never consumed: with the full resolve pass
    // above this only happens for keys valid in the other light kind; those
    // are reported below by the kind-specific checks, so nothing to do here.

    // Cross-field assembly.
    let carrier = wavelength.map(|m| Wavelength::from_meters(m).angular_frequency());
    let light = match (kind.as_deref(), carrier) {
        (Some("coherent"), Some(w0)) => {
            for (path, present) in [
                ("light.pump_width", pump_width.is_some()),
                ("light.marginal_width", marginal_width.is_some()),
                ("light.pair_probability", pair_probability.is_some()),
                ("light.pair_flux", pair_flux.is_some()),
                ("light.gdd", gdd.is_some()),
            ] {
                if present {
                    b.problems
                        .push(format!("{path}: not valid for coherent light"));
                }
            }
            if width.is_none() {
                b.problems.push("light.width: missing required key".into());
            }
            if power.is_none() && photons.is_none() {
                b.problems.push(
                    "light: coherent scenarios need either light.power or light.photons"
                        .into(),
                );
            }
            match width {
                Some(sigma) => {
                    match SpectralAmplitude::gaussian(w0, sigma, photons.unwrap_or(1.0)) {
                        Ok(spec) => Some(LightSource::Coherent(spec)),
                        Err(e) => {
                            b.problems.push(format!("light: {e}"));
                            None
                        }
                    }
                }
                None => None,
            }
        }
        (Some("pairs"), Some(w0)) => {
            for (path, present) in [
                ("light.width", width.is_some()),
                ("light.photons", photons.is_some()),
            ] {
                if present {
                    b.problems
                        .push(format!("{path}: not valid for pair-source light"));
                }
            }
            if pump_width.is_none() {
                b.problems
                    .push("light.pump_width: missing required key".into());
            }
            if marginal_width.is_none() {
                b.problems
                    .push("light.marginal_width: missing required key".into());
            }
            let eps_sq = match (pair_probability, pair_flux, power, window) {
                (_, Some(flux), Some(_), _) => {
                    let _ = flux;
                    b.problems.push(
                        "light.pair_flux: cannot be combined with light.power \
                         (the flux already fixes the photon budget)"
                            .into(),
                    );
                    None
                }
                (_, Some(flux), None, Some(t)) => Some(flux * t / 2.0),
                (Some(e), None, _, _) => Some(e),
                (None, None, Some(p), Some(t)) => {
                    // ε² from the stated power: F = Pλ/(hc), ε² = F·T/2.
                    match etpa_core::rates::flux_from_power(
                        Power::from_watts(p),
                        Wavelength::from_meters(wavelength.unwrap()),
                    ) {
                        Ok(flux) => Some(flux.si() * t / 2.0),
                        Err(e) => {
                            b.problems.push(format!("light.power: {e}"));
                            None
                        }
                    }
                }
                (None, None, _, _) => {
                    b.problems.push(
                        "light: pair scenarios need light.pair_probability, \
                         light.pair_flux, or light.power"
                            .into(),
                    );
                    None
                }
                (_, Some(_), None, None) => None,
            };
            match (pump_width, marginal_width, eps_sq) {
                (Some(sn), Some(sb), Some(e)) => {
                    match JointSpectralAmplitude::gaussian_pump(w0, sn, sb, e) {
                        Ok(psi) => {
                            Some(LightSource::Pairs(psi.apply_dispersion(gdd.unwrap_or(0.0))))
                        }
                        Err(e) => {
                            b.problems.push(format!("light: {e}"));
                            None
                        }
                    }
                }
                _ => None,
            }
        }
        // Valid kind but no carrier: the missing-wavelength problem is already
        // recorded, so there is nothing further to assemble or complain about.
        (Some("coherent") | Some("pairs"), None) => None,
        (Some(other), _) => {
            b.problems.push(format!(
                "light.kind: expected \"coherent\" or \"pairs\", got {other:?}"
            ));
            None
        }
        (None, _) => None,
    };

    let mol = match (carrier, linewidth, area, cross_section, coupling) {
        (Some(w0), Some(gamma), Some(a0), cs, cp) => {
            let coupling = match (cs, cp) {
                (Some(si), None) => Some(Coupling::CrossSection(TpaCrossSection::from_si(si))),
                (None, Some(c)) => Some(Coupling::SumOverStates(c)),
                (Some(_), Some(_)) => {
                    b.problems.push(
                        "molecule: give either molecule.cross_section or \
                         molecule.coupling, not both"
                            .into(),
                    );
                    None
                }
                (None, None) => {
                    b.problems.push(
                        "molecule: needs molecule.cross_section or molecule.coupling"
                            .into(),
                    );
                    None
                }
            };
            let geometry = BeamGeometry::new(
                w0,
                Area::from_si(a0),
                refractive_index.unwrap_or(1.0),
            );
            match (coupling, geometry) {
                (Some(c), Ok(g)) => {
                    let omega_fg = 2.0 * w0 + detuning.unwrap_or(0.0);
                    match Molecule::new(omega_fg, gamma, c, g) {
                        Ok(m) => Some(m),
                        Err(e) => {
                            b.problems.push(format!("molecule: {e}"));
                            None
                        }
                    }
                }
                (_, Err(e)) => {
                    b.problems.push(format!("geometry: {e}"));
                    None
                }
                _ => None,
            }
        }
        _ => None,
    };

    if !b.problems.is_empty() {
        return Err(Error::Validation(b.problems));
    }
    let (light, mol) = match (light, mol) {
        (Some(l), Some(m)) => (l, m),
        // No recorded problem can only mean an upstream `require` fired —
        // defensive, should be unreachable.
        _ => {
            return Err(Error::Validation(vec![
                "scenario: incomplete configuration".into()
            ]))
        }
    };
    Ok(Built {
        scenario: Scenario {
            light,
            mol,
            window: TimeInterval::from_si(window.unwrap()),
            sample: Sample {
                concentration: NumberDensity::from_si(concentration.unwrap()),
                path_length: PathLength::from_si(path_length.unwrap()),
            },
            detector_efficiency: eta.unwrap(),
            power: power.map(Power::from_watts),
        },
        sweep,
    })
}
