//! `etpa` — event rates and enhancement factors for two-photon absorption
//! with classical and entangled light.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use etpa_cli::presets::{run_preset, PresetOutput, PRESET_NAMES};
use etpa_cli::scenario::{
    build_scenario, parse_overrides, parse_scenario, path_kind, SweepRequest,
};
use etpa_cli::sweep::run_sweep;
use etpa_cli::units_parse::parse_quantity;
use etpa_core::lightstates::export_jsa;
use etpa_core::rates::{evaluate_scenario, LightSource, RateReport};
use etpa_core::{Error, Result};

/// Environment variable naming the default directory for scenario files;
/// paths that do not resolve as given are retried under it.
const CONFIG_DIR_VAR: &str = "ETPA_CONFIG_DIR";

#[derive(Parser)]
#[command(
    name = "etpa",
    version,
    about = "Two-photon absorption rates for coherent light and entangled photon pairs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Samples per axis when materializing a joint amplitude (export-jsa).
    #[arg(long, global = true, default_value_t = 256)]
    grid_size: usize,
    /// Quadrature tolerance for grid-backed evaluation paths; the built-in
    /// closed-form verbs do not consult it.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a built-in worked-example preset; omit the name to list them.
    Preset { name: Option<String> },
    /// Evaluate a scenario file into an event-rate report.
    Run {
        path: PathBuf,
        /// Override a scenario key, e.g. --set detection.eta=0.02 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Re-evaluate a scenario across a range of one key.
    Sweep {
        path: PathBuf,
        /// Swept key (dotted path); defaults to the file's [sweep] section.
        #[arg(long)]
        parameter: Option<String>,
        /// Range start, unit-suffixed like the key itself.
        #[arg(long)]
        from: Option<String>,
        /// Range end, unit-suffixed like the key itself.
        #[arg(long)]
        to: Option<String>,
        /// Number of points (≥ 2).
        #[arg(long)]
        steps: Option<usize>,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Write the scenario's pair state as a sampled plain-text matrix.
    ExportJsa {
        path: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn resolve_path(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(CONFIG_DIR_VAR) {
        Some(dir) => {
            let candidate = Path::new(&dir).join(path);
            if candidate.exists() {
                candidate
            } else {
                path.to_path_buf()
            }
        }
        None => path.to_path_buf(),
    }
}

fn read_scenario(path: &Path) -> Result<etpa_cli::scenario::ScenarioConfig> {
    let resolved = resolve_path(path);
    let src = std::fs::read_to_string(&resolved).map_err(|e| {
        Error::Validation(vec![format!(
            "cannot read scenario file {}: {e}",
            resolved.display()
        )])
    })?;
    parse_scenario(&src)
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            Error::Format(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            std::io::stdout()
                .flush()
                .map_err(|e| Error::Format(format!("stdout: {e}")))
        }
    }
}

fn preset_csv(out: &PresetOutput) -> String {
    let mut s = String::from("label,computed,reference,rel_deviation,within\n");
    for row in &out.rows {
        s.push_str(&format!(
            "{},{:e},{},{},{}\n",
            row.label,
            row.computed,
            row.reference.map_or_else(String::new, |v| format!("{v:e}")),
            row.rel_deviation
                .map_or_else(String::new, |v| format!("{v:e}")),
            row.within.map_or_else(String::new, |v| format!("{v}")),
        ));
    }
    s
}

fn report_csv(report: &RateReport) -> String {
    let scalars = report.scalars();
    let header: Vec<&str> = scalars.iter().map(|(n, _)| *n).collect();
    let values: Vec<String> = scalars.iter().map(|(_, v)| format!("{v:e}")).collect();
    format!("{}\n{}\n", header.join(","), values.join(","))
}

fn render_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Format(format!("serialization failed: {e}")))
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(tol) = cli.tol {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::Validation(vec![format!(
                "--tol must be positive and finite, got {tol}"
            )]));
        }
    }
    if cli.grid_size < 8 {
        return Err(Error::Validation(vec![format!(
            "--grid-size must be at least 8, got {}",
            cli.grid_size
        )]));
    }
    match &cli.cmd {
        Cmd::Preset { name: None } => {
            let mut s = String::from("available presets:\n");
            for name in PRESET_NAMES {
                s.push_str("  ");
                s.push_str(name);
                s.push('\n');
            }
            emit(&cli.output, &s)
        }
        Cmd::Preset { name: Some(name) } => {
            let out = run_preset(name)?;
            let rendered = match cli.format {
                Format::Text => out.to_text(),
                Format::Json => render_json(&out)?,
                Format::Csv => preset_csv(&out),
            };
            emit(&cli.output, &rendered)
        }
        Cmd::Run { path, set } => {
            let cfg = read_scenario(path)?;
            let overrides = parse_overrides(set)?;
            let built = build_scenario(&cfg, &overrides)?;
            let report = evaluate_scenario(&built.scenario)?;
            let rendered = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => render_json(&report)?,
                Format::Csv => report_csv(&report),
            };
            emit(&cli.output, &rendered)
        }
        Cmd::Sweep {
            path,
            parameter,
            from,
            to,
            steps,
            log,
            set,
        } => {
            let cfg = read_scenario(path)?;
            let overrides = parse_overrides(set)?;
            let built = build_scenario(&cfg, &overrides)?;
            let req = merge_sweep_request(
                built.sweep,
                parameter.as_deref(),
                from.as_deref(),
                to.as_deref(),
                *steps,
                *log,
            )?;
            let table = run_sweep(&cfg, &overrides, &req)?;
            let rendered = match cli.format {
                Format::Text => table.to_text(),
                Format::Json => table.to_json(),
                Format::Csv => table.to_csv(),
            };
            emit(&cli.output, &rendered)
        }
        Cmd::ExportJsa { path, set } => {
            let cfg = read_scenario(path)?;
            let overrides = parse_overrides(set)?;
            let built = build_scenario(&cfg, &overrides)?;
            let LightSource::Pairs(psi) = &built.scenario.light else {
                return Err(Error::Validation(vec![
                    "export-jsa needs a pair-source scenario (light.kind = \"pairs\")"
                        .into(),
                ]));
            };
            let mut buffer = Vec::new();
            export_jsa(psi, cli.grid_size, &mut buffer)?;
            let text = String::from_utf8(buffer)
                .map_err(|e| Error::Format(format!("matrix text: {e}")))?;
            emit(&cli.output, &text)
        }
    }
}

/// Combines the file's `[sweep]` section with command-line flags (flags
/// win). The range strings parse with the swept key's own units.
fn merge_sweep_request(
    file: Option<SweepRequest>,
    parameter: Option<&str>,
    from: Option<&str>,
    to: Option<&str>,
    steps: Option<usize>,
    log_flag: bool,
) -> Result<SweepRequest> {
    let mut problems = Vec::new();
    let parameter = match (parameter, &file) {
        (Some(p), _) => {
            let known = etpa_cli::scenario::SETTABLE_KEYS.contains(&p);
            if !known {
                problems.push(format!(
                    "--parameter {p:?} is not sweepable; valid parameters: {}",
                    etpa_cli::scenario::SETTABLE_KEYS.join(", ")
                ));
            }
            Some(p.to_string())
        }
        (None, Some(req)) => Some(req.parameter.clone()),
        (None, None) => {
            problems.push(
                "no sweep requested: give --parameter/--from/--to/--steps or a \
                 [sweep] section in the scenario file"
                    .into(),
            );
            None
        }
    };
    let kind = parameter.as_deref().and_then(path_kind);
    let parse_end = |name: &str, raw: Option<&str>, fallback: Option<f64>,
                     problems: &mut Vec<String>| {
        match (raw, kind) {
            (Some(s), Some(k)) => match parse_quantity(k, s) {
                Ok(v) => Some(v),
                Err(msg) => {
                    problems.push(format!("--{name}: {msg}"));
                    None
                }
            },
            (Some(_), None) => None,
            (None, _) => {
                if fallback.is_none() {
                    problems.push(format!("--{name}: missing sweep endpoint"));
                }
                fallback
            }
        }
    };
    let from = parse_end("from", from, file.as_ref().map(|r| r.from), &mut problems);
    let to = parse_end("to", to, file.as_ref().map(|r| r.to), &mut problems);
    let steps = match (steps, &file) {
        (Some(n), _) => Some(n),
        (None, Some(req)) => Some(req.steps),
        (None, None) => {
            problems.push("--steps: missing step count".into());
            None
        }
    };
    if let Some(n) = steps {
        if n < 2 {
            problems.push(format!("--steps: need at least 2, got {n}"));
        }
    }
    let log = log_flag || file.as_ref().map(|r| r.log).unwrap_or(false);
    match (parameter, from, to, steps) {
        (Some(parameter), Some(from), Some(to), Some(steps)) if problems.is_empty() => {
            Ok(SweepRequest {
                parameter,
                from,
                to,
                steps,
                log,
            })
        }
        _ => Err(Error::Validation(problems)),
    }
}

fn report_failure(format: Format, err: &Error) {
    let problems: Vec<String> = match err {
        Error::Validation(list) => list.clone(),
        other => vec![other.to_string()],
    };
    if format == Format::Json {
        let payload = serde_json::json!({
            "schema": "etpa-error/1",
            "problems": problems,
        });
        eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        for p in &problems {
            eprintln!("error: {p}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report_failure(cli.format, &err);
            ExitCode::FAILURE
        }
    }
}
