//! Parameter sweeps: re-evaluate a scenario across a range of one settable
//! key and emit the report scalars as a deterministic table.

use serde::Serialize;

use etpa_core::rates::evaluate_scenario;
use etpa_core::{Error, Result};

use crate::scenario::{build_scenario, OverrideValue, ScenarioConfig, SweepRequest};

/// Sweep result: one row per parameter value, columns in the stable report
/// order. Rows are ordered by sweep position regardless of how they were
/// computed.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub schema: &'static str,
    pub parameter: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// The parameter values a request expands to: endpoint-inclusive, linear or
/// logarithmic spacing, exact endpoints.
pub fn sweep_points(req: &SweepRequest) -> Vec<f64> {
    let n = req.steps;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let v = if req.log {
            (req.from.ln() + t * (req.to.ln() - req.from.ln())).exp()
        } else {
            req.from + t * (req.to - req.from)
        };
        out.push(v);
    }
    out[0] = req.from;
    out[n - 1] = req.to;
    out
}

/// Runs the sweep: every point gets the base overrides plus the swept key.
pub fn run_sweep(
    cfg: &ScenarioConfig,
    overrides: &[(String, OverrideValue)],
    req: &SweepRequest,
) -> Result<SweepTable> {
    if req.steps < 2 {
        return Err(Error::Validation(vec![format!(
            "sweep needs at least 2 steps, got {}",
            req.steps
        )]));
    }
    let mut columns: Vec<&'static str> = Vec::new();
    let mut rows = Vec::with_capacity(req.steps);
    for value in sweep_points(req) {
        let mut step_overrides = overrides.to_vec();
        step_overrides.push((req.parameter.clone(), OverrideValue::Si(value)));
        let built = build_scenario(cfg, &step_overrides).map_err(|e| match e {
            Error::Validation(problems) => Error::Validation(
                problems
                    .into_iter()
                    .map(|p| format!("at {} = {value:e}: {p}", req.parameter))
                    .collect(),
            ),
            other => other,
        })?;
        let report = evaluate_scenario(&built.scenario)?;
        let scalars = report.scalars();
        if columns.is_empty() {
            columns = scalars.iter().map(|(name, _)| *name).collect();
        } else if columns.len() != scalars.len() {
            return Err(Error::Format(
                "sweep produced rows with differing columns".into(),
            ));
        }
        let mut row = Vec::with_capacity(1 + scalars.len());
        row.push(value);
        row.extend(scalars.iter().map(|(_, v)| *v));
        rows.push(row);
    }
    Ok(SweepTable {
        schema: "etpa-sweep/1",
        parameter: req.parameter.clone(),
        columns,
        rows,
    })
}

impl SweepTable {
    /// CSV with a header row; floats in shortest round-trip scientific form,
    /// so parsing a cell back yields the identical bit pattern.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.parameter);
        for c in &self.columns {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    s.push(',');
                }
                first = false;
                s.push_str(&format!("{v:e}"));
            }
            s.push('\n');
        }
        s
    }

    /// Pretty JSON with explicit column order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep table serializes")
    }

    /// Aligned text table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{:<24}", self.parameter));
        for c in &self.columns {
            s.push_str(&format!(" {c:>22}"));
        }
        s.push('\n');
        for row in &self.rows {
            let mut cells = row.iter();
            if let Some(v) = cells.next() {
                s.push_str(&format!("{v:<24.6e}"));
            }
            for v in cells {
                s.push_str(&format!(" {v:>22.6e}"));
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{parse_scenario, tests::PAIR_SCENARIO, SweepRequest};

    fn pair_cfg() -> ScenarioConfig {
        parse_scenario(PAIR_SCENARIO).unwrap()
    }

    #[test]
    fn two_step_sweep_yields_exactly_two_rows() {
        let req = SweepRequest {
            parameter: "detection.eta".into(),
            from: 0.01,
            to: 0.02,
            steps: 2,
            log: false,
        };
        let table = run_sweep(&pair_cfg(), &[], &req).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0][0], 0.01);
        assert_eq!(table.rows[1][0], 0.02);
        // η enters the detected counts linearly and nothing else.
        let counts = table.columns.iter().position(|c| *c == "detected_counts").unwrap();
        assert!(
            (table.rows[1][1 + counts] - 2.0 * table.rows[0][1 + counts]).abs()
                / table.rows[1][1 + counts]
                < 1e-12
        );
    }

    #[test]
    fn pair_flux_sweep_has_inverse_flux_enhancement() {
        let req = SweepRequest {
            parameter: "light.pair_flux".into(),
            from: 1e9,
            to: 1e13,
            steps: 9,
            log: true,
        };
        // A short window keeps the per-window pair number F·T/2 below the
        // single-pair cap across the whole four-decade flux range.
        let window = ("detection.window".to_string(), OverrideValue::Si(5e-14));
        let table = run_sweep(&pair_cfg(), &[window], &req).unwrap();
        assert_eq!(table.rows.len(), 9);
        let flux = table.columns.iter().position(|c| *c == "photon_flux").unwrap();
        let qef = table.columns.iter().position(|c| *c == "qef_equal_flux").unwrap();
        let product0 = table.rows[0][1 + flux] * table.rows[0][1 + qef];
        for row in &table.rows {
            let product = row[1 + flux] * row[1 + qef];
            assert!((product - product0).abs() / product0 < 1e-9);
        }
    }

    #[test]
    fn dispersion_sweep_matches_the_closed_form_attenuation() {
        let sigma_b = 1.12539540e12 * std::f64::consts::TAU;
        let req = SweepRequest {
            parameter: "light.gdd".into(),
            from: 0.0,
            to: 1e-25, // 10⁵ fs²
            steps: 6,
            log: false,
        };
        let table = run_sweep(&pair_cfg(), &[], &req).unwrap();
        let att = table
            .columns
            .iter()
            .position(|c| *c == "dispersion_attenuation")
            .unwrap();
        for row in &table.rows {
            let d = row[0];
            let expect = 1.0 / (1.0 + 16.0 * d * d * sigma_b.powi(4)).sqrt();
            assert!((row[1 + att] - expect).abs() <= 1e-6 * expect);
        }
    }

    #[test]
    fn csv_cells_round_trip_and_derived_columns_recompute_bit_identically() {
        let req = SweepRequest {
            parameter: "light.pair_flux".into(),
            from: 1e9,
            to: 1e12,
            steps: 4,
            log: true,
        };
        let window = ("detection.window".to_string(), OverrideValue::Si(5e-14));
        let table = run_sweep(&pair_cfg(), &[window.clone()], &req).unwrap();
        let csv = table.to_csv();
        let again = run_sweep(&pair_cfg(), &[window], &req).unwrap().to_csv();
        assert_eq!(csv, again, "sweep output must be deterministic");

        let mut lines = csv.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
        let (f_col, b_col, chi_col, qef_col) = (
            col("photon_flux"),
            col("correlation_bandwidth"),
            col("pump_duration_factor"),
            col("qef_equal_flux"),
        );
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            let parse = |i: usize| cells[i].parse::<f64>().unwrap();
            let flux = etpa_core::units::PhotonFlux::from_si(parse(f_col));
            let qef = etpa_core::enhancement::qef_equal_flux(
                parse(b_col),
                parse(chi_col),
                flux,
            )
            .unwrap()
            .value;
            assert_eq!(
                format!("{qef:e}"),
                cells[qef_col],
                "derived column must recompute bit-identically from parsed CSV"
            );
        }
    }

    #[test]
    fn log_points_hit_exact_endpoints() {
        let req = SweepRequest {
            parameter: "light.pair_flux".into(),
            from: 3e9,
            to: 7e12,
            steps: 11,
            log: true,
        };
        let pts = sweep_points(&req);
        assert_eq!(pts[0], 3e9);
        assert_eq!(pts[10], 7e12);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }
}
