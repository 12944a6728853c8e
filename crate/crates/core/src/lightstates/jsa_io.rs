//! Plain-text interchange format for sampled joint spectral amplitudes.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! format: etpa-jsa/1
//! carrier_rad_s: 1.77e15
//! epsilon_sq: 0.01
//! omega_axis: 1.62e15 5.9e11 512        # start step count
//! omega_tilde_axis: 1.62e15 5.9e11 512
//! data:
//! re im re im ...                        # one ω row per line, ω̃ varying
//! ```
//!
//! Floats are written in shortest round-trip form, so export → import is
//! bit-exact and re-validation of the norm on import cannot drift.

use std::io::{BufRead, Write};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::SpectralGrid2D;

use super::JointSpectralAmplitude;

const FORMAT_TAG: &str = "etpa-jsa/1";

/// Writes `jsa` as an `n × n` sampled grid (grid-backed states write their
/// stored samples regardless of `n`).
pub fn export_jsa(jsa: &JointSpectralAmplitude, n: usize, out: &mut dyn Write) -> Result<()> {
    let grid = jsa.to_grid(n)?;
    let (rows, cols) = grid.shape();
    let io_err = |e: std::io::Error| Error::Format(format!("write failed: {e}"));
    writeln!(out, "# joint spectral amplitude, complex samples").map_err(io_err)?;
    writeln!(out, "format: {FORMAT_TAG}").map_err(io_err)?;
    writeln!(out, "carrier_rad_s: {}", jsa.carrier()).map_err(io_err)?;
    writeln!(out, "epsilon_sq: {}", jsa.epsilon_sq()).map_err(io_err)?;
    writeln!(
        out,
        "omega_axis: {} {} {rows}",
        grid.start()[0],
        grid.step()[0]
    )
    .map_err(io_err)?;
    writeln!(
        out,
        "omega_tilde_axis: {} {} {cols}",
        grid.start()[1],
        grid.step()[1]
    )
    .map_err(io_err)?;
    writeln!(out, "data:").map_err(io_err)?;
    let mut line = String::new();
    for i in 0..rows {
        line.clear();
        for j in 0..cols {
            let v = grid.values()[[i, j]];
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{} {}", v.re, v.im));
        }
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}

struct Header {
    carrier: Option<f64>,
    epsilon_sq: Option<f64>,
    omega_axis: Option<(f64, f64, usize)>,
    omega_tilde_axis: Option<(f64, f64, usize)>,
}

fn parse_axis(line_no: usize, key: &str, rest: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Format(format!(
            "line {line_no}: {key} needs `start step count`, got {} fields",
            parts.len()
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Format(format!("line {line_no}: bad {key} start `{}`", parts[0])))?;
    let step: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Format(format!("line {line_no}: bad {key} step `{}`", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::Format(format!("line {line_no}: bad {key} count `{}`", parts[2])))?;
    Ok((start, step, count))
}

/// Reads a joint spectral amplitude previously written by [`export_jsa`]
/// (or produced by any tool following the same format). Errors carry the
/// 1-based line number of the offending input.
pub fn import_jsa(input: &mut dyn BufRead) -> Result<JointSpectralAmplitude> {
    let mut header = Header {
        carrier: None,
        epsilon_sq: None,
        omega_axis: None,
        omega_tilde_axis: None,
    };
    let mut lines = input.lines().enumerate();
    let mut saw_format = false;
    let data_line;
    loop {
        let Some((idx, line)) = lines.next() else {
            return Err(Error::Format(
                "input ended before the `data:` section".into(),
            ));
        };
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Format(format!("line {line_no}: read failed: {e}")))?;
        let trimmed = strip_comment(&line);
        if trimmed.is_empty() {
            continue;
        }
        let Some((key, rest)) = trimmed.split_once(':') else {
            return Err(Error::Format(format!(
                "line {line_no}: expected `key: value`, got `{trimmed}`"
            )));
        };
        let (key, rest) = (key.trim(), rest.trim());
        match key {
            "format" => {
                if rest != FORMAT_TAG {
                    return Err(Error::Format(format!(
                        "line {line_no}: unsupported format `{rest}` (this reader understands {FORMAT_TAG})"
                    )));
                }
                saw_format = true;
            }
            "carrier_rad_s" => {
                header.carrier = Some(rest.parse().map_err(|_| {
                    Error::Format(format!("line {line_no}: bad carrier `{rest}`"))
                })?);
            }
            "epsilon_sq" => {
                header.epsilon_sq = Some(rest.parse().map_err(|_| {
                    Error::Format(format!("line {line_no}: bad epsilon_sq `{rest}`"))
                })?);
            }
            "omega_axis" => header.omega_axis = Some(parse_axis(line_no, key, rest)?),
            "omega_tilde_axis" => header.omega_tilde_axis = Some(parse_axis(line_no, key, rest)?),
            "data" => {
                if !rest.is_empty() {
                    return Err(Error::Format(format!(
                        "line {line_no}: `data:` takes no value on its line"
                    )));
                }
                data_line = line_no;
                break;
            }
            other => {
                return Err(Error::Format(format!(
                    "line {line_no}: unknown key `{other}`"
                )));
            }
        }
    }
    if !saw_format {
        return Err(Error::Format(format!(
            "missing `format: {FORMAT_TAG}` header"
        )));
    }
    let carrier = header
        .carrier
        .ok_or_else(|| Error::Format("missing `carrier_rad_s:` header".into()))?;
    let epsilon_sq = header
        .epsilon_sq
        .ok_or_else(|| Error::Format("missing `epsilon_sq:` header".into()))?;
    let (start0, step0, rows) = header
        .omega_axis
        .ok_or_else(|| Error::Format("missing `omega_axis:` header".into()))?;
    let (start1, step1, cols) = header
        .omega_tilde_axis
        .ok_or_else(|| Error::Format("missing `omega_tilde_axis:` header".into()))?;

    let mut values = Array2::<Complex64>::zeros((rows, cols));
    let mut row = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Format(format!("line {line_no}: read failed: {e}")))?;
        let trimmed = strip_comment(&line);
        if trimmed.is_empty() {
            continue;
        }
        if row >= rows {
            return Err(Error::Format(format!(
                "line {line_no}: more data rows than the declared {rows}"
            )));
        }
        let mut fields = trimmed.split_whitespace();
        for col in 0..cols {
            let re: f64 = next_number(&mut fields, line_no, row, col, "real")?;
            let im: f64 = next_number(&mut fields, line_no, row, col, "imaginary")?;
            values[[row, col]] = Complex64::new(re, im);
        }
        if let Some(extra) = fields.next() {
            return Err(Error::Format(format!(
                "line {line_no}: trailing field `{extra}` beyond {cols} complex samples"
            )));
        }
        row += 1;
    }
    if row != rows {
        return Err(Error::Format(format!(
            "data section after line {data_line} has {row} rows, header declared {rows}"
        )));
    }
    let grid = SpectralGrid2D::new([start0, start1], [step0, step1], values)?;
    JointSpectralAmplitude::from_grid(carrier, grid, epsilon_sq)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

fn next_number(
    fields: &mut std::str::SplitWhitespace<'_>,
    line_no: usize,
    row: usize,
    col: usize,
    part: &str,
) -> Result<f64> {
    let Some(tok) = fields.next() else {
        return Err(Error::Format(format!(
            "line {line_no}: row {row} ended before the {part} part of sample {col}"
        )));
    };
    tok.parse().map_err(|_| {
        Error::Format(format!(
            "line {line_no}: bad {part} value `{tok}` at sample {col}"
        ))
    })
}
