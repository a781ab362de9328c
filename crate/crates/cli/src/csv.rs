//! Trajectory CSV files.
//!
//! Numbers use the shortest decimal text that parses back to the same `f64`,
//! written in plain or exponent form, whichever is shorter. Missing values
//! are written as `nan`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use spinlab_core::{Observables, Trajectory};

use crate::error::{CliError, Result};

pub const HEADER: &str = "t,i1x,i1y,i1z,i2x,i2y,i2z,norm,concurrence";

pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    let plain = format!("{v}");
    let sci = format!("{v:e}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

pub fn format_row(t: f64, o: &Observables) -> String {
    let fields = [t, o.i1x, o.i1y, o.i1z, o.i2x, o.i2y, o.i2z, o.norm, o.concurrence.unwrap_or(f64::NAN)];
    fields.iter().map(|&v| format_number(v)).collect::<Vec<_>>().join(",")
}

pub fn format_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for (t, o) in traj.iter() {
        let _ = writeln!(out, "{}", format_row(t, o));
    }
    out
}

pub fn emit_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    write_text(path, &format_csv(traj))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Samples read back from a trajectory file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTrajectory {
    pub times: Vec<f64>,
    pub samples: Vec<Observables>,
}

pub fn parse_csv(text: &str) -> Result<CsvTrajectory> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(CliError::Parse { line: 1, message: format!("expected header `{HEADER}`") }),
    }
    let mut out = CsvTrajectory { times: Vec::new(), samples: Vec::new() };
    for (idx, line) in lines {
        let bad = |message: String| CliError::Parse { line: idx + 1, message };
        let values = line
            .split(',')
            .map(|f| f.parse::<f64>().map_err(|_| bad(format!("not a number: `{f}`"))))
            .collect::<Result<Vec<f64>>>()?;
        let [t, i1x, i1y, i1z, i2x, i2y, i2z, norm, c] = values[..] else {
            return Err(bad(format!("expected 9 fields, found {}", values.len())));
        };
        out.times.push(t);
        let concurrence = (!c.is_nan()).then_some(c);
        out.samples.push(Observables { i1x, i1y, i1z, i2x, i2y, i2z, norm, concurrence });
    }
    Ok(out)
}

pub fn read_csv(path: &Path) -> Result<CsvTrajectory> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_form_wins() {
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-2.0), "-2");
        assert_eq!(format_number(1e-12), "1e-12");
        assert_eq!(format_number(1.5e20), "1.5e20");
        assert_eq!(format_number(123.25), "123.25");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.718281828459045e-7, 6.02214076e23, f64::MIN_POSITIVE, 5e-324] {
            assert_eq!(format_number(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn rejects_foreign_files() {
        assert!(parse_csv("a,b\n").is_err());
        assert!(parse_csv(&format!("{HEADER}\n1,2\n")).is_err());
        assert!(parse_csv(&format!("{HEADER}\n1,2,3,4,5,6,7,8,x\n")).is_err());
    }
}
