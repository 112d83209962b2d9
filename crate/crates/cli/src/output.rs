//! CSV and JSON emission, CSV re-parsing, and gnuplot scripts.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use psbar_core::states::PsLevel;

use crate::config::{Format, Mode};
use crate::run::{Record, Status};

pub const CSV_HEADER: [&str; 7] = ["state", "E_i_eV", "mu_au", "theta_deg", "value_au", "std_err_au", "status"];

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("no records to write")]
    Empty,
    #[error("{path}: {error}")]
    Io { path: PathBuf, error: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn fields(r: &Record) -> [String; 7] {
    [
        r.state_label(),
        num(r.e_i_ev),
        num(r.mu),
        opt(r.theta_deg),
        opt(r.value),
        opt(r.std_err),
        r.status.as_str().to_string(),
    ]
}

pub fn write_csv<W: Write>(records: &[Record], w: W) -> Result<(), EmitError> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for r in records {
        wtr.write_record(fields(r))?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Array of objects keyed like the CSV header; absent values are `null`.
pub fn write_json<W: Write>(records: &[Record], mut w: W) -> io::Result<()> {
    let mut s = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        let f = fields(r);
        s.push_str("  {");
        for (j, (key, val)) in CSV_HEADER.iter().zip(&f).enumerate() {
            let sep = if j == 0 { "" } else { ", " };
            let v = match j {
                0 | 6 => format!("\"{val}\""),
                _ if val.is_empty() => "null".to_string(),
                _ => val.clone(),
            };
            let _ = write!(s, "{sep}\"{key}\": {v}");
        }
        s.push_str(if i + 1 == records.len() { "}\n" } else { "},\n" });
    }
    s.push_str("]\n");
    w.write_all(s.as_bytes())
}

/// Writes the records to `path`, or stdout when `path` is `None`. Nothing
/// is created for an empty record list.
pub fn emit(records: &[Record], format: Format, path: Option<&Path>) -> Result<(), EmitError> {
    if records.is_empty() {
        return Err(EmitError::Empty);
    }
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(records, &mut buf)?,
        Format::Json => write_json(records, &mut buf).map_err(|error| EmitError::Io { path: "<memory>".into(), error })?,
    }
    match path {
        Some(p) => fs::write(p, &buf).map_err(|error| EmitError::Io { path: p.to_path_buf(), error }),
        None => io::stdout()
            .write_all(&buf)
            .map_err(|error| EmitError::Io { path: "<stdout>".into(), error }),
    }
}

/// Reads records back from CSV produced by [`write_csv`].
pub fn parse_csv<R: Read>(r: R) -> Result<Vec<Record>, EmitError> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(EmitError::Parse { line: 1, message: format!("unexpected header {header:?}") });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| EmitError::Parse { line, message };
        let float = |s: &str| -> Result<Option<f64>, EmitError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(format!("'{s}' is not a number")))
            }
        };
        let (level, m) = match row[0].split_once(":m=") {
            Some((l, m)) => (l, Some(m.parse::<i32>().map_err(|_| bad(format!("bad substate in '{}'", &row[0])))?)),
            None => (&row[0], None),
        };
        let state: PsLevel = level.parse().map_err(|e: psbar_core::Error| bad(e.to_string()))?;
        let required = |s: &str| float(s)?.ok_or_else(|| bad("missing number".into()));
        out.push(Record {
            state,
            m,
            e_i_ev: required(&row[1])?,
            mu: required(&row[2])?,
            theta_deg: float(&row[3])?,
            value: float(&row[4])?,
            std_err: float(&row[5])?,
            status: Status::parse(&row[6]).ok_or_else(|| bad(format!("unknown status '{}'", &row[6])))?,
        });
    }
    Ok(out)
}

/// A gnuplot script drawing every (state, μ) series of the CSV at
/// `csv_path` with error bars: against θ for SDCS, against E_i for TCS.
pub fn gnuplot_script(records: &[Record], csv_path: &Path, mode: Mode) -> String {
    let mut series: Vec<(String, f64)> = Vec::new();
    for r in records {
        let key = (r.state_label(), r.mu);
        if !series.contains(&key) {
            series.push(key);
        }
    }
    let (x_col, x_label, title) = match mode {
        Mode::Sdcs => (4, "ejection angle (deg)", "single differential cross section"),
        Mode::Tcs => (2, "incident Ps energy (eV)", "total cross section"),
    };
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel '{x_label}'");
    let _ = writeln!(s, "set ylabel 'a.u.'");
    if mode == Mode::Tcs {
        let _ = writeln!(s, "set logscale y");
    }
    let file = csv_path.display().to_string().replace('\'', "''");
    let plots: Vec<String> = series
        .iter()
        .map(|(state, mu)| {
            let pick = format!("strcol(1) eq '{state}' && abs($3 - {mu:e}) < 1e-12 && strcol(7) ne 'below_threshold'");
            format!(
                "'{file}' skip 1 using {x_col}:({pick} ? $5 : 1/0):6 with yerrorlines title '{state}, mu = {mu}'"
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(value: Option<f64>, theta: Option<f64>, status: Status) -> Record {
        Record {
            state: PsLevel::P2,
            m: None,
            e_i_ev: 12.5,
            mu: 0.05,
            theta_deg: theta,
            value,
            std_err: value.map(|v| v * 0.01),
            status,
        }
    }

    #[test]
    fn csv_layout() {
        let rows = [
            rec(Some(1.2345678901234567e-5), Some(30.0), Status::Ok),
            rec(None, Some(40.0), Status::BelowThreshold),
            Record { m: Some(-1), ..rec(Some(3.0), None, Status::LowAccuracy) },
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "state,E_i_eV,mu_au,theta_deg,value_au,std_err_au,status");
        assert_eq!(lines[1], "2p,1.25e1,5e-2,3e1,1.2345678901234568e-5,1.2345678901234568e-7,ok");
        assert_eq!(lines[2], "2p,1.25e1,5e-2,4e1,,,below_threshold");
        assert_eq!(lines[3], "2p:m=-1,1.25e1,5e-2,,3e0,3e-2,low_accuracy");
        assert_eq!(parse_csv(text.as_bytes()).unwrap(), rows);
    }

    #[test]
    fn empty_is_refused() {
        let dir = std::env::temp_dir().join("psbar-empty-emit-test.csv");
        let _ = fs::remove_file(&dir);
        assert!(matches!(emit(&[], Format::Csv, Some(&dir)), Err(EmitError::Empty)));
        assert!(!dir.exists());
    }

    #[test]
    fn gnuplot_names_each_series() {
        let rows = [rec(Some(1.0), Some(0.0), Status::Ok), Record { mu: 0.1, ..rec(Some(1.0), Some(0.0), Status::Ok) }];
        let s = gnuplot_script(&rows, Path::new("out.csv"), Mode::Sdcs);
        assert!(s.contains("set datafile separator ','"));
        assert_eq!(s.matches("'out.csv'").count(), 2);
        assert!(s.contains("mu = 0.1"));
    }
}
