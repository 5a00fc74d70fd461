//! Ingestion and serialization of binned trace CSV files.
//!
//! Input files are UTF-8, comma-separated, LF or CRLF, with two numeric
//! columns per row in FRET mode (`donor,acceptor`) or four in ALEX mode
//! (`d_d,d_a,a_d,a_a`). A single leading header row is auto-detected (any
//! non-numeric cell) and skipped; blank lines are ignored. Files carry no
//! bin-width metadata, so parsed traces default to 1 ms bins.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{AlexTrace, FretTrace};

use super::config::Mode;

/// A parsed trace of either flavour.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceData {
    Fret(FretTrace),
    Alex(AlexTrace),
}

impl TraceData {
    pub fn len(&self) -> usize {
        match self {
            TraceData::Fret(t) => t.len(),
            TraceData::Alex(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Result of [`parse_csv`]: the concatenated trace plus non-fatal lint
/// warnings (currently only non-integer raw counts, one note per file).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub trace: TraceData,
    pub warnings: Vec<String>,
}

fn resolve(directory: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        directory.join(p)
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path.to_path_buf())
        } else {
            Error::ReadFailed {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

/// Reads and concatenates binned CSV files, in list order, into one trace.
///
/// `files` entries are resolved relative to `directory` unless absolute.
/// Rows whose column count matches the *other* mode raise
/// [`Error::MixedMode`]; any other shape or content problem raises
/// [`Error::MalformedRow`] with file and line number.
pub fn parse_csv(directory: &Path, files: &[String], mode: Mode) -> Result<ParsedCsv> {
    let expected = match mode {
        Mode::Fret => 2,
        Mode::Alex => 4,
    };
    let other = match mode {
        Mode::Fret => 4,
        Mode::Alex => 2,
    };

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); expected];
    let mut warnings = Vec::new();

    for file in files {
        let path = resolve(directory, file);
        let text = read_file(&path)?;
        let mut saw_data_row = false;
        let mut integer_warning_issued = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            let cells: Vec<&str> = row.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, &str> = cells
                .iter()
                .map(|c| c.parse::<f64>().map_err(|_| *c))
                .collect();
            let values = match parsed {
                Ok(v) => v,
                Err(cell) if !saw_data_row => {
                    // leading header row
                    saw_data_row = true;
                    let _ = cell;
                    continue;
                }
                Err(cell) => {
                    return Err(Error::MalformedRow {
                        file: path,
                        line,
                        reason: format!("non-numeric cell `{cell}`"),
                    });
                }
            };
            saw_data_row = true;

            if values.len() == other {
                return Err(Error::MixedMode {
                    file: path,
                    line,
                    found: values.len(),
                    expected,
                    mode: mode.as_str(),
                });
            }
            if values.len() != expected {
                return Err(Error::MalformedRow {
                    file: path,
                    line,
                    reason: format!("{} columns, expected {expected}", values.len()),
                });
            }
            for &v in &values {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::MalformedRow {
                        file: path,
                        line,
                        reason: format!("negative or non-finite photon count {v}"),
                    });
                }
                if v.fract() != 0.0 && !integer_warning_issued {
                    integer_warning_issued = true;
                    warnings.push(format!(
                        "{}:{line}: non-integer count {v}; raw photon data is expected to be integral",
                        path.display()
                    ));
                }
            }
            for (col, v) in columns.iter_mut().zip(values) {
                col.push(v);
            }
        }
    }

    let trace = match mode {
        Mode::Fret => {
            let mut it = columns.into_iter();
            TraceData::Fret(FretTrace::new(it.next().unwrap(), it.next().unwrap(), 1.0)?)
        }
        Mode::Alex => {
            let mut it = columns.into_iter();
            TraceData::Alex(AlexTrace::new(
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
                1.0,
            )?)
        }
    };
    Ok(ParsedCsv { trace, warnings })
}

/// Parses a two-column `r,E` CSV (same conventions as [`parse_csv`]) into
/// point pairs for Förster-curve fitting.
pub fn parse_points_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read_file(path)?;
    let mut points = Vec::new();
    let mut saw_data_row = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, &str> = cells
            .iter()
            .map(|c| c.parse::<f64>().map_err(|_| *c))
            .collect();
        match parsed {
            Ok(v) if v.len() == 2 => {
                saw_data_row = true;
                points.push((v[0], v[1]));
            }
            Ok(v) => {
                return Err(Error::MalformedRow {
                    file: path.to_path_buf(),
                    line,
                    reason: format!("{} columns, expected 2", v.len()),
                });
            }
            Err(_) if !saw_data_row => {
                saw_data_row = true; // header
            }
            Err(cell) => {
                return Err(Error::MalformedRow {
                    file: path.to_path_buf(),
                    line,
                    reason: format!("non-numeric cell `{cell}`"),
                });
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(points)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::WriteFailed {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a two-channel trace in the input CSV format (no header).
/// Integral counts serialize as integers, so integer data round-trips
/// byte-exactly through [`parse_csv`].
pub fn write_fret_trace_csv(trace: &FretTrace, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (d, a) in trace.donor().iter().zip(trace.acceptor()) {
        writeln!(out, "{d},{a}").expect("string write cannot fail");
    }
    write_file(path, &out)
}

/// Writes a four-channel trace in the input CSV format (no header).
pub fn write_alex_trace_csv(trace: &AlexTrace, path: &Path) -> Result<()> {
    let mut out = String::new();
    for i in 0..trace.len() {
        writeln!(
            out,
            "{},{},{},{}",
            trace.d_d()[i],
            trace.d_a()[i],
            trace.a_d()[i],
            trace.a_a()[i]
        )
        .expect("string write cannot fail");
    }
    write_file(path, &out)
}
