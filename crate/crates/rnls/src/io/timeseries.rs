//! Observable time series as CSV.
//!
//! Header contract (exact):
//! `t,mass,energy_omega,energy_zero,energy_magnetic,ang_mom,variance,variance_rate,grad_norm_sq,virial_rhs,lmom_source,tail`
//! followed by one row per record. Values carry 17 significant digits, which
//! round-trips 64-bit floats exactly; every line is newline-terminated.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::observables::ObservableRecord;

pub const CSV_HEADER: &str = "t,mass,energy_omega,energy_zero,energy_magnetic,ang_mom,variance,variance_rate,grad_norm_sq,virial_rhs,lmom_source,tail";

#[derive(Debug, Error)]
pub enum TimeseriesError {
    #[error("refusing to write an empty record series")]
    EmptyRecords,
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Render records to the CSV contract as a byte-stable string.
pub fn timeseries_to_csv(records: &[ObservableRecord]) -> Result<String, TimeseriesError> {
    if records.is_empty() {
        return Err(TimeseriesError::EmptyRecords);
    }
    let mut out = String::with_capacity(records.len() * 16 * 24);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let row = r.as_row();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            // 17 significant digits
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_timeseries_csv(
    path: &Path,
    records: &[ObservableRecord],
) -> Result<(), TimeseriesError> {
    let text = timeseries_to_csv(records)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Parse a file written by [`write_timeseries_csv`]; values round-trip
/// bit-exactly.
pub fn read_timeseries_csv(path: &Path) -> Result<Vec<ObservableRecord>, TimeseriesError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(TimeseriesError::Malformed {
                line: 1,
                msg: format!("unexpected header {header:?}"),
            })
        }
        None => {
            return Err(TimeseriesError::Malformed {
                line: 1,
                msg: "empty file".into(),
            })
        }
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 12 {
            return Err(TimeseriesError::Malformed {
                line: i + 1,
                msg: format!("expected 12 columns, got {}", parts.len()),
            });
        }
        let mut row = [0.0f64; 12];
        for (j, p) in parts.iter().enumerate() {
            row[j] = p.parse::<f64>().map_err(|_| TimeseriesError::Malformed {
                line: i + 1,
                msg: format!("not a number: {p:?}"),
            })?;
        }
        records.push(ObservableRecord::from_row(row));
    }
    Ok(records)
}
