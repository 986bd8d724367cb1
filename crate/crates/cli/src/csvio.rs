//! Series files: CSV with a `timestamp,dim_1,...,dim_D` header, one point
//! per row, `.` decimal separator, rows in strictly increasing timestamp
//! order. Values are emitted with 12 significant digits so golden files stay
//! stable across platforms.

use std::fs;
use std::path::Path;

use speedclean::{DataPoint, TimeSeries};

use crate::error::CliError;

/// Read and parse a series file. Errors name the offending line.
pub fn read_series(path: &Path) -> Result<TimeSeries, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_series(&text, path)
}

/// Parse series text; `path` is used only for diagnostics.
pub fn parse_series(text: &str, path: &Path) -> Result<TimeSeries, CliError> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(CliError::parse(
            path,
            1,
            "empty file, expected a header row",
        ));
    };
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 2 || columns[0].trim() != "timestamp" {
        return Err(CliError::parse(
            path,
            1,
            format!("expected header `timestamp,dim_1,...`, found `{header}`"),
        ));
    }
    let dims = columns.len() - 1;

    let mut points = Vec::new();
    for (index, line) in lines {
        let row = index + 1; // 1-based line number
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != dims + 1 {
            return Err(CliError::parse(
                path,
                row,
                format!("expected {} columns, found {}", dims + 1, cells.len()),
            ));
        }
        let mut numbers = Vec::with_capacity(dims + 1);
        for (col, cell) in cells.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| {
                CliError::parse(
                    path,
                    row,
                    format!("column {}: `{}` is not a number", col + 1, cell.trim()),
                )
            })?;
            numbers.push(value);
        }
        let timestamp = numbers[0];
        points.push(DataPoint::new(timestamp, numbers[1..].to_vec()));
    }

    if points.is_empty() {
        return Ok(TimeSeries::empty_with_dimension(dims));
    }
    TimeSeries::new(points).map_err(|e| match e {
        speedclean::Error::InvalidSeries(issue) => {
            // Data row r is file line r + 2 (header is line 1).
            CliError::parse(path, issue.index + 2, issue.to_string())
        }
        other => CliError::Internal(other.to_string()),
    })
}

/// Serialise a series in the file format.
pub fn series_to_csv(ts: &TimeSeries) -> String {
    let dims = ts.dimension();
    let mut out = String::from("timestamp");
    for d in 1..=dims {
        out.push_str(&format!(",dim_{d}"));
    }
    out.push('\n');
    for point in ts.iter() {
        out.push_str(&format_value(point.timestamp));
        for v in &point.values {
            out.push(',');
            out.push_str(&format_value(*v));
        }
        out.push('\n');
    }
    out
}

pub fn write_series(path: &Path, ts: &TimeSeries) -> Result<(), CliError> {
    fs::write(path, series_to_csv(ts))?;
    Ok(())
}

/// Format with 12 significant digits, trailing zeros trimmed. Falls back to
/// scientific notation outside a sane plain-decimal range.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    if !(-5..=14).contains(&magnitude) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let fixed = format!("{v:.decimals$}");
    let trimmed = fixed.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}
