//! Evaluation report rendering: flat key/value text and a CSV row.

use std::fmt::Write as _;

use crate::csvio::format_value;

/// One evaluation of a repair against ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub algorithm: String,
    pub n: usize,
    pub dimension: usize,
    pub error_rate: f64,
    pub pattern: String,
    pub seed: u64,
    pub rmse_dirty: f64,
    pub rmse_repaired: f64,
    pub repair_distance: f64,
    /// Fraction of points changed.
    pub repair_number: f64,
    pub repair_count: usize,
    pub elapsed_ms: f64,
}

pub const CSV_HEADER: &str = "algorithm,n,D,error_rate,pattern,seed,rmse_dirty,rmse_repaired,repair_distance,repair_number,elapsed_ms";

impl EvalReport {
    /// Flat key/value block, one metric per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rmse_dirty: {}", format_value(self.rmse_dirty));
        let _ = writeln!(out, "rmse_repaired: {}", format_value(self.rmse_repaired));
        let _ = writeln!(
            out,
            "repair_distance: {}",
            format_value(self.repair_distance)
        );
        let _ = writeln!(out, "repair_number: {}", format_value(self.repair_number));
        let _ = writeln!(out, "repair_count: {}", self.repair_count);
        out
    }

    /// Row matching [`CSV_HEADER`].
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.n,
            self.dimension,
            format_value(self.error_rate),
            self.pattern,
            self.seed,
            format_value(self.rmse_dirty),
            format_value(self.rmse_repaired),
            format_value(self.repair_distance),
            format_value(self.repair_number),
            format_value(self.elapsed_ms),
        )
    }
}
