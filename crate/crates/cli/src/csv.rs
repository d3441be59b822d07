//! CSV output: UTF-8, LF endings, fixed header, empty fields for absent values.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::sweep::CurveRecord;

pub const CSV_HEADER: &str = "r,theta,alpha,F_c,F_nc,C_p,eta,sv_max";

/// Twelve fractional digits in fixed notation for |x| ∈ [1e-4, 1e4) and for
/// zero, scientific notation otherwise. Negative zero prints as zero.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let mag = x.abs();
    if x == 0.0 || (1e-4..1e4).contains(&mag) {
        format!("{x:.12}")
    } else {
        format!("{x:.12e}")
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn to_csv_string(records: &[CurveRecord]) -> String {
    let mut out = String::with_capacity(128 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for rec in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_number(rec.r),
            format_number(rec.theta),
            optional(rec.alpha),
            format_number(rec.f_c),
            format_number(rec.f_nc),
            format_number(rec.c_p),
            format_number(rec.eta),
            optional(rec.sv_max),
        );
    }
    out
}

pub fn emit_csv(records: &[CurveRecord], path: &Path) -> CliResult<()> {
    if records.is_empty() {
        return Err(CliError::NoRecords);
    }
    std::fs::write(path, to_csv_string(records)).map_err(|e| CliError::io(path, e))
}
