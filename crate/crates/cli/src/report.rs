//! Serialization of bound reports as text, CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use williamson::{BoundReport, NormKind};

/// Header of every CSV report.
pub const CSV_HEADER: &str = "epsilon,lhs,rhs,norm,holds,preconditions_met,label";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as clap::ValueEnum>::from_str(s, true)
    }
}

/// A report together with the ε it was evaluated at, if any.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub epsilon: Option<f64>,
    #[serde(flatten)]
    pub report: BoundReport,
}

impl ReportRow {
    pub fn new(epsilon: Option<f64>, report: BoundReport) -> Self {
        Self { epsilon, report }
    }
}

/// Shortest decimal that parses back to the same `f64`, switching to
/// exponent notation for very large or small magnitudes.
pub fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-3..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Norm name as spelled on the command line.
pub fn norm_flag(kind: NormKind) -> &'static str {
    match kind {
        NormKind::Operator => "op",
        NormKind::Frobenius => "fro",
        NormKind::Trace => "trace",
    }
}

/// Seventeen significant digits.
pub fn fmt_fixed17(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_row(row: &ReportRow) -> String {
    let r = &row.report;
    format!(
        "{},{},{},{},{},{},{}",
        row.epsilon.map(fmt_fixed17).unwrap_or_default(),
        fmt_fixed17(r.lhs),
        fmt_fixed17(r.rhs),
        norm_flag(r.norm_kind),
        r.holds,
        r.preconditions_met,
        r.label
    )
}

fn text_row(row: &ReportRow) -> String {
    let r = &row.report;
    let mut line = String::new();
    if let Some(e) = row.epsilon {
        let _ = write!(line, "epsilon={} ", fmt_float(e));
    }
    let _ = write!(
        line,
        "{} [{}] lhs={} rhs={} margin={} holds={} preconditions_met={}",
        r.label,
        norm_flag(r.norm_kind),
        fmt_float(r.lhs),
        fmt_float(r.rhs),
        fmt_float(r.margin),
        r.holds,
        r.preconditions_met
    );
    if !r.binding {
        line.push_str(" (non-binding)");
    }
    line
}

pub fn emit_report(rows: &[ReportRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for row in rows {
                out.push_str(&csv_row(row));
                out.push('\n');
            }
            out
        }
        Format::Text => rows.iter().map(|r| text_row(r) + "\n").collect(),
        Format::Json => {
            serde_json::to_string_pretty(rows).expect("reports serialize") + "\n"
        }
    }
}
