//! Report documents, their JSON and CSV encodings, and plain-text tables.

use crate::config::ReportFormat;
use kxxz_bethe::SolutionSet;
use kxxz_core::symmetric::elementary_all;
use kxxz_core::wire::format_c64;
use kxxz_core::{BoundKind, CheckEntry, CheckStatus, RunMetadata, VerificationReport};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// Schema identifier written into every JSON report.
pub const REPORT_SCHEMA: &str = "kxxz.report.v1";

/// The JSON form of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema: String,
    /// Suites that were requested, in order.
    pub suites: Vec<String>,
    pub status: CheckStatus,
    /// Digest of the entries, params hash and precision.
    pub checksum: String,
    pub metadata: RunMetadata,
    pub entries: Vec<CheckEntry>,
}

impl ReportDocument {
    /// Wraps a report.
    pub fn new(suites: &[String], report: &VerificationReport) -> Self {
        ReportDocument {
            schema: REPORT_SCHEMA.to_string(),
            suites: suites.to_vec(),
            status: if report.passed() { CheckStatus::Pass } else { CheckStatus::Fail },
            checksum: report.checksum(),
            metadata: report.metadata.clone(),
            entries: report.entries.clone(),
        }
    }

    /// The report inside the document.
    pub fn report(&self) -> VerificationReport {
        VerificationReport {
            metadata: self.metadata.clone(),
            entries: self.entries.clone(),
        }
    }
}

/// One CSV row; the columns follow [`CheckEntry`].
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    check_id: String,
    anchor: String,
    residual: String,
    tolerance: String,
    bound: BoundKind,
    status: CheckStatus,
}

/// Shortest round-trip text for a float, as in the JSON encoding.
fn float_text(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

/// Encodes a report in the requested format.
pub fn encode_report(suites: &[String], report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&ReportDocument::new(suites, report)).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in &report.entries {
                w.serialize(CsvRow {
                    check_id: e.check_id.clone(),
                    anchor: e.anchor.clone(),
                    residual: float_text(e.residual),
                    tolerance: float_text(e.tolerance),
                    bound: e.bound,
                    status: e.status,
                })
                .expect("in-memory writer");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
    }
}

/// Decodes a report written by [`encode_report`], detecting the format from
/// the first character. CSV carries no metadata.
pub fn decode_report(text: &str) -> Result<VerificationReport, String> {
    if text.trim_start().starts_with('{') {
        let doc: ReportDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        return Ok(doc.report());
    }
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut report = VerificationReport::default();
    for row in r.deserialize::<CsvRow>() {
        let row = row.map_err(|e| e.to_string())?;
        let parse = |t: &str| t.parse::<f64>().map_err(|e| format!("{t}: {e}"));
        report.entries.push(CheckEntry::new(row.check_id, row.anchor, parse(&row.residual)?, parse(&row.tolerance)?, row.bound));
    }
    Ok(report)
}

/// Fixed-width table of every entry.
pub fn render_table(report: &VerificationReport) -> String {
    let width = report.entries.iter().map(|e| e.check_id.len()).max().unwrap_or(8).max(8);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:>10}  {:>10}  status  anchor", "check", "residual", "tolerance");
    for e in &report.entries {
        let status = if e.passed() { "pass" } else { "FAIL" };
        let cmp = if e.bound == BoundKind::Lower { ">=" } else { "<=" };
        let _ = writeln!(
            out,
            "{:<width$}  {:>10.3e}  {cmp}{:>8.1e}  {status:<6}  {}",
            e.check_id, e.residual, e.tolerance, e.anchor
        );
    }
    let failed = report.failures().count();
    let _ = writeln!(
        out,
        "{} checks, {} failed: {}",
        report.entries.len(),
        failed,
        if failed == 0 { "PASS" } else { "FAIL" }
    );
    out
}

/// One row of an eigenvalue table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRow {
    /// Fixed point as one-based members, for example `{1,3}`.
    pub fixed_point: String,
    pub roots: Vec<String>,
    /// `e_1 .. e_k` of the roots.
    pub elementary: Vec<String>,
    pub residual: f64,
}

/// Fixed point, Bethe roots and elementary symmetric values per solution.
pub fn eigen_rows(set: &SolutionSet) -> Vec<EigenRow> {
    set.solutions
        .iter()
        .map(|s| {
            let members: Vec<String> = (0..set.n).filter(|&i| s.origin >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
            EigenRow {
                fixed_point: format!("{{{}}}", members.join(",")),
                roots: s.roots.iter().map(|&r| format_c64(r)).collect(),
                elementary: elementary_all(&s.roots)[1..].iter().map(|&e| format_c64(e)).collect(),
                residual: s.residual_norm,
            }
        })
        .collect()
}

/// Output formats of the `report` command.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    #[default]
    Table,
    Csv,
    Json,
}

/// Renders an eigenvalue table.
pub fn render_eigen(set: &SolutionSet, format: TableFormat) -> String {
    let rows = eigen_rows(set);
    match format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["fixed_point".to_string()];
            header.extend((1..=set.k).map(|i| format!("s{i}")));
            header.extend((1..=set.k).map(|l| format!("e{l}")));
            header.push("residual".into());
            w.write_record(&header).expect("in-memory writer");
            for r in &rows {
                let mut rec = vec![r.fixed_point.clone()];
                rec.extend(r.roots.iter().cloned());
                rec.extend(r.elementary.iter().cloned());
                rec.push(float_text(r.residual));
                w.write_record(&rec).expect("in-memory writer");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
        TableFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "n = {}, k = {}, {} deformation {}, {} solutions",
                set.n,
                set.k,
                set.convention.name(),
                format_c64(set.z),
                rows.len()
            );
            for r in &rows {
                let _ = writeln!(out, "{:<12} roots [{}]", r.fixed_point, r.roots.join(", "));
                for (l, e) in r.elementary.iter().enumerate() {
                    let _ = writeln!(out, "{:<12} e{} = {}", "", l + 1, e);
                }
            }
            out
        }
    }
}
