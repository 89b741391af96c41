use std::path::Path;

use thiserror::Error;

use super::AuditRecord;
use crate::formulas::BoundStatus;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("csv encoding failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
}

const CSV_HEADER: [&str; 17] = [
    "group_spec",
    "group_order",
    "subgroup_members",
    "h_order",
    "g_label",
    "g_in_K",
    "standing_assumptions_met",
    "edges_oracle",
    "edges_formula",
    "degree_mismatch_count",
    "shape",
    "triangle_free",
    "domination",
    "bounds_pass",
    "bounds_fail",
    "bounds_na",
    "special_mismatches",
];

/// Pretty JSON array of records, newline-terminated.
pub fn records_to_json(records: &[AuditRecord]) -> Result<String, ReportError> {
    let mut text = serde_json::to_string_pretty(records)?;
    text.push('\n');
    Ok(text)
}

/// One CSV row per record. Bound audits collapse to pass/fail/na counts;
/// `special_mismatches` counts special formulas disagreeing with the oracle
/// while their hypotheses hold.
pub fn records_to_csv(records: &[AuditRecord]) -> Result<String, ReportError> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(CSV_HEADER)?;
    for r in records {
        let count = |s: BoundStatus| r.bound_audits.iter().filter(|b| b.status() == s).count().to_string();
        let members: Vec<String> = r.subgroup_members.iter().map(usize::to_string).collect();
        let mismatches =
            r.special_formula_checks.iter().filter(|c| c.hypotheses_met && !c.matches_oracle).count();
        out.write_record([
            r.group_spec.clone(),
            r.group_order.to_string(),
            members.join(" "),
            r.h_order.to_string(),
            r.g_label.clone(),
            r.g_in_k.to_string(),
            r.standing_assumptions_met.to_string(),
            r.edges_oracle.to_string(),
            r.edges_formula.to_string(),
            r.degree_mismatch_count.to_string(),
            r.shape.name().to_string(),
            r.triangle_free.to_string(),
            r.domination.map(|d| d.to_string()).unwrap_or_default(),
            count(BoundStatus::Pass),
            count(BoundStatus::Fail),
            count(BoundStatus::Na),
            mismatches.to_string(),
        ])?;
    }
    let bytes = out.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes the JSON report and, if requested, the CSV summary.
pub fn write_report(records: &[AuditRecord], json_path: &Path, csv_path: Option<&Path>) -> Result<(), ReportError> {
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|source| ReportError::File { path: path.display().to_string(), source })
    };
    write(json_path, records_to_json(records)?)?;
    if let Some(path) = csv_path {
        write(path, records_to_csv(records)?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_reports() {
        assert_eq!(records_to_json(&[]).unwrap(), "[]\n");
        let csv = records_to_csv(&[]).unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert!(csv.starts_with("group_spec,group_order,"));
    }
}
