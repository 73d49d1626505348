use serde::Serialize;

use crate::error::CliError;
use crate::run::{RunReport, Tables, TablesReport};

/// Pretty JSON with a trailing newline. Key order is fixed by the type
/// definitions and `BTreeMap`s, so equal reports give equal bytes.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// One row per check report.
pub fn run_csv(report: &RunReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(["check", "stage", "status", "cases", "v", "w", "exponent", "logPower", "expected", "found", "notes"])
        .map_err(err)?;
    for r in &report.checks {
        let status = serde_json::to_value(r.status).expect("status serializes");
        let stage = r.params.get("stage").cloned().unwrap_or_default();
        let (v, wv, e, l, ex, f) = match &r.witness {
            Some(x) => (
                x.v.clone(),
                x.w.clone(),
                x.exponent.clone(),
                x.log_power.to_string(),
                x.expected.clone(),
                x.found.clone(),
            ),
            None => Default::default(),
        };
        w.write_record([
            r.name.as_str(),
            &stage,
            status.as_str().unwrap_or_default(),
            &r.cases.to_string(),
            &v,
            &wv,
            &e,
            &l,
            &ex,
            &f,
            &r.notes.join("; "),
        ])
        .map_err(err)?;
    }
    finish(w)
}

/// Graded dimensions and mode-table rows in one long table.
pub fn tables_csv(tables: &Tables) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(["section", "stage", "generator", "m", "l", "weight", "class", "value"])
        .map_err(err)?;
    for t in &tables.graded_dimensions {
        for e in &t.entries {
            w.write_record(["dims", &t.stage.to_string(), "", "", "", &e.weight, &e.class, &e.dim.to_string()])
                .map_err(err)?;
        }
    }
    for t in &tables.mode_tables {
        for r in &t.rows {
            w.write_record(["mode", &t.stage.to_string(), &t.generator, &r.m, &r.l.to_string(), "", "", &r.op])
                .map_err(err)?;
        }
    }
    finish(w)
}

pub fn tables_report_csv(report: &TablesReport) -> Result<String, CliError> {
    tables_csv(&report.tables)
}
