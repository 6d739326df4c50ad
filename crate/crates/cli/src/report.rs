//! The JSON report every command prints.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateKind {
    /// Recomputable from the data embedded in the certificate.
    MachineChecked,
    /// Holds by a theorem; the data records the construction it applies to.
    PaperBacked,
    /// Numerically good, exactness not established.
    Candidate,
    /// A sampled estimate.
    Statistical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// Which check the data supports, e.g. `critical-exponent`.
    pub check: String,
    pub claim: String,
    pub data: Value,
}

impl Certificate {
    pub fn new(kind: CertificateKind, check: &str, claim: impl Into<String>, data: Value) -> Self {
        Self { kind, check: check.into(), claim: claim.into(), data }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ok,
    Empty,
    Incomplete,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Ok => 0,
            Self::Empty => 2,
            Self::Incomplete => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    /// Subcommand path, e.g. `explore counterexample`.
    pub command: String,
    /// Every flag the command ran with, defaults included, so the report
    /// replays on its own.
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    pub results: Value,
    pub certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(command: &str, parameters: BTreeMap<String, String>, results: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            parameters,
            status: Status::Ok,
            results,
            certificates: Vec::new(),
            timing_ms: None,
            seed: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("not a report: {e}"))
    }

    /// The arguments that reproduce this report.
    pub fn argv(&self) -> Vec<String> {
        let mut argv = vec!["critexp".to_string()];
        argv.extend(self.command.split(' ').map(String::from));
        for (k, v) in &self.parameters {
            match (k.as_str(), v.as_str()) {
                ("word", _) if self.command == "exponent" => argv.push(v.clone()),
                (_, "true") => argv.push(format!("--{k}")),
                (_, "false") => {}
                _ => {
                    argv.push(format!("--{k}"));
                    argv.push(v.clone());
                }
            }
        }
        argv.push("--no-timing".into());
        argv
    }

    pub fn without_timing(&self) -> Self {
        Self { timing_ms: None, ..self.clone() }
    }

    /// CSV of `results.series`, the derived view of a report.
    pub fn to_csv(&self) -> Result<String, String> {
        let series = self.results.get("series").ok_or("report has no series")?;
        let columns = series.get("columns").and_then(Value::as_array).ok_or("series without columns")?;
        let rows = series.get("rows").and_then(Value::as_array).ok_or("series without rows")?;
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let mut out = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| e.to_string();
        out.write_record(columns.iter().map(cell)).map_err(fail)?;
        for row in rows {
            let row = row.as_array().ok_or("series row is not an array")?;
            out.write_record(row.iter().map(cell)).map_err(fail)?;
        }
        let bytes = out.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }
}

/// `{"columns": [...], "rows": [[...], ...]}`.
pub fn series<I, R>(columns: &[&str], rows: I) -> Value
where
    I: IntoIterator<Item = R>,
    R: Into<Value>,
{
    json!({ "columns": columns, "rows": rows.into_iter().map(Into::into).collect::<Vec<Value>>() })
}
