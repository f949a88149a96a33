//! Run-manifest assembly and output encoding. Every reporting subcommand
//! emits one manifest document; timestamps and timings live in a header
//! field kept apart from the result payload, so two runs with the same
//! command, parameters, and tool version produce byte-identical documents
//! outside that header.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Milliseconds since the Unix epoch.
pub fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or_default()
}

/// Wall-clock bookkeeping for one run. Everything that varies between
/// otherwise identical runs belongs here and nowhere else.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunHeader {
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub timings_ms: BTreeMap<String, u64>,
}

/// One complete run: what was asked, which build answered, and every result.
///
/// Serialization round-trips losslessly, and the fields outside `header` are
/// a pure function of (command, parameters, tool_version).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub header: RunHeader,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub results: Value,
}

impl RunManifest {
    /// Pretty-prints the document; key order is deterministic throughout.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests are plain data")
    }
}

/// Flattens a JSON object into one table row: strings stay bare, scalars
/// print canonically, null becomes empty, and any nested structure is kept
/// as compact JSON.
pub fn flatten_row(value: &Value) -> BTreeMap<String, String> {
    let mut row = BTreeMap::new();
    if let Value::Object(map) = value {
        for (key, v) in map {
            let cell = match v {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            row.insert(key.clone(), cell);
        }
    } else {
        row.insert("value".to_string(), value.to_string());
    }
    row
}

fn escape_csv(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders rows as CSV with a header line; the column set is the sorted
/// union of all row keys, and missing cells are empty.
pub fn to_csv(rows: &[BTreeMap<String, String>]) -> String {
    let columns: BTreeSet<&str> =
        rows.iter().flat_map(|r| r.keys().map(String::as_str)).collect();
    if columns.is_empty() {
        return String::new();
    }
    let mut out = String::new();
    let header: Vec<String> = columns.iter().map(|c| escape_csv(c)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = columns
            .iter()
            .map(|c| escape_csv(row.get(*c).map(String::as_str).unwrap_or("")))
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
