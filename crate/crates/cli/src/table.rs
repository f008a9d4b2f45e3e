//! Scenario result tables and their serialization to JSON, CSV, and text.
//!
//! All three formats are deterministic: field order is fixed, maps are
//! ordered, and timing information is kept out of the serialized bytes.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

/// Version tag embedded in every JSON document.
pub const SCHEMA_VERSION: &str = "1";

/// Fixed CSV header. CSV output contains only the trusted rows, so that a
/// CSV capture can be compared against a golden file directly.
pub const CSV_HEADER: &str = "degree,rank,invariant_factors,u_action,trusted";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format '{}' (expected json|csv|text)", other)),
        }
    }
}

/// One homology row: free rank, invariant factors, and the entry of the
/// degree −2 action written in the generator bases.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub degree: i64,
    pub rank: usize,
    pub invariant_factors: Vec<String>,
    pub u_action: String,
    pub trusted: bool,
}

/// One named verification with its outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultTable {
    pub schema_version: &'static str,
    pub scenario: String,
    pub params: BTreeMap<String, String>,
    /// Inclusive degree range certified by the scenario, when applicable.
    pub trust_window: Option<(i64, i64)>,
    pub convention_hash: String,
    pub warnings: Vec<String>,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl ResultTable {
    pub fn new(scenario: &str) -> Self {
        ResultTable {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            params: BTreeMap::new(),
            trust_window: None,
            convention_hash: convention_hash(),
            warnings: Vec::new(),
            rows: Vec::new(),
            checks: Vec::new(),
            pass: true,
            elapsed: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl ToString) {
        self.checks.push(Check { name: name.to_string(), pass, detail: detail.to_string() });
        self.pass &= pass;
    }

    /// Sort rows by degree; called once at the end of every scenario.
    pub fn finish(&mut self) {
        self.rows.sort_by_key(|r| r.degree);
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("table serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut out = String::from(CSV_HEADER);
                out.push('\n');
                for r in self.rows.iter().filter(|r| r.trusted) {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.degree,
                        r.rank,
                        r.invariant_factors.join(";"),
                        r.u_action,
                        r.trusted
                    ));
                }
                out
            }
            Format::Text => self.emit_text(),
        }
    }

    fn emit_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario: {}\n", self.scenario));
        for (k, v) in &self.params {
            out.push_str(&format!("  {} = {}\n", k, v));
        }
        match self.trust_window {
            Some((lo, hi)) => out.push_str(&format!("trusted degrees: [{}, {}]\n", lo, hi)),
            None => out.push_str("trusted degrees: n/a\n"),
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {}\n", w));
        }
        if !self.rows.is_empty() {
            out.push_str(&format!("{}\n", CSV_HEADER));
            for r in &self.rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.degree,
                    r.rank,
                    r.invariant_factors.join(";"),
                    r.u_action,
                    r.trusted
                ));
            }
        }
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}: {}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!("result: {}\n", if self.pass { "pass" } else { "FAIL" }));
        out
    }
}

/// FNV-1a hash of the sign-convention table, so that output files record
/// which conventions produced them.
pub fn convention_hash() -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in crate::SIGN_CONVENTIONS.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{:016x}", h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_gives_header_only_csv() {
        let t = ResultTable::new("demo");
        assert_eq!(t.emit(Format::Csv), format!("{}\n", CSV_HEADER));
    }

    #[test]
    fn csv_keeps_only_trusted_rows() {
        let mut t = ResultTable::new("demo");
        t.rows.push(Row {
            degree: 1,
            rank: 2,
            invariant_factors: vec!["x^2".into()],
            u_action: "x".into(),
            trusted: true,
        });
        t.rows.push(Row {
            degree: 0,
            rank: 0,
            invariant_factors: vec![],
            u_action: String::new(),
            trusted: false,
        });
        t.finish();
        let csv = t.emit(Format::Csv);
        assert_eq!(csv, format!("{}\n1,2,x^2,x,true\n", CSV_HEADER));
    }

    #[test]
    fn json_round_trips_and_is_versioned() {
        let mut t = ResultTable::new("demo");
        t.param("n", 2);
        t.check("sample", true, "ok");
        let s = t.emit(Format::Json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["scenario"], "demo");
        assert_eq!(v["params"]["n"], "2");
        assert_eq!(v["pass"], true);
    }
}
