//! Report bundles: CSV tables, JSON documents and a summary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentSpec;
use crate::error::Result;

pub const SUMMARY_FILE: &str = "summary.json";

/// One pass/fail verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// `PASS name: detail` or `FAIL name: detail`.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}: {}", self.name, self.detail)
    }
}

/// A named CSV file held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub contents: String,
}

impl Table {
    /// Serialises `rows` under `header`.
    pub fn from_rows<S: Serialize>(
        name: impl Into<String>,
        header: &[&str],
        rows: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(Self {
            name: name.into(),
            contents: String::from_utf8(bytes).expect("CSV output is UTF-8"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub tool: String,
    pub version: String,
    pub kind: String,
    /// Fully resolved configuration.
    pub config: Value,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Every file written next to the summary.
    pub files: Vec<String>,
    /// Relation reports and other structured results, by name.
    pub reports: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub tables: Vec<Table>,
    /// JSON documents written alongside the tables.
    pub documents: Vec<(String, Value)>,
    pub checks: Vec<Check>,
    pub reports: BTreeMap<String, Value>,
    config: Value,
    kind: String,
}

impl ReportBundle {
    pub fn new(spec: &ExperimentSpec) -> Self {
        Self {
            tables: Vec::new(),
            documents: Vec::new(),
            checks: Vec::new(),
            reports: BTreeMap::new(),
            config: spec.to_json(),
            kind: spec.kind().id().to_string(),
        }
    }

    pub fn table(&mut self, table: Table) {
        self.tables.push(table);
    }

    pub fn document<S: Serialize>(&mut self, name: impl Into<String>, value: &S) -> Result<()> {
        self.documents
            .push((name.into(), serde_json::to_value(value)?));
        Ok(())
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn report<S: Serialize>(&mut self, name: impl Into<String>, value: &S) -> Result<()> {
        self.reports
            .insert(name.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn summary(&self) -> Summary {
        let files = self
            .tables
            .iter()
            .map(|t| t.name.clone())
            .chain(self.documents.iter().map(|(n, _)| n.clone()))
            .collect();
        Summary {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            kind: self.kind.clone(),
            config: self.config.clone(),
            passed: self.passed(),
            checks: self.checks.clone(),
            files,
            reports: self.reports.clone(),
        }
    }

    /// Writes every table, document and `summary.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for t in &self.tables {
            let path = dir.join(&t.name);
            std::fs::write(&path, &t.contents)?;
            written.push(path);
        }
        for (name, value) in &self.documents {
            let path = dir.join(name);
            std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
            written.push(path);
        }
        let path = dir.join(SUMMARY_FILE);
        std::fs::write(&path, serde_json::to_string_pretty(&self.summary())? + "\n")?;
        written.push(path);
        Ok(written)
    }
}
