use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::SuiteConfig;
use crate::corpus::CORPUS_VERSION;

pub const SCHEMA_VERSION: &str = "mm-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Number of instances the check ran over.
    pub instances: usize,
    /// Present exactly when the check failed: the offending instances and data.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub millis: u64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// One row of the dimension table rendered in markdown.
#[derive(Clone, Debug, Serialize)]
pub struct DimRow {
    pub field: String,
    pub y: String,
    pub z: String,
    pub red: usize,
    pub u: usize,
    pub v: usize,
    pub total: usize,
    pub oracle: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub corpus_version: &'static str,
    pub suite: String,
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dimensions: Vec<DimRow>,
}

impl Report {
    pub fn new(suite: &str, config: &SuiteConfig) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            corpus_version: CORPUS_VERSION,
            suite: suite.to_string(),
            config: config.clone(),
            checks: Vec::new(),
            warnings: Vec::new(),
            dimensions: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// The report with every timing zeroed, for comparing reruns.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.millis = 0;
        }
        r
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "# Suite `{}`: {}\n", self.suite, verdict);
        let _ = writeln!(s, "Corpus `{}`, schema `{}`, seed {}, max degree {}.\n", self.corpus_version, self.schema_version, self.config.seed, self.config.max_deg);
        let _ = writeln!(s, "| check | status | instances | ms |\n|---|---|---|---|");
        for c in &self.checks {
            let st = if c.passed() { "pass" } else { "**FAIL**" };
            let _ = writeln!(s, "| {} | {} | {} | {} |", c.name, st, c.instances, c.millis);
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(s, "\n## Warnings\n");
            for w in &self.warnings {
                let _ = writeln!(s, "- {}", w);
            }
        }
        let failing: Vec<&Check> = self.failures().collect();
        if !failing.is_empty() {
            let _ = writeln!(s, "\n## Witnesses\n");
            for c in failing {
                let w = c.witness.as_ref().map(|w| serde_json::to_string_pretty(w).unwrap_or_default()).unwrap_or_default();
                let _ = writeln!(s, "### {}\n\n```json\n{}\n```\n", c.name, w);
            }
        }
        if !self.dimensions.is_empty() {
            let _ = writeln!(s, "\n## Dimensions\n");
            let _ = writeln!(s, "| field | Y | Z | red | U | V | total | oracle |\n|---|---|---|---|---|---|---|---|");
            for r in &self.dimensions {
                let _ = writeln!(s, "| {} | {} | {} | {} | {} | {} | {} | {} |", r.field, r.y, r.z, r.red, r.u, r.v, r.total, r.oracle);
            }
        }
        s
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn write_markdown(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_markdown())
    }
}
