use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Provenance of one CLI run, repeated as `#` comments atop each CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: SystemConfig,
    /// Run parameters beyond the system config, in emission order.
    pub parameters: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
    pub version: String,
    pub timestamp_unix_s: u64,
    /// No stochastic step was involved, so the data body is reproducible.
    pub deterministic: bool,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: &SystemConfig) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config: config.clone(),
            parameters: Vec::new(),
            outputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            deterministic: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn comment_block(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# star-battery {}", self.version);
        let _ = writeln!(out, "# subcommand: {}", self.subcommand);
        let _ = writeln!(out, "# timestamp_unix_s: {}", self.timestamp_unix_s);
        let _ = writeln!(out, "# deterministic: {}", self.deterministic);
        let config = toml::to_string(&self.config).unwrap_or_default();
        for line in config.lines().filter(|l| !l.is_empty()) {
            let _ = writeln!(out, "# config: {line}");
        }
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "# param: {k} = {v}");
        }
        for path in &self.outputs {
            let _ = writeln!(out, "# output: {}", path.display());
        }
        out
    }
}

/// Rows of one CSV file.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path, manifest: &RunManifest, notes: &[String]) -> Result<()> {
        let mut text = manifest.comment_block();
        for note in notes {
            let _ = writeln!(text, "# {note}");
        }
        text.push_str(&self.header.join(","));
        text.push('\n');
        for row in &self.rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}
