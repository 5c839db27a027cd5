//! Run-summary JSON: status, named residuals, the file manifest, and the
//! configuration echo. Map keys are sorted, so identical runs produce
//! identical bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::diagnostics::ExperimentReport;

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub status: String,
    pub residuals: BTreeMap<String, f64>,
    pub files: Vec<FileEntry>,
    pub config_echo: BTreeMap<String, String>,
}

impl RunSummary {
    pub fn new(status: impl Into<String>, config_echo: BTreeMap<String, String>) -> Self {
        RunSummary {
            status: status.into(),
            residuals: BTreeMap::new(),
            files: Vec::new(),
            config_echo,
        }
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), value);
    }

    /// Fold an experiment report in: each check contributes its residual.
    pub fn absorb_report(&mut self, report: &ExperimentReport) {
        for check in &report.checks {
            self.residuals
                .insert(format!("{}.{}", report.name, check.name), check.residual);
        }
    }

    /// Record a written file and its byte length in the manifest.
    pub fn add_file(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::metadata(path)?.len();
        self.files.push(FileEntry {
            path: path.display().to_string(),
            bytes,
        });
        Ok(())
    }

    /// Write the summary itself (not listed in its own manifest).
    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join("run_summary.json");
        let mut text = serde_json::to_string_pretty(self).expect("summary serializes");
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}
