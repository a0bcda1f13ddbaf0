use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity or statement being checked.
    pub anchor: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: f64,
    /// Seconds.
    pub runtime: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// What a check body reports back.
pub struct Outcome {
    pub measured: f64,
    pub pass: bool,
    pub detail: Option<String>,
}

impl Outcome {
    /// Passes when `measured <= tol`.
    pub fn within(measured: f64, tol: f64) -> Self {
        Outcome { measured, pass: measured <= tol, detail: None }
    }

    /// Passes when no mismatches were counted.
    pub fn exact(mismatches: usize) -> Self {
        Outcome { measured: mismatches as f64, pass: mismatches == 0, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Runs `body`; any error becomes a failed check.
pub fn run_check<F>(name: &str, anchor: &str, tolerance: f64, body: F) -> Check
where
    F: FnOnce() -> syz_core::Result<Outcome>,
{
    let start = Instant::now();
    let res = body();
    let runtime = start.elapsed().as_secs_f64();
    let (status, measured, detail) = match res {
        Ok(o) => (if o.pass { Status::Pass } else { Status::Fail }, Some(o.measured).filter(|m| m.is_finite()), o.detail),
        Err(e) => (Status::Fail, None, Some(format!("error: {e}"))),
    };
    Check {
        name: name.to_string(),
        anchor: anchor.to_string(),
        status,
        measured,
        tolerance,
        runtime,
        detail,
    }
}

/// A CSV table; every cell is preformatted.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<T: ToString>(&mut self, row: impl IntoIterator<Item = T>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(format!("{}.csv", self.name));
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(scenario: &str, seed: u64, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(Check::passed);
        Report { scenario: scenario.to_string(), seed, checks, pass }
    }

    /// Anchors in check order, one per check.
    pub fn anchors(&self) -> Vec<&str> {
        self.checks.iter().map(|c| c.anchor.as_str()).collect()
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("report.json");
        fs::write(&path, serde_json::to_string_pretty(self)?).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
