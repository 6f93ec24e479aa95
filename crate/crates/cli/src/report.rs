//! Deterministic report emission: fixed column order, fixed float
//! formatting (12 significant digits), byte-identical outputs for
//! identical inputs.

use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

/// One named assertion with its measured value and threshold.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Assertion {
    /// `|value| <= threshold`.
    pub fn magnitude(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: value.abs() <= threshold,
            value,
            threshold,
        }
    }

    /// `|value - target| <= tol`, recorded as the deviation from target.
    pub fn near(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: (value - target).abs() <= tol,
            value,
            threshold: tol,
        }
    }

    /// `value >= bound - slack`.
    pub fn at_least(name: &str, value: f64, bound: f64, slack: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: value >= bound - slack,
            value,
            threshold: bound,
        }
    }
}

/// A CSV table with a fixed header; every header names its units.
#[derive(Debug, Clone, Serialize)]
pub struct CsvTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Render with 12-significant-digit scientific formatting.
    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_sig12(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// 12 significant digits, scientific; deterministic across platforms.
pub fn format_sig12(v: f64) -> String {
    format!("{v:.11e}")
}

/// The summary emitted by every experiment.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub experiment: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub results: serde_json::Value,
    pub assertions: Vec<Assertion>,
    pub pass: bool,
}

impl RunSummary {
    pub fn new(
        experiment: &str,
        seed: u64,
        params: BTreeMap<String, String>,
        results: serde_json::Value,
        assertions: Vec<Assertion>,
    ) -> Self {
        let pass = assertions.iter().all(|a| a.passed);
        Self {
            experiment: experiment.to_string(),
            seed,
            params,
            results,
            assertions,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    /// First failing assertion, for the exit-1 diagnostic.
    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.passed)
    }
}

/// Write the summary and tables into `out_dir`. Returns the file list.
pub fn emit_report(
    out_dir: &Path,
    summary: &RunSummary,
    tables: &[CsvTable],
) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let summary_path = out_dir.join("summary.json");
    let mut f = std::fs::File::create(&summary_path)?;
    f.write_all(summary.to_json().as_bytes())?;
    f.write_all(b"\n")?;
    written.push(summary_path);

    for table in tables {
        let path = out_dir.join(format!("{}.csv", table.name));
        std::fs::write(&path, table.render())?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formatting_is_stable() {
        let mut t = CsvTable::new("demo", &["x (dimensionless)", "y (energy)"]);
        t.push(vec![1.0, 28.7496304]);
        let r1 = t.render();
        let r2 = t.render();
        assert_eq!(r1, r2);
        assert!(r1.starts_with("x (dimensionless),y (energy)\n"));
        assert!(r1.contains("2.87496304000e1"));
    }

    #[test]
    fn empty_sweep_renders_header_only() {
        let t = CsvTable::new("empty", &["a (units)"]);
        assert_eq!(t.render(), "a (units)\n");
    }

    #[test]
    fn summary_pass_is_conjunction() {
        let s = RunSummary::new(
            "demo",
            1,
            BTreeMap::new(),
            serde_json::json!({}),
            vec![
                Assertion::magnitude("ok", 0.5, 1.0),
                Assertion::near("bad", 2.0, 0.0, 1.0),
            ],
        );
        assert!(!s.pass);
        assert_eq!(s.first_failure().unwrap().name, "bad");
    }
}
