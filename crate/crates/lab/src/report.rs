use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use gevfit_core::emit::csv_float;
use serde::Serialize;

/// Quartile summary of one statistic over the replicates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Summaries for one sample size, keyed by statistic name.
#[derive(Debug, Clone, Serialize)]
pub struct PerNStats {
    pub n: usize,
    pub stats: BTreeMap<String, Quartiles>,
}

/// One named pass/fail conclusion, computed from the recorded statistics
/// only (so it can be re-derived from the CSV payload).
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Structured result of one experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub config: serde_json::Value,
    pub per_n: Vec<PerNStats>,
    pub verdicts: Vec<Verdict>,
    /// File name of the raw per-replicate payload written next to the report.
    pub raw_csv: String,
    #[serde(skip)]
    pub raw_csv_content: String,
}

impl ExperimentReport {
    pub fn new(name: &str, config: serde_json::Value) -> Self {
        Self {
            name: name.to_string(),
            config,
            per_n: Vec::new(),
            verdicts: Vec::new(),
            raw_csv: format!("{name}_raw.csv"),
            raw_csv_content: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.pass)
    }

    /// Median trajectory of one statistic across the sample-size grid.
    pub fn medians(&self, stat: &str) -> Vec<f64> {
        self.per_n
            .iter()
            .filter_map(|p| p.stats.get(stat).map(|q| q.median))
            .collect()
    }

    /// Writes `<name>_report.json` and `<name>_raw.csv` into `dir`;
    /// returns both paths.
    pub fn write(&self, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let report_path = dir.join(format!("{}_report.json", self.name));
        let csv_path = dir.join(&self.raw_csv);
        let json = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        std::fs::write(&report_path, json + "\n")?;
        std::fs::write(&csv_path, &self.raw_csv_content)?;
        Ok((report_path, csv_path))
    }
}

/// Deterministic quartiles (linear interpolation on the sorted values).
pub fn quartiles(values: &[f64]) -> Quartiles {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let at = |p: f64| -> f64 {
        let idx = p * (v.len() - 1) as f64;
        let lo = idx.floor() as usize;
        let hi = idx.ceil() as usize;
        let frac = idx - lo as f64;
        v[lo] + (v[hi] - v[lo]) * frac
    };
    Quartiles {
        q1: at(0.25),
        median: at(0.5),
        q3: at(0.75),
    }
}

pub fn strictly_increasing(xs: &[f64]) -> bool {
    xs.len() >= 2 && xs.windows(2).all(|w| w[1] > w[0])
}

pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.len() >= 2 && xs.windows(2).all(|w| w[1] < w[0])
}

/// A monotone-trend verdict over the medians of `stat`.
pub fn trend_verdict(report: &ExperimentReport, stat: &str, increasing: bool) -> Verdict {
    let meds = report.medians(stat);
    let pass = if increasing {
        strictly_increasing(&meds)
    } else {
        strictly_decreasing(&meds)
    };
    Verdict {
        name: format!(
            "{stat}_{}",
            if increasing { "increases" } else { "decreases" }
        ),
        pass,
        detail: format!(
            "medians across n-grid: [{}]",
            meds.iter()
                .map(|m| format!("{m:.6e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

/// CSV assembly helper for the raw payloads.
pub struct CsvBuilder {
    out: String,
    columns: usize,
}

impl CsvBuilder {
    pub fn new(header: &[&str]) -> Self {
        Self {
            out: header.join(",") + "\n",
            columns: header.len(),
        }
    }

    pub fn row(&mut self, ints: &[u64], floats: &[f64]) {
        debug_assert_eq!(ints.len() + floats.len(), self.columns);
        let mut fields: Vec<String> = ints.iter().map(|i| i.to_string()).collect();
        fields.extend(floats.iter().map(|&f| csv_float(f)));
        self.out.push_str(&fields.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
