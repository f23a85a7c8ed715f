//! Per-run measurements and their CSV form.

use std::io::Write;

use anyhow::Result;
use hermeig::{Config, Method, SolveMeta, Step};
use serde::{Deserialize, Serialize};

use crate::plan::Selection;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 17] = [
    "schema_version",
    "n",
    "method",
    "sel_mode",
    "sel_frac",
    "seed",
    "t_total_s",
    "t_cholesky_s",
    "t_transform_s",
    "t_tridiag_s",
    "t_dc_s",
    "t_backtransform_s",
    "level2_flops",
    "level3_flops",
    "max_residual",
    "orth_norm",
    "pass",
];

/// Columns that hold wall times and therefore differ between identical runs.
pub const TIMING_COLUMNS: [&str; 6] = [
    "t_total_s",
    "t_cholesky_s",
    "t_transform_s",
    "t_tridiag_s",
    "t_dc_s",
    "t_backtransform_s",
];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepTimes {
    pub total: f64,
    pub cholesky: f64,
    pub transform: f64,
    pub tridiag: f64,
    pub dc: f64,
    /// Both eigenvector backtransformations together.
    pub backtransform: f64,
}

impl StepTimes {
    pub fn from_meta(meta: &SolveMeta) -> Self {
        Self {
            total: meta.total_seconds(),
            cholesky: meta.seconds(Step::Cholesky),
            transform: meta.seconds(Step::Transform),
            tridiag: meta.seconds(Step::Tridiag),
            dc: meta.seconds(Step::Dc),
            backtransform: meta.seconds(Step::Backtransform) + meta.seconds(Step::BacktransformGeneralized),
        }
    }

    pub fn steps(&self) -> [(&'static str, f64); 5] {
        [
            ("cholesky", self.cholesky),
            ("transform", self.transform),
            ("tridiag", self.tridiag),
            ("dc", self.dc),
            ("backtransform", self.backtransform),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Checksum {
    pub sum: f64,
    pub min: f64,
    pub max: f64,
}

impl Checksum {
    pub fn of(values: &[f64]) -> Self {
        Self {
            sum: values.iter().sum(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub n: usize,
    pub method: Method,
    pub sel: Selection,
    pub seed: u64,
    pub repeat: usize,
    pub config: Config,
    pub times: StepTimes,
    pub level2_flops: u64,
    pub level3_flops: u64,
    /// Largest normalized generalized residual over the returned pairs.
    pub max_residual: f64,
    /// `||X^H B X - I||_F`.
    pub orth_norm: f64,
    /// Largest eigenvalue deviation from the oracle, when it was run.
    pub oracle_error: Option<f64>,
    pub checksum: Checksum,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl RunRecord {
    pub fn sel_frac(&self) -> f64 {
        self.sel.fraction_of(self.n)
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let t = &self.times;
        vec![
            self.schema_version.to_string(),
            self.n.to_string(),
            self.method.to_string(),
            self.sel.mode().to_string(),
            self.sel_frac().to_string(),
            self.seed.to_string(),
            format!("{:e}", t.total),
            format!("{:e}", t.cholesky),
            format!("{:e}", t.transform),
            format!("{:e}", t.tridiag),
            format!("{:e}", t.dc),
            format!("{:e}", t.backtransform),
            self.level2_flops.to_string(),
            self.level3_flops.to_string(),
            format!("{:e}", self.max_residual),
            format!("{:e}", self.orth_norm),
            self.pass.to_string(),
        ]
    }
}

pub fn write_csv<W: Write>(mut w: W, records: &[RunRecord]) -> Result<()> {
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for r in records {
        writeln!(w, "{}", r.csv_fields().join(","))?;
    }
    Ok(())
}

/// Median-of-repeats row for one `(n, method, selection)` group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub method: Method,
    pub sel: Selection,
    pub runs: usize,
    pub times: StepTimes,
    pub level2_flops: u64,
    pub level3_flops: u64,
    pub max_residual: f64,
    pub orth_norm: f64,
    pub pass: bool,
}

pub const SUMMARY_COLUMNS: [&str; 16] = [
    "schema_version",
    "n",
    "method",
    "sel_mode",
    "sel_frac",
    "runs",
    "median_t_total_s",
    "median_t_cholesky_s",
    "median_t_transform_s",
    "median_t_tridiag_s",
    "median_t_dc_s",
    "median_t_backtransform_s",
    "level2_flops",
    "level3_flops",
    "max_residual",
    "pass",
];

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Groups in first-appearance order.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(usize, Method, Selection)> = Vec::new();
    for r in records {
        let key = (r.n, r.method, r.sel);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(n, method, sel)| {
            let group: Vec<&RunRecord> =
                records.iter().filter(|r| r.n == n && r.method == method && r.sel == sel).collect();
            let med = |f: fn(&StepTimes) -> f64| median(group.iter().map(|r| f(&r.times)).collect());
            SummaryRow {
                n,
                method,
                sel,
                runs: group.len(),
                times: StepTimes {
                    total: med(|t| t.total),
                    cholesky: med(|t| t.cholesky),
                    transform: med(|t| t.transform),
                    tridiag: med(|t| t.tridiag),
                    dc: med(|t| t.dc),
                    backtransform: med(|t| t.backtransform),
                },
                level2_flops: group.iter().map(|r| r.level2_flops).max().unwrap_or(0),
                level3_flops: group.iter().map(|r| r.level3_flops).max().unwrap_or(0),
                max_residual: group.iter().map(|r| r.max_residual).fold(0.0, f64::max),
                orth_norm: group.iter().map(|r| r.orth_norm).fold(0.0, f64::max),
                pass: group.iter().all(|r| r.pass),
            }
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(mut w: W, rows: &[SummaryRow]) -> Result<()> {
    writeln!(w, "{}", SUMMARY_COLUMNS.join(","))?;
    for r in rows {
        let t = &r.times;
        writeln!(
            w,
            "{},{},{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{:e},{}",
            SCHEMA_VERSION,
            r.n,
            r.method,
            r.sel.mode(),
            r.sel.fraction_of(r.n),
            r.runs,
            t.total,
            t.cholesky,
            t.transform,
            t.tridiag,
            t.dc,
            t.backtransform,
            r.level2_flops,
            r.level3_flops,
            r.max_residual,
            r.pass
        )?;
    }
    Ok(())
}
