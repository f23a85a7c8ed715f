//! Benchmark harness and command implementations behind the `hermeig` binary.

pub mod plan;
pub mod plot;
pub mod record;
pub mod suite;

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hermeig::matrix::io::{read_heig, read_text, write_heig, write_text, FileKind, MAGIC};
use hermeig::verify::{b_orthogonality, generalized_residuals, orthogonality, standard_residuals};
use hermeig::{solve_generalized, solve_standard, Backend, CMat, Config, DenseHermitian, Method};
use serde::Serialize;

use crate::plan::Selection;
use crate::record::StepTimes;

/// Reads a `.heig` binary file or, failing the magic check, the text format.
pub fn load_blocks(path: &Path) -> Result<(FileKind, Vec<CMat>)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    if bytes.starts_with(&MAGIC) {
        return read_heig(&bytes[..]).with_context(|| format!("invalid matrix file {}", path.display()));
    }
    let text = std::str::from_utf8(&bytes).with_context(|| format!("{} is neither .heig nor text", path.display()))?;
    let m = read_text(text).with_context(|| format!("invalid matrix text in {}", path.display()))?;
    Ok((FileKind::Matrix, vec![m]))
}

/// Writes binary when the extension is `.heig`, text otherwise (single matrix only).
pub fn save_blocks(path: &Path, blocks: &[&CMat]) -> Result<()> {
    let mut buf = Vec::new();
    if path.extension().is_some_and(|e| e == "heig") {
        write_heig(&mut buf, blocks)?;
    } else {
        if blocks.len() != 1 {
            bail!("the text format holds one matrix; use a .heig file for a pencil");
        }
        write_text(&mut buf, blocks[0])?;
    }
    fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))
}

fn hermitian(m: CMat, what: &str) -> Result<DenseHermitian> {
    if !m.is_square() {
        bail!("{what} is {}x{}, expected square", m.rows(), m.cols());
    }
    let h = hermeig::symmetrize(&m)?;
    let dev = h.matrix().sub_matrix(&m).frobenius_norm();
    if dev > 1e-12 * h.frobenius_norm().max(f64::MIN_POSITIVE) {
        bail!("{what} is not Hermitian (deviation {dev:e})");
    }
    Ok(h)
}

/// The matrix or pencil to solve, from one or two input files.
pub fn load_problem(input: &Path, b: Option<&Path>) -> Result<(DenseHermitian, Option<DenseHermitian>)> {
    let (kind, mut blocks) = load_blocks(input)?;
    let second = match (kind, b) {
        (FileKind::Pencil, Some(_)) => bail!("{} already holds a pencil; drop --b", input.display()),
        (FileKind::Pencil, None) => Some(blocks.pop().expect("pencil has two blocks")),
        (FileKind::Matrix, Some(path)) => {
            let (k, mut bb) = load_blocks(path)?;
            if k != FileKind::Matrix {
                bail!("{} must hold a single matrix", path.display());
            }
            Some(bb.remove(0))
        }
        (FileKind::Matrix, None) => None,
    };
    let a = hermitian(blocks.remove(0), "A")?;
    let b = second.map(|m| hermitian(m, "B")).transpose()?;
    if let Some(b) = &b {
        if b.n() != a.n() {
            bail!("A is {0}x{0} but B is {1}x{1}", a.n(), b.n());
        }
    }
    Ok((a, b))
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveMetrics {
    /// Generalized: normalized residual; standard: `||A x - lambda x|| / ||A||_F`.
    pub max_residual: f64,
    pub orth_norm: f64,
    pub residual_tolerance: f64,
    pub orthogonality_tolerance: f64,
    pub pass: bool,
    pub level2_flops: u64,
    pub level3_flops: u64,
    pub times: StepTimes,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub n: usize,
    pub problem: &'static str,
    pub method: Method,
    pub selection: Selection,
    pub range: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    pub metrics: SolveMetrics,
}

pub fn solve_problem(
    a: &DenseHermitian,
    b: Option<&DenseHermitian>,
    sel: Selection,
    method: Method,
    config: &Config,
    backend: &dyn Backend,
    metric_only: bool,
) -> Result<SolveReport> {
    let n = a.n();
    let esel = sel.to_eigen();
    let (res, max_residual, orth_norm) = match b {
        Some(b) => {
            let r = solve_generalized(a, b, &esel, method, config, backend)?;
            let x = r.vectors.as_ref().context("no vectors returned")?;
            let res = generalized_residuals(a, b, &r.values, x).into_iter().fold(0.0, f64::max);
            let orth = b_orthogonality(b, x);
            (r, res, orth)
        }
        None => {
            let r = solve_standard(a, &esel, method, config, backend)?;
            let x = r.vectors.as_ref().context("no vectors returned")?;
            let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
            let res = standard_residuals(a, &r.values, x).into_iter().fold(0.0, f64::max) / scale;
            let orth = orthogonality(x);
            (r, res, orth)
        }
    };
    let residual_tolerance = config.residual_tolerance(n);
    let orthogonality_tolerance = config.orthogonality_tolerance(n);
    Ok(SolveReport {
        n,
        problem: if b.is_some() { "generalized" } else { "standard" },
        method,
        selection: sel,
        range: res.range,
        metrics: SolveMetrics {
            max_residual,
            orth_norm,
            residual_tolerance,
            orthogonality_tolerance,
            pass: max_residual <= residual_tolerance && orth_norm <= orthogonality_tolerance,
            level2_flops: res.meta.counts.level2_flops,
            level3_flops: res.meta.counts.level3_flops,
            times: StepTimes::from_meta(&res.meta),
        },
        values: if metric_only { None } else { Some(res.values) },
    })
}

pub fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => {
            let src = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            toml::from_str(&src).with_context(|| format!("invalid config {}", p.display()))
        }
        None => Ok(Config::default()),
    }
}
