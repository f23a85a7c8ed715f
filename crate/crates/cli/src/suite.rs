//! Runs a plan: generates pencils, solves, verifies, records.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hermeig::backend::create;
use hermeig::oracle::generalized_oracle_values;
use hermeig::pencil::generate_pencil;
use hermeig::verify::{b_orthogonality, generalized_residuals};
use hermeig::{solve_generalized, Backend, DenseHermitian};

use crate::plan::{Plan, RunSpec};
use crate::plot;
use crate::record::{summarize, write_csv, write_summary_csv, Checksum, RunRecord, StepTimes, SummaryRow, SCHEMA_VERSION};

type Pencil = (DenseHermitian, DenseHermitian);

/// Solves one spec and checks it against the plan's tolerances.
pub fn run_one(spec: &RunSpec, plan: &Plan, pencil: &Pencil, backend: &dyn Backend) -> Result<RunRecord> {
    let (a, b) = pencil;
    let cfg = &plan.config;
    let n = spec.n;
    let sel = spec.sel.to_eigen();
    let res = solve_generalized(a, b, &sel, spec.method, cfg, backend)
        .with_context(|| format!("solve failed for n = {n}, {}, {}", spec.method, spec.sel))?;
    let x = res.vectors.as_ref().context("solver returned no vectors")?;

    let max_residual = generalized_residuals(a, b, &res.values, x).into_iter().fold(0.0, f64::max);
    let orth_norm = b_orthogonality(b, x);
    let mut failures = Vec::new();
    let (il, iu) = sel.resolve(n)?;
    if res.values.len() != iu + 1 - il || res.range != (il, iu) {
        failures.push(format!("expected pairs {il}..={iu}, got {:?}", res.range));
    }
    if !res.values.iter().all(|v| v.is_finite()) || !res.values.windows(2).all(|w| w[0] <= w[1]) {
        failures.push("eigenvalues not finite and ascending".into());
    }
    let res_tol = cfg.residual_tolerance(n);
    if !(max_residual <= res_tol) {
        failures.push(format!("residual {max_residual:e} above {res_tol:e}"));
    }
    let orth_tol = cfg.orthogonality_tolerance(n);
    if !(orth_norm <= orth_tol) {
        failures.push(format!("orthogonality {orth_norm:e} above {orth_tol:e}"));
    }
    let oracle_error = if n <= plan.oracle_max_n {
        let oracle = generalized_oracle_values(a, b)?;
        let scale = oracle.iter().fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));
        let err = res
            .values
            .iter()
            .zip(&oracle[il - 1..iu])
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if !(err <= plan.oracle_tolerance * scale) {
            failures.push(format!("oracle deviation {err:e} above {:e}", plan.oracle_tolerance * scale));
        }
        Some(err)
    } else {
        None
    };

    Ok(RunRecord {
        schema_version: SCHEMA_VERSION,
        n,
        method: spec.method,
        sel: spec.sel,
        seed: spec.seed,
        repeat: spec.repeat,
        config: cfg.clone(),
        times: StepTimes::from_meta(&res.meta),
        level2_flops: res.meta.counts.level2_flops,
        level3_flops: res.meta.counts.level3_flops,
        max_residual,
        orth_norm,
        oracle_error,
        checksum: Checksum::of(&res.values),
        pass: failures.is_empty(),
        failures,
    })
}

fn run_sequential(specs: &[RunSpec], plan: &Plan, backend: &dyn Backend) -> Result<Vec<RunRecord>> {
    let mut pencils: HashMap<(usize, u64), Pencil> = HashMap::new();
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let key = (spec.n, spec.seed);
        if !pencils.contains_key(&key) {
            pencils.clear();
            pencils.insert(key, generate_pencil(spec.n, spec.seed, plan.cond_b)?);
        }
        out.push(run_one(spec, plan, &pencils[&key], backend)?);
    }
    Ok(out)
}

/// Runs every spec of the plan in order. With `parallel`, specs are spread
/// over threads, each with its own backend instance; metrics are unchanged
/// but timings are not meaningful.
pub fn run_plan(plan: &Plan, seed: u64, backend_name: &str, parallel: bool) -> Result<Vec<RunRecord>> {
    let specs = plan.expand(seed);
    if !parallel || specs.len() < 2 {
        let backend = create(backend_name)?;
        return run_sequential(&specs, plan, backend.as_ref());
    }
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get()).min(specs.len());
    let chunks: Vec<Vec<(usize, RunSpec)>> = (0..threads)
        .map(|t| specs.iter().cloned().enumerate().skip(t).step_by(threads).collect())
        .collect();
    let results: Vec<Result<Vec<(usize, RunRecord)>>> = std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                s.spawn(move || -> Result<Vec<(usize, RunRecord)>> {
                    let backend = create(backend_name)?;
                    let mut out = Vec::new();
                    for (i, spec) in chunk {
                        let pencil = generate_pencil(spec.n, spec.seed, plan.cond_b)?;
                        out.push((*i, run_one(spec, plan, &pencil, backend.as_ref())?));
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect()
    });
    let mut all = Vec::with_capacity(specs.len());
    for r in results {
        all.extend(r?);
    }
    all.sort_by_key(|(i, _)| *i);
    Ok(all.into_iter().map(|(_, r)| r).collect())
}

/// Writes `runs.csv`, `runs.json`, `summary.csv` and one plot per selection.
pub fn write_outputs(dir: &Path, records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let summary = summarize(records);
    let mut csv = Vec::new();
    write_csv(&mut csv, records)?;
    fs::write(dir.join("runs.csv"), csv)?;
    fs::write(dir.join("runs.json"), serde_json::to_string_pretty(records)?)?;
    let mut sum = Vec::new();
    write_summary_csv(&mut sum, &summary)?;
    fs::write(dir.join("summary.csv"), sum)?;
    for (name, svg) in plot::plots(&summary) {
        fs::write(dir.join(name), svg)?;
    }
    Ok(summary)
}
