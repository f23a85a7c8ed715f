use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hermeig::backend::create;
use hermeig::pencil::generate_pencil;
use hermeig::Method;
use hermeig_cli::plan::{Plan, Selection, LARGE_N};
use hermeig_cli::{load_blocks, load_config, load_problem, save_blocks, solve_problem, suite};

#[derive(Parser)]
#[command(name = "hermeig", version, about = "Hermitian-definite generalized eigensolver harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark plan and write CSV tables and SVG plots.
    Bench {
        /// Plan file (TOML). Without it the default plan is used.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long, default_value = "reference")]
        backend: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Permit sizes above 4096; adds n = 8000 to the default plan.
        #[arg(long)]
        large: bool,
        /// Run cases concurrently (correctness runs; timings are not comparable).
        #[arg(long)]
        parallel: bool,
    },
    /// Solve a matrix or pencil stored in a file.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Separate file holding B when the input holds only A.
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value = "two-stage")]
        method: Method,
        /// all, fraction:F or range:IL:IU
        #[arg(long, default_value = "all")]
        select: Selection,
        /// Print only the metrics, not the eigenvalues.
        #[arg(long)]
        metric_only: bool,
        #[arg(long, default_value = "reference")]
        backend: String,
        /// Solver configuration (TOML).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write a random Hermitian-definite pencil.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100.0)]
        cond_b: f64,
        #[arg(long)]
        out: PathBuf,
        /// Store only A.
        #[arg(long)]
        matrix_only: bool,
    },
    /// Convert between the text and .heig formats.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn bench(
    plan: Option<PathBuf>,
    out: PathBuf,
    backend: &str,
    seed: u64,
    large: bool,
    parallel: bool,
) -> Result<ExitCode> {
    create(backend)?;
    let plan = match &plan {
        Some(p) => Plan::from_toml(&fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?)?,
        None => Plan::default_plan(large),
    };
    plan.check(if large { usize::MAX } else { LARGE_N })?;
    let records = suite::run_plan(&plan, seed, backend, parallel)?;
    let summary = suite::write_outputs(&out, &records)?;
    for r in &summary {
        println!(
            "n={:<6} {:<10} {:<14} runs={} median_total={:.4}s max_residual={:.2e} {}",
            r.n,
            r.method,
            r.sel,
            r.runs,
            r.times.total,
            r.max_residual,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let failed: Vec<_> = records.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!("failed: n={} {} {} seed={}: {}", r.n, r.method, r.sel, r.seed, r.failures.join("; "));
    }
    println!("{} runs, {} failed; results in {}", records.len(), failed.len(), out.display());
    Ok(if failed.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Bench { plan, out, backend, seed, large, parallel } => bench(plan, out, &backend, seed, large, parallel),
        Command::Solve { input, b, method, select, metric_only, backend, config } => {
            let (a, bm) = load_problem(&input, b.as_deref())?;
            let cfg = load_config(config.as_deref())?;
            let be = create(&backend)?;
            let report = solve_problem(&a, bm.as_ref(), select, method, &cfg, be.as_ref(), metric_only)?;
            let json = if metric_only {
                serde_json::to_string_pretty(&report.metrics)?
            } else {
                serde_json::to_string_pretty(&report)?
            };
            println!("{json}");
            Ok(if report.metrics.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Gen { n, seed, cond_b, out, matrix_only } => {
            let (a, b) = generate_pencil(n, seed, cond_b)?;
            if matrix_only {
                save_blocks(&out, &[a.matrix()])?;
            } else {
                save_blocks(&out, &[a.matrix(), b.matrix()])?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert { input, out } => {
            let (_, blocks) = load_blocks(&input)?;
            let refs: Vec<_> = blocks.iter().collect();
            save_blocks(&out, &refs)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
