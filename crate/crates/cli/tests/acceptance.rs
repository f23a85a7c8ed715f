//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use hermeig::backtransform::{apply_q, backtransform_standard, complexify};
use hermeig::dc::{dc_solve, deflate, secular_solve, MergeProblem};
use hermeig::oracle::{generalized_oracle_values, jacobi_eigh_real};
use hermeig::pencil::generate_pencil;
use hermeig::tridiag::{tridiagonalize_one_stage, tridiagonalize_two_stage};
use hermeig::verify::{b_orthogonality, generalized_residuals, standard_residuals};
use hermeig::{
    c64, solve_generalized, solve_standard, symmetrize, CMat, Config, DenseHermitian, EigenSelection, Error,
    Method, RMat, RealSymTridiagonal, ReferenceBackend, Step,
};
use hermeig_cli::record::TIMING_COLUMNS;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = f64::EPSILON;
const COND_B: f64 = 100.0;

const C1_PENCILS: usize = 50;
const C1_SIZES: [usize; 4] = [8, 16, 32, 64];
const C1_TOL: f64 = 1e-12;
const C1_BUDGET: Duration = Duration::from_secs(60);

const C2_SIZES: [usize; 2] = [256, 512];
const C2_FACTOR: f64 = 100.0;
const C2_BUDGET: Duration = Duration::from_secs(300);

const C3_SEEDS: u64 = 20;
const C3_SIZES: [usize; 4] = [32, 64, 128, 256];
const C3_TOL: f64 = 1e-12;

const C4_N: usize = 256;
const C4_ONE_STAGE_TARGET: f64 = 0.50;
const C4_ONE_STAGE_SLACK: f64 = 0.05;
const C4_BAND: usize = 32;
const C4_STAGE1_MAX: f64 = 0.15;

const C5_N: usize = 1024;
const C5_FRACTION: f64 = 0.1;
const C5_RATIO_MAX: f64 = 0.2;

const C6_PROBLEMS: usize = 1000;
const C6_DEFLATED_TOL: f64 = 1e-13;
const C6_ANALYTIC_TOL: f64 = 1e-14;

const C7_FACTOR: f64 = 100.0;

struct Outcome {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { id, name, pass, detail }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let be = ReferenceBackend::new();
    let cfg = Config::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;
    for seed in 0..C1_PENCILS {
        let n = C1_SIZES[seed % C1_SIZES.len()];
        let (a, b) = generate_pencil(n, seed as u64, COND_B).unwrap();
        let oracle = generalized_oracle_values(&a, &b).unwrap();
        let norm = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for method in Method::ALL {
            let r = solve_generalized(&a, &b, &EigenSelection::all().values_only(), method, &cfg, &be).unwrap();
            let err = max_abs_diff(&r.values, &oracle) / norm;
            worst = worst.max(err);
            pass &= err <= C1_TOL;
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < C1_BUDGET;
    outcome(
        "1",
        "generalized eigenvalues vs Jacobi oracle",
        pass,
        format!("worst |dl|/||T||_2 = {worst:.2e} (bound {C1_TOL:e}), {:.1}s (budget {}s)", elapsed.as_secs_f64(), C1_BUDGET.as_secs()),
    )
}

fn criterion_2() -> Outcome {
    let be = ReferenceBackend::new();
    let cfg = Config::default();
    let start = Instant::now();
    let (mut worst_res, mut worst_orth, mut pass) = (0.0f64, 0.0f64, true);
    for (k, &n) in C2_SIZES.iter().enumerate() {
        let (a, b) = generate_pencil(n, 1000 + k as u64, COND_B).unwrap();
        let bound = C2_FACTOR * n as f64 * EPS;
        for method in Method::ALL {
            let r = solve_generalized(&a, &b, &EigenSelection::all(), method, &cfg, &be).unwrap();
            let x = r.vectors.as_ref().unwrap();
            let res = generalized_residuals(&a, &b, &r.values, x).into_iter().fold(0.0, f64::max);
            let orth = b_orthogonality(&b, x);
            worst_res = worst_res.max(res / bound);
            worst_orth = worst_orth.max(orth / bound);
            pass &= res <= bound && orth <= bound;
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < C2_BUDGET;
    outcome(
        "2",
        "residual and B-orthogonality at n = 256, 512",
        pass,
        format!(
            "worst residual {worst_res:.2e} x bound, worst orthogonality {worst_orth:.2e} x bound (bound {C2_FACTOR}*n*eps), {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let be = ReferenceBackend::new();
    let cfg = Config::default();
    let mut worst = 0.0f64;
    for seed in 0..C3_SEEDS {
        let n = C3_SIZES[seed as usize % C3_SIZES.len()];
        let (a, _) = generate_pencil(n, 2000 + seed, COND_B).unwrap();
        let sel = EigenSelection::all().values_only();
        let one = solve_standard(&a, &sel, Method::OneStage, &cfg, &be).unwrap();
        let two = solve_standard(&a, &sel, Method::TwoStage, &cfg, &be).unwrap();
        worst = worst.max(max_abs_diff(&one.values, &two.values));
    }
    outcome(
        "3",
        "one-stage vs two-stage eigenvalues",
        worst <= C3_TOL,
        format!("worst absolute difference {worst:.2e} over {C3_SEEDS} seeds (bound {C3_TOL:e})"),
    )
}

fn criterion_4a() -> Outcome {
    let be = ReferenceBackend::new();
    let (a, _) = generate_pencil(C4_N, 4, COND_B).unwrap();
    let r = tridiagonalize_one_stage(&a, Config::default().panel_width, &be).unwrap();
    let f = r.level2_fraction();
    outcome(
        "4a",
        "one-stage level-2 fraction",
        (f - C4_ONE_STAGE_TARGET).abs() <= C4_ONE_STAGE_SLACK,
        format!("{f:.4} at n = {C4_N} (target {C4_ONE_STAGE_TARGET} +/- {C4_ONE_STAGE_SLACK})"),
    )
}

fn criterion_4b() -> Outcome {
    let be = ReferenceBackend::new();
    let (a, _) = generate_pencil(C4_N, 4, COND_B).unwrap();
    let r = tridiagonalize_two_stage(&a, C4_BAND, &be).unwrap();
    let f = r.stage_counts[0].level2_fraction();
    outcome(
        "4b",
        "two-stage stage-1 level-2 fraction",
        f <= C4_STAGE1_MAX,
        format!("{f:.4} at n = {C4_N}, b = {C4_BAND} (bound {C4_STAGE1_MAX})"),
    )
}

fn backtransform_flops(meta: &hermeig::SolveMeta) -> u64 {
    [Step::Backtransform, Step::BacktransformGeneralized]
        .iter()
        .filter_map(|s| meta.step(*s))
        .map(|r| r.level2_flops + r.level3_flops)
        .sum()
}

fn criterion_5() -> (Outcome, Outcome) {
    let be = ReferenceBackend::new();
    let cfg = Config::default();
    let (a, b) = generate_pencil(C5_N, 5, COND_B).unwrap();
    let partial = EigenSelection::fraction(C5_FRACTION);
    let two_full = solve_generalized(&a, &b, &EigenSelection::all(), Method::TwoStage, &cfg, &be).unwrap();
    let two_part = solve_generalized(&a, &b, &partial, Method::TwoStage, &cfg, &be).unwrap();
    let one_part = solve_generalized(&a, &b, &partial, Method::OneStage, &cfg, &be).unwrap();

    let (bt_full, bt_part) = (backtransform_flops(&two_full.meta), backtransform_flops(&two_part.meta));
    let ratio = bt_part as f64 / bt_full as f64;
    let a5 = outcome(
        "5a",
        "partial-eigenspace backtransform flops",
        bt_part < bt_full && ratio <= C5_RATIO_MAX,
        format!("two-stage fraction {C5_FRACTION} / full = {bt_part} / {bt_full} = {ratio:.4} (bound {C5_RATIO_MAX}) at n = {C5_N}"),
    );
    let (t2, t1) = (two_part.meta.counts.total_flops(), one_part.meta.counts.total_flops());
    let b5 = outcome(
        "5b",
        "two-stage partial total flops below one-stage partial",
        t2 < t1,
        format!("two-stage {t2} vs one-stage {t1} ({:.3}x)", t2 as f64 / t1 as f64),
    );
    (a5, b5)
}

fn criterion_6a() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0usize;
    for _ in 0..C6_PROBLEMS {
        let k = rng.random_range(1..=50);
        let mut d: Vec<f64> = (0..k).map(|_| rng.random_range(-10.0..10.0)).collect();
        d.sort_by(f64::total_cmp);
        d.dedup();
        let k = d.len();
        let z: Vec<f64> = (0..k)
            .map(|_| rng.random_range(0.01..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let rho = rng.random_range(0.01..5.0);
        let z2: f64 = z.iter().map(|x| x * x).sum();
        for i in 0..k {
            let Ok(r) = secular_solve(&d, &z, rho, i) else {
                violations += 1;
                continue;
            };
            let lam = r.value(&d);
            let upper_ok = if i + 1 < k {
                r.delta(&d, i + 1) > 0.0 && lam < d[i + 1]
            } else {
                lam <= d[i] + rho * z2 * (1.0 + 4.0 * EPS)
            };
            if !(r.delta(&d, i) < 0.0 && lam > d[i] && upper_ok) {
                violations += 1;
            }
        }
    }
    outcome(
        "6a",
        "secular roots interlace",
        violations == 0,
        format!("{violations} violations over {C6_PROBLEMS} random problems"),
    )
}

fn rank_one_oracle(d: &[f64], u: &[f64], rho: f64) -> Vec<f64> {
    let n = d.len();
    let dense = RMat::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 } + rho * u[i] * u[j]);
    jacobi_eigh_real(&dense).unwrap().0
}

fn criterion_6b() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut worst = 0.0f64;
    let mut deflated_total = 0usize;
    for _ in 0..200 {
        let n = rng.random_range(2..=30);
        let distinct: Vec<f64> = (0..n / 2 + 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d: Vec<f64> = (0..n).map(|_| distinct[rng.random_range(0..distinct.len())]).collect();
        let mut u: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.25) { 0.0 } else { rng.random_range(-1.0..1.0) })
            .collect();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        u.iter_mut().for_each(|x| *x /= norm);
        let rho = rng.random_range(0.1..2.0);
        let mp = MergeProblem::new(d.clone(), u.clone(), rho, n / 2);
        let tol = mp.tolerance();
        let mp = deflate(mp, tol);
        deflated_total += mp.deflated.len();
        let (poles, w) = (mp.poles(), mp.weights());
        let mut vals: Vec<f64> = mp.deflated.iter().map(|&i| mp.d[i]).collect();
        for i in 0..poles.len() {
            vals.push(secular_solve(&poles, &w, rho, i).unwrap().value(&poles));
        }
        vals.sort_by(f64::total_cmp);
        worst = worst.max(max_abs_diff(&vals, &rank_one_oracle(&d, &u, rho)));
    }

    let be = ReferenceBackend::new();
    let wilkinson = {
        let m = 21;
        let d = (0..m).map(|i| (i as f64 - 10.0).abs()).collect();
        RealSymTridiagonal::new(d, vec![1.0; m - 1]).unwrap()
    };
    let glued = {
        let mut e = vec![1.0; 59];
        for k in [14, 29, 44] {
            e[k] = 1e-15;
        }
        RealSymTridiagonal::new((0..60).map(|i| ((i % 15) as f64) / 15.0).collect(), e).unwrap()
    };
    let repeated = RealSymTridiagonal::new(vec![0.5; 80], (0..79).map(|i| if i % 3 == 0 { 0.0 } else { 1e-3 }).collect()).unwrap();
    for t in [wilkinson, glued, repeated] {
        let r = dc_solve(&t, &EigenSelection::all().values_only(), &be).unwrap();
        let oracle = jacobi_eigh_real(&t.to_dense()).unwrap().0;
        worst = worst.max(max_abs_diff(&r.values, &oracle));
    }
    outcome(
        "6b",
        "deflated problems match oracle",
        worst <= C6_DEFLATED_TOL && deflated_total > 0,
        format!("worst error {worst:.2e} (bound {C6_DEFLATED_TOL:e}), {deflated_total} deflations exercised"),
    )
}

fn criterion_6c() -> Outcome {
    let d = [0.0, 1.0];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = [h, h];
    let expect = [(2.0 - 2f64.sqrt()) / 2.0, (2.0 + 2f64.sqrt()) / 2.0];
    let got: Vec<f64> = (0..2).map(|i| secular_solve(&d, &z, 1.0, i).unwrap().value(&d)).collect();
    let err = max_abs_diff(&got, &expect);
    outcome(
        "6c",
        "two-pole analytic case",
        err <= C6_ANALYTIC_TOL,
        format!("roots {:.16}, {:.16}; error {err:.1e} (bound {C6_ANALYTIC_TOL:e})", got[0], got[1]),
    )
}

fn criterion_7a() -> Outcome {
    let be = ReferenceBackend::new();
    let b = symmetrize(&CMat::from_fn(2, 2, |i, j| c64::new(if i == j { 1.0 } else { 2.0 }, 0.0))).unwrap();
    let a = DenseHermitian::identity(2);
    let mut seen = Vec::new();
    for method in Method::ALL {
        match solve_generalized(&a, &b, &EigenSelection::all(), method, &Config::default(), &be) {
            Err(Error::NotPositiveDefinite { pivot_index }) => seen.push(Some(pivot_index)),
            _ => seen.push(None),
        }
    }
    outcome(
        "7a",
        "indefinite B reports pivot",
        seen.iter().all(|p| *p == Some(1)),
        format!("B = [[1,2],[2,1]] -> pivot {seen:?} (expected 1)"),
    )
}

fn criterion_7b() -> Outcome {
    let be = ReferenceBackend::new();
    let n = 64;
    let (a, _) = generate_pencil(n, 7, COND_B).unwrap();
    let res = tridiagonalize_two_stage(&a, 8, &be).unwrap();
    let (values, yp) = jacobi_eigh_real(&res.t.to_dense()).unwrap();
    let bound = C7_FACTOR * n as f64 * EPS * a.frobenius_norm();
    let max_res = |x: &CMat| standard_residuals(&a, &values, x).into_iter().fold(0.0, f64::max);

    let good = max_res(&backtransform_standard(&res, &yp, &be).unwrap());
    let mut reversed = complexify(&yp);
    for set in &res.stages {
        apply_q(set, reversed.as_mut(), &be).unwrap();
    }
    let bad = max_res(&reversed);
    outcome(
        "7b",
        "reversed two-stage backtransform fails residual bound",
        good <= bound && bad > bound,
        format!("correct order {good:.2e}, reversed {bad:.2e} (bound {bound:.2e})"),
    )
}

fn strip_timing(csv: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let keep: Vec<usize> = (0..header.len()).filter(|&i| !TIMING_COLUMNS.contains(&header[i])).collect();
    std::iter::once(keep.iter().map(|&i| header[i]).collect::<Vec<_>>().join(","))
        .chain(lines.map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            keep.iter().map(|&i| f[i]).collect::<Vec<_>>().join(",")
        }))
        .collect()
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.toml");
    fs::write(
        &plan,
        "[[case]]\nn = [24, 64]\nmethods = [\"one-stage\", \"two-stage\"]\nselections = [\"all\", \"fraction:0.1\"]\nrepeats = 2\n",
    )
    .unwrap();
    let mut csvs = Vec::new();
    let mut ok = true;
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let st = Command::new(env!("CARGO_BIN_EXE_hermeig"))
            .args(["bench", "--backend", "reference", "--seed", "42", "--plan"])
            .arg(&plan)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        ok &= st.status.success();
        csvs.push(fs::read_to_string(out.join("runs.csv")).unwrap_or_default());
    }
    let (a, b) = (strip_timing(&csvs[0]), strip_timing(&csvs[1]));
    let rows = a.len().saturating_sub(1);
    outcome(
        "8",
        "bench determinism modulo timings",
        ok && rows == 16 && a == b,
        format!("{rows} rows per run, metric columns identical: {}", a == b),
    )
}

fn main() {
    let mut results: Vec<Outcome> = Vec::new();
    let mut report = |o: Outcome| {
        println!("criterion {:<3} {}  {}: {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
        results.push(o);
    };
    report(criterion_1());
    report(criterion_2());
    report(criterion_3());
    report(criterion_4a());
    report(criterion_4b());
    let (a5, b5) = criterion_5();
    report(a5);
    report(b5);
    report(criterion_6a());
    report(criterion_6b());
    report(criterion_6c());
    report(criterion_7a());
    report(criterion_7b());
    report(criterion_8());
    let failed: Vec<&str> = results.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
