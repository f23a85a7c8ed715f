use std::fs;
use std::path::Path;
use std::process::Command;

use hermeig::Method;
use hermeig_cli::plan::{Plan, Selection, Sizes, PAPER_N};
use hermeig_cli::record::{summarize, write_csv, CSV_COLUMNS, TIMING_COLUMNS};
use hermeig_cli::suite::{run_plan, write_outputs};

fn hermeig() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hermeig"))
}

fn metric_columns(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let keep: Vec<usize> = (0..header.len()).filter(|&i| !TIMING_COLUMNS.contains(&header[i])).collect();
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            keep.iter().map(|&i| f[i].to_string()).collect()
        })
        .collect()
}

#[test]
fn selection_syntax() {
    assert_eq!("all".parse::<Selection>().unwrap(), Selection::All);
    assert_eq!("fraction:0.1".parse::<Selection>().unwrap(), Selection::Fraction(0.1));
    assert_eq!("range:2:5".parse::<Selection>().unwrap(), Selection::Range(2, 5));
    for bad in ["some", "fraction:0", "fraction:1.5", "range:0:3", "range:4:3", "range:1"] {
        assert!(bad.parse::<Selection>().is_err(), "{bad}");
    }
    for s in [Selection::All, Selection::Fraction(0.25), Selection::Range(3, 9)] {
        assert_eq!(s.to_string().parse::<Selection>().unwrap(), s);
    }
    assert_eq!(Selection::Range(1, 5).fraction_of(10), 0.5);
}

#[test]
fn plan_parsing_and_expansion() {
    let plan = Plan::from_toml(
        r#"
        cond_b = 10.0
        [config]
        band_width = 16
        [[case]]
        n = 512
        methods = ["one-stage", "two-stage"]
        selections = ["all", "fraction:0.1"]
        repeats = 3
        [[case]]
        n = [8, 16]
        methods = ["two-stage"]
        seed = 99
        "#,
    )
    .unwrap();
    assert_eq!(plan.cond_b, 10.0);
    assert_eq!(plan.config.band_width, 16);
    assert_eq!(plan.config.panel_width, hermeig::Config::default().panel_width);
    assert_eq!(plan.cases[0].n, Sizes::One(512));
    let specs = plan.expand(7);
    assert_eq!(specs.len(), 12 + 2);
    assert!(specs[..12].iter().all(|s| s.seed == 7 && s.n == 512));
    assert_eq!(specs.iter().filter(|s| s.method == Method::OneStage).count(), 6);
    assert!(specs[12..].iter().all(|s| s.seed == 99 && s.method == Method::TwoStage && s.sel == Selection::All));

    assert!(Plan::from_toml("[[case]]\nn = 4\nrepeats = 0\n").is_err());
    assert!(Plan::from_toml("[[case]]\nn = 4\nmethod = [\"one-stage\"]\n").is_err());
    assert!(Plan::from_toml("[[case]]\nn = 4\nselections = [\"range:3:9\"]\n").is_err());
    assert!(Plan::from_toml("[config]\nblock = 3\n").is_err());
    assert!(Plan::from_toml("").unwrap().expand(0).is_empty());
}

#[test]
fn default_plan_mirrors_comparison_sizes() {
    let plan = Plan::default_plan(false);
    let specs = plan.expand(0);
    let mut ns: Vec<usize> = specs.iter().map(|s| s.n).collect();
    ns.dedup();
    assert_eq!(ns, vec![512, 1024, 2048]);
    assert_eq!(specs.len(), 3 * 2 * 2 * 3);
    assert!(plan.check(4096).is_ok());
    let large = Plan::default_plan(true);
    assert!(large.expand(0).iter().any(|s| s.n == PAPER_N));
    assert!(large.check(4096).is_err());
    assert!(large.check(usize::MAX).is_ok());
}

#[test]
fn desk_scale_plan_produces_twelve_passing_rows() {
    let plan = Plan::from_toml(
        "[[case]]\nn = 512\nmethods = [\"one-stage\", \"two-stage\"]\nselections = [\"all\", \"fraction:0.1\"]\nrepeats = 3\n",
    )
    .unwrap();
    let records = run_plan(&plan, 1, "reference", false).unwrap();
    assert_eq!(records.len(), 12);
    assert!(records.iter().all(|r| r.pass), "{:?}", records.iter().map(|r| &r.failures).collect::<Vec<_>>());
    let summary = summarize(&records);
    assert_eq!(summary.len(), 4);
    assert!(summary.iter().all(|s| s.runs == 3 && s.pass));
    for r in &records {
        assert!(r.times.total >= r.times.dc);
        assert!(r.level3_flops > 0);
        assert!(r.checksum.min <= r.checksum.max);
    }
}

#[test]
fn oracle_check_runs_on_small_sizes() {
    let plan = Plan::from_toml("[[case]]\nn = [5, 40]\nselections = [\"all\", \"range:2:4\"]\n").unwrap();
    let records = run_plan(&plan, 4, "reference", false).unwrap();
    assert!(records.iter().all(|r| r.pass && r.oracle_error.unwrap() <= 1e-12));
    let tight = Plan::from_toml("oracle_tolerance = 0.0\n[[case]]\nn = 40\n").unwrap();
    let records = run_plan(&tight, 4, "reference", false).unwrap();
    assert!(records.iter().any(|r| !r.pass));
}

#[test]
fn parallel_mode_matches_sequential_metrics() {
    let plan = Plan::from_toml("[[case]]\nn = [24, 33]\nselections = [\"all\", \"fraction:0.2\"]\nrepeats = 2\n").unwrap();
    let a = run_plan(&plan, 2, "reference", false).unwrap();
    let b = run_plan(&plan, 2, "reference", true).unwrap();
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    write_csv(&mut ca, &a).unwrap();
    write_csv(&mut cb, &b).unwrap();
    assert_eq!(
        metric_columns(std::str::from_utf8(&ca).unwrap()),
        metric_columns(std::str::from_utf8(&cb).unwrap())
    );
}

#[test]
fn outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let plan = Plan::from_toml("[[case]]\nn = [12, 20]\nselections = [\"all\", \"fraction:0.5\"]\n").unwrap();
    let records = run_plan(&plan, 0, "reference", false).unwrap();
    write_outputs(dir.path(), &records).unwrap();
    let csv = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), CSV_COLUMNS.join(","));
    assert!(csv.lines().next().unwrap().starts_with("schema_version,"));
    assert_eq!(csv.lines().count(), 1 + 8);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("runs.json")).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 8);
    assert!(json[0]["config"]["band_width"].is_u64());
    for f in ["summary.csv", "time_all.svg", "steps_all.svg", "time_fraction-0.5.svg", "steps_fraction-0.5.svg"] {
        let body = fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(!body.is_empty(), "{f}");
        if f.ends_with(".svg") {
            assert!(body.starts_with("<svg") && body.trim_end().ends_with("</svg>"));
        }
    }
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn bench_command_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.toml", "");
    let out = dir.path().join("empty_out");
    let st = hermeig().args(["bench", "--plan"]).arg(&empty).arg("--out").arg(&out).status().unwrap();
    assert!(st.success());
    assert_eq!(fs::read_to_string(out.join("runs.csv")).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));

    let strict = write(dir.path(), "strict.toml", "[config]\nresidual_factor = 1e-9\n[[case]]\nn = 16\n");
    let st = hermeig().args(["bench", "--plan"]).arg(&strict).arg("--out").arg(dir.path().join("s")).status().unwrap();
    assert_eq!(st.code(), Some(1));

    let big = write(dir.path(), "big.toml", "[[case]]\nn = 8000\n");
    let st = hermeig().args(["bench", "--plan"]).arg(&big).arg("--out").arg(dir.path().join("b")).status().unwrap();
    assert_eq!(st.code(), Some(2));

    let st = hermeig()
        .args(["bench", "--backend", "nope", "--plan"])
        .arg(&empty)
        .arg("--out")
        .arg(dir.path().join("n"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
}

#[test]
fn gen_convert_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let pencil = dir.path().join("p.heig");
    assert!(hermeig().args(["gen", "--n", "18", "--seed", "5", "--out"]).arg(&pencil).status().unwrap().success());

    let out = hermeig().args(["solve", "--select", "fraction:0.5", "--input"]).arg(&pencil).output().unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["problem"], "generalized");
    assert_eq!(report["values"].as_array().unwrap().len(), 9);
    assert_eq!(report["metrics"]["pass"], true);

    let out = hermeig().args(["solve", "--metric-only", "--input"]).arg(&pencil).output().unwrap();
    let metrics: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(metrics.get("values").is_none());
    assert!(metrics["max_residual"].as_f64().unwrap() <= metrics["residual_tolerance"].as_f64().unwrap());

    let a_txt = dir.path().join("a.txt");
    assert!(hermeig().args(["gen", "--n", "6", "--matrix-only", "--out"]).arg(&a_txt).status().unwrap().success());
    let a_bin = dir.path().join("a.heig");
    assert!(hermeig().args(["convert", "--input"]).arg(&a_txt).arg("--out").arg(&a_bin).status().unwrap().success());
    let back = dir.path().join("back.txt");
    assert!(hermeig().args(["convert", "--input"]).arg(&a_bin).arg("--out").arg(&back).status().unwrap().success());
    assert_eq!(fs::read_to_string(&a_txt).unwrap(), fs::read_to_string(&back).unwrap());

    let b_txt = write(dir.path(), "b.txt", &(0..6).map(|i| (0..6).map(|j| if i == j { "2" } else { "0" }).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n"));
    let out = hermeig().args(["solve", "--method", "one-stage", "--input"]).arg(&a_bin).arg("--b").arg(&b_txt).output().unwrap();
    assert!(out.status.success());
    let gen: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let out = hermeig().args(["solve", "--method", "one-stage", "--input"]).arg(&a_bin).output().unwrap();
    let std: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(std["problem"], "standard");
    for (g, s) in gen["values"].as_array().unwrap().iter().zip(std["values"].as_array().unwrap()) {
        assert!((g.as_f64().unwrap() * 2.0 - s.as_f64().unwrap()).abs() < 1e-13);
    }

    let nonherm = write(dir.path(), "nh.txt", "1 2\n3 4\n");
    let st = hermeig().args(["solve", "--input"]).arg(&nonherm).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = hermeig().args(["solve", "--input"]).arg(&pencil).arg("--b").arg(&b_txt).status().unwrap();
    assert_eq!(st.code(), Some(2));
}
