//! Harness contracts: determinism of emitted reports, exit codes, and the
//! summary schema across experiment kinds.

use hamlab_cli::experiments::{run, RunOptions};
use hamlab_cli::report::emit_report;
use hamlab_cli::ExperimentConfig;

fn opts(seed: u64) -> RunOptions {
    RunOptions {
        seed,
        workers: 1,
        out: None,
    }
}

/// Structural check of the documented summary schema.
fn validate_schema(summary: &hamlab_cli::RunSummary, kind: &str) {
    assert_eq!(summary.experiment, kind);
    let json: serde_json::Value = serde_json::from_str(&summary.to_json()).unwrap();
    for key in [
        "experiment",
        "seed",
        "params",
        "results",
        "assertions",
        "pass",
    ] {
        assert!(json.get(key).is_some(), "{kind}: summary missing `{key}`");
    }
    for a in json["assertions"].as_array().unwrap() {
        for key in ["name", "passed", "value", "threshold"] {
            assert!(a.get(key).is_some(), "{kind}: assertion missing `{key}`");
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let config =
        ExperimentConfig::from_str_checked("[hubbard-exchange]\nt = 1.0\nu_values = 1e2 1e3 1e4\n")
            .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (s1, t1) = run("hubbard-exchange", &config, &opts(3)).unwrap();
    let (s2, t2) = run("hubbard-exchange", &config, &opts(3)).unwrap();
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    emit_report(&d1, &s1, &t1).unwrap();
    emit_report(&d2, &s2, &t2).unwrap();
    for name in ["summary.json", "hubbard_exchange.csv"] {
        let a = std::fs::read(d1.join(name)).unwrap();
        let b = std::fs::read(d2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn summary_schema_holds_across_kinds() {
    let cases = [
        (
            "sw-scan",
            "[sw-scan]\nlambda = 1.0\nb_values = 1e2 1e3 1e4\n",
        ),
        (
            "erasure-scan",
            "[erasure-scan]\nsites = 3\nb_values = 1e2 1e3 1e4\n",
        ),
        (
            "hubbard-exchange",
            "[hubbard-exchange]\nu_values = 1e2 1e3 1e4\n",
        ),
        (
            "gadget-verify",
            "[gadget-verify]\nkind = ising-to-xx\nb_values = 1e3\n",
        ),
    ];
    for (kind, text) in cases {
        let config = ExperimentConfig::from_str_checked(text).unwrap();
        let (summary, tables) = run(kind, &config, &opts(1)).unwrap();
        validate_schema(&summary, kind);
        assert!(summary.pass, "{kind} should pass at its defaults");
        for t in &tables {
            assert!(t.render().lines().count() >= 1);
        }
    }
}

#[test]
fn config_errors_exit_with_code_two() {
    let config = ExperimentConfig::from_str_checked("experiment = sw-scan\n").unwrap();
    let err = run("kp-band", &config, &opts(1)).unwrap_err();
    assert_eq!(err.exit_code(), 2);

    let bad_sweep = ExperimentConfig::from_str_checked("[sw-scan]\nb_values = 1e4 1e3\n").unwrap();
    let err = run("sw-scan", &bad_sweep, &opts(1)).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn binary_exit_codes() {
    // exit 2: malformed config file; exit 0: passing run.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "this is not a config\n").unwrap();
    let exe = env!("CARGO_BIN_EXE_hamlab");
    let out = std::process::Command::new(exe)
        .args(["sw-scan", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let good = dir.path().join("good.cfg");
    std::fs::write(
        &good,
        "[hubbard-exchange]\nt = 1.0\nu_values = 1e2 1e3 1e4\n",
    )
    .unwrap();
    let outdir = dir.path().join("report");
    let out = std::process::Command::new(exe)
        .args(["hubbard-exchange", "--config"])
        .arg(&good)
        .args(["--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(outdir.join("summary.json").exists());
    assert!(outdir.join("hubbard_exchange.csv").exists());

    // exit 2: unknown experiment.
    let out = std::process::Command::new(exe)
        .args(["make-coffee", "--config"])
        .arg(&good)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn header_only_csv_for_empty_sweeps() {
    let table = hamlab_cli::CsvTable::new("empty", &["x (units)"]);
    assert_eq!(table.render(), "x (units)\n");
}

#[test]
fn dft_accepts_density_from_file() {
    use hamlab_core::dft::SpinDensity;

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("density.json");
    let rho = SpinDensity::uniform(2, 2);
    std::fs::write(&path, rho.to_json()).unwrap();

    let config = ExperimentConfig::from_str_checked(&format!(
        "[dft-solve]\nsites = 2\nt = 1.0\nu = 4.0\nseeds = 0\nconvexity_pairs = 0\ndensity_json = {}\n",
        path.display()
    ))
    .unwrap();
    let (summary, _) = run("dft-solve", &config, &opts(5)).unwrap();
    let f = &summary.results["file_density_functional"];
    assert!(f["dual"].is_number());
    assert!(f["primal_oracle"].is_number());
    assert!(f["gap"].as_f64().unwrap() < 1e-3);
}
