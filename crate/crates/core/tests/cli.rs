//! End-to-end runs of the `triwell` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn triwell(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triwell"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn spectrum_of_two_bosons() {
    let dir = tempfile::tempdir().unwrap();
    let o = triwell(dir.path(), &["--n", "2", "spectrum"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.path().join("energies.csv");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# triwell 0.1.0 config-hash "));
    let lines = data_lines(&path);
    assert_eq!(lines[0], "index,E,E_over_N");
    assert_eq!(lines.len(), 7);
    let e: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(e.windows(2).all(|w| w[0] <= w[1]));
    // trace of H: sum over the six Fock states of the diagonal
    let trace: f64 = e.iter().sum();
    assert!((trace - 5.6).abs() < 1e-12, "trace {trace}");
}

#[test]
fn warm_cache_skips_diagonalization() {
    let dir = tempfile::tempdir().unwrap();
    let cold = triwell(dir.path(), &["--n", "8", "spectrum"]);
    assert!(stderr(&cold).contains("diagonalizing"));
    assert!(!stderr(&cold).contains("warm cache"));
    let first = fs::read(dir.path().join("energies.csv")).unwrap();
    let warm = triwell(dir.path(), &["--n", "8", "spectrum"]);
    assert!(warm.status.success());
    assert!(stderr(&warm).contains("warm cache"));
    assert!(!stderr(&warm).contains("diagonalizing"));
    assert_eq!(fs::read(dir.path().join("energies.csv")).unwrap(), first);
}

#[test]
fn project_writes_grid_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let o = triwell(dir.path(), &["--n", "12", "project", "--near", "0.0752", "--dense", "--power", "0.25"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let grids: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("fock-k") && n.ends_with(".csv"))
        .collect();
    assert_eq!(grids.len(), 1);
    let stem = grids[0].trim_end_matches(".csv");
    let meta = json(&dir.path().join(format!("{stem}.json")));
    assert_eq!(meta["kind"], "fock");
    assert_eq!(meta["power"], 0.25);
    assert!((meta["normalization"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(meta["provenance"]["config_hash"].is_string());
    // the CSV keeps raw probabilities, the dense export is transformed
    let raw: f64 = data_lines(&dir.path().join(&grids[0]))[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((raw - 1.0).abs() < 1e-12);
    assert_eq!(data_lines(&dir.path().join(format!("{stem}.dat"))).len(), 13);

    let o = triwell(dir.path(), &["--n", "12", "project", "--index", "5", "--husimi"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&dir.path().join("husimi-k5.json"))["kind"], "husimi");
}

#[test]
fn self_comparison_correlates_perfectly() {
    let dir = tempfile::tempdir().unwrap();
    assert!(triwell(dir.path(), &["--n", "10", "project", "--index", "20"]).status.success());
    let grid = dir.path().join("fock-k20.csv");
    let g = grid.to_str().unwrap();
    let o = triwell(dir.path(), &["compare", g, g]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = json(&dir.path().join("compare.json"));
    assert_eq!(report["pearson"], 1.0);
    assert_eq!(report["peak_distance"], 0.0);
}

#[test]
fn disjoint_supports_warn() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dat");
    let b = dir.path().join("b.dat");
    fs::write(&a, "1 0\n0 0\n").unwrap();
    fs::write(&b, "0 0\n0 1\n").unwrap();
    let o = triwell(dir.path(), &["compare", "--bins", "2", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = json(&dir.path().join("compare.json"));
    assert_eq!(report["pearson"], 0.0);
    assert_eq!(report["common_support"], 0);
    assert_eq!(report["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(triwell(d, &["--n", "0", "spectrum"]).status.code(), Some(2));
    assert_eq!(triwell(d, &["--bogus", "spectrum"]).status.code(), Some(2));
    let cfg = d.join("bad.toml");
    fs::write(&cfg, "[model]\nnn = 3\n").unwrap();
    assert_eq!(triwell(d, &["--config", cfg.to_str().unwrap(), "spectrum"]).status.code(), Some(2));
    assert_eq!(triwell(d, &["--n", "3", "project", "--index", "99"]).status.code(), Some(2));
    assert_eq!(triwell(d, &["--n", "3", "project"]).status.code(), Some(2));
    let a = d.join("a.dat");
    fs::write(&a, "1 0\n0 0\n").unwrap();
    let g = d.join("g.csv");
    fs::write(&g, "n1,n3,value\n0,0,1\n1,0,0\n0,1,0\n").unwrap();
    let o = triwell(d, &["compare", a.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "2 x 2 histogram against a grid binned at 200");

    let starved = d.join("starved.toml");
    fs::write(&starved, "[classical]\nt_final = 10.0\n[classical.integrator]\nmax_steps = 1\n").unwrap();
    let o = triwell(d, &["--config", starved.to_str().unwrap(), "classical"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let file = d.join("not-a-dir");
    fs::write(&file, "").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_triwell")).args(["--n", "2", "--out"]).arg(&file).arg("spectrum").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--n", "20", "--seed", "7", "classical", "--recipe", "ensemble", "--seeds", "12", "--t-short", "20"];
    for d in [a.path(), b.path()] {
        let o = triwell(d, &args);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["ensemble-section.csv", "ensemble-section.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let meta = json(&a.path().join("ensemble-section.json"));
    assert_eq!(meta["seeds"], 12);
    assert_ne!(meta["grid_offset"], 0.5);
    assert!(meta["events"].as_u64().unwrap() > 0);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(&cfg, "[model]\nn = 3\nepsilon = 0.0\n").unwrap();
    let o = triwell(dir.path(), &["--config", cfg.to_str().unwrap(), "--n", "4", "spectrum"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(data_lines(&dir.path().join("energies.csv")).len(), 16);
    let resolved = fs::read_to_string(dir.path().join("config.toml")).unwrap();
    assert!(resolved.contains("n = 4"));
    assert!(resolved.contains("epsilon = 0.0"));
}

#[test]
fn fig2_recipe_uses_six_phase_differences() {
    let dir = tempfile::tempdir().unwrap();
    let o = triwell(dir.path(), &["classical", "--recipe", "fig2", "--t-short", "5", "--sample-dt", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta = json(&dir.path().join("fig2.json"));
    let runs = meta["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 6);
    for (k, r) in runs.iter().enumerate() {
        let diff = r["phase_difference"].as_f64().unwrap();
        assert!((diff - k as f64 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((r["initial"]["phi12"].as_f64().unwrap().cos() + 1.0).abs() < 1e-15);
        assert!((r["initial"]["n1"].as_f64().unwrap() - 0.7082).abs() < 2e-4);
        assert!(dir.path().join(r["file"].as_str().unwrap()).exists());
    }
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = triwell::cli::config::ExperimentConfig::load(&path).unwrap();
            cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 8);
}
