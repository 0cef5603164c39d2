use std::path::Path;
use std::process::{Command, Output};

fn rapsim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rapsim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn rapsim")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(summary: &str, key: &str) -> String {
    summary
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from {summary}"))
        .to_string()
}

/// Data rows of a CSV written by the CLI: skips the comment and header lines.
fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# command="));
    lines.next().unwrap();
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn simulate_defaults_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(dir.path(), &["simulate", "--stride", "50"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(field(&s, "final_p1").parse::<f64>().unwrap() > 0.999);
    assert_eq!(field(&s, "adiabatic"), "yes");
    let data = rows(&dir.path().join("trajectory.csv"));
    let last = data.last().unwrap();
    assert_eq!(last[0].parse::<f64>().unwrap(), 150e-6);
}

#[test]
fn simulate_reports_fast_sweep_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(
        dir.path(),
        &["simulate", "--chirp-span", "1.4e6", "--out", "fast.csv"],
    );
    assert!(o.status.success());
    let s = stdout(&o);
    let eta: f64 = field(&s, "max_eta").parse().unwrap();
    assert!((eta - 0.0316).abs() < 1e-3, "{s}");
    assert!(field(&s, "tail_spread").parse::<f64>().is_ok());
}

#[test]
fn simulate_zero_drive() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(dir.path(), &["simulate", "--peak-rabi", "0"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "final_p1").parse::<f64>().unwrap(), 0.0);
}

#[test]
fn invalid_config_names_field() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[pulse]\nduration = -1.0\n").unwrap();
    let o = rapsim(dir.path(), &["--config", "bad.toml", "simulate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pulse.duration"));
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn sweep_default_axis_plateau() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(dir.path(), &["sweep", "--workers", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let data = rows(&dir.path().join("sweep.csv"));
    assert_eq!(data.len(), 59);
    for r in &data {
        let span: f64 = r[0].parse().unwrap();
        if (200e3..=500e3).contains(&span) {
            assert!(r[1].parse::<f64>().unwrap() >= 0.99, "{r:?}");
        }
        assert_eq!(r[3], "ok");
    }
}

#[test]
fn sweep_axis_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(dir.path(), &["sweep", "--values"]);
    assert_eq!(o.status.code(), Some(2));

    let o = rapsim(dir.path(), &["sweep", "--values", "0", "--out", "one.csv"]);
    assert!(o.status.success());
    assert_eq!(rows(&dir.path().join("one.csv")).len(), 1);
}

#[test]
fn sweep_failure_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep",
        "--axis",
        "peak-rabi",
        "--values",
        "1e3,5e6",
        "--envelope",
        "constant",
        "--duration",
        "1e-3",
        "--steps-per-rad",
        "10",
    ];
    let o = rapsim(dir.path(), &args);
    assert_eq!(o.status.code(), Some(1));
    let data = rows(&dir.path().join("sweep.csv"));
    assert_eq!(data[0][3], "ok");
    assert_eq!(data[1][3], "integration_failure");
}

#[test]
fn rabi_fits_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(dir.path(), &["rabi", "--seed", "11"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let f = report["fitted_rabi_hz"].as_f64().unwrap();
    assert!(((f - 512e3) / 512e3).abs() < 5e-3, "{f}");

    let o = rapsim(dir.path(), &["rabi", "--noiseless", "--out", "clean.csv"]);
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let f = report["fitted_rabi_hz"].as_f64().unwrap();
    assert!(((f - 512e3) / 512e3).abs() < 1e-6, "{f}");
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("clean.fit.json")).unwrap())
            .unwrap();
    assert_eq!(saved["fit"], report);
    assert_eq!(saved["parameters"]["noiseless"], "true");

    let o = rapsim(dir.path(), &["rabi", "--points", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cool_strategies() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(dir.path(), &["cool"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(field(&s, "p_ground").parse::<f64>().unwrap() > 0.99);
    assert_eq!(s.lines().last().unwrap(), "[]");
    let data = rows(&dir.path().join("cooling.csv"));
    assert_eq!(data.len(), 31);

    let o = rapsim(
        dir.path(),
        &["cool", "--strategy", "pi-fixed", "--out", "pi.csv"],
    );
    assert!(o.status.success());
    let trapped = std::fs::read_to_string(dir.path().join("pi.trapped.json")).unwrap();
    let levels: Vec<usize> = serde_json::from_str(&trapped).unwrap();
    assert_eq!(levels, [4, 16, 36]);

    let o = rapsim(dir.path(), &["cool", "--cycles", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn waveform_grid_and_quantization() {
    let dir = tempfile::tempdir().unwrap();
    let o = rapsim(dir.path(), &["waveform"]);
    assert!(o.status.success());
    assert_eq!(rows(&dir.path().join("waveform.csv")).len(), 151);

    let o = rapsim(dir.path(), &["waveform", "--bits", "16", "--out", "q.csv"]);
    assert!(o.status.success());
    for r in rows(&dir.path().join("q.csv")) {
        let k = r[1].parse::<f64>().unwrap() * 65535.0;
        assert!((k - k.round()).abs() < 1e-6, "{r:?}");
    }

    let o = rapsim(dir.path(), &["waveform", "--sample-rate", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    for (w, out) in [("1", "w1.csv"), ("4", "w4.csv")] {
        let o = rapsim(
            dir.path(),
            &[
                "sweep",
                "--start",
                "1e5",
                "--stop",
                "6e5",
                "--step",
                "1e5",
                "--workers",
                w,
                "--out",
                out,
            ],
        );
        assert!(o.status.success());
    }
    assert_eq!(
        std::fs::read(dir.path().join("w1.csv")).unwrap(),
        std::fs::read(dir.path().join("w4.csv")).unwrap()
    );
}
