use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use glvar_cli::config::{GeometricGrid, LinearGrid};
use glvar_cli::RunConfig;

fn small_config(count: usize) -> RunConfig {
    let mut cfg = RunConfig::desk();
    cfg.ensemble.count = count;
    cfg.emax = 2200.0;
    cfg.grids.epsilon = LinearGrid { start: 1000.0, stop: 2000.0, step: 1.0 };
    cfg.grids.omega = LinearGrid { start: 0.0, stop: 20.0, step: 0.5 };
    cfg.grids.window_epsilon = 2000.0;
    cfg.grids.rigidity_epsilon = GeometricGrid { start: 1000.0, stop: 2000.0, count: 3 };
    cfg.grids.lengths = GeometricGrid { start: 1.0, stop: 300.0, count: 14 };
    cfg
}

fn write_config(dir: &Path, cfg: &RunConfig) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, cfg.to_toml()).unwrap();
    path
}

fn glvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glvar")).args(args).output().expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn spec_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "spec"))
        .collect();
    v.sort();
    v
}

#[test]
fn generate_is_idempotent_and_repairs_corruption() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(3);
    let conf = write_config(tmp.path(), &cfg);
    let out = tmp.path().join("out");
    let args = ["generate", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()];

    let first = ok(&glvar(&args));
    assert!(first.contains("3 written, 0 regenerated, 0 already valid"), "{first}");
    let files = spec_files(&out.join("cache"));
    assert_eq!(files.len(), 3);
    let alphas = cfg.alphas();
    for f in &files {
        let text = String::from_utf8_lossy(&fs::read(f).unwrap()).into_owned();
        let line = text.lines().find(|l| l.starts_with("alpha=")).unwrap();
        let alpha: f64 = line["alpha=".len()..].parse().unwrap();
        assert!(alphas.contains(&alpha));
    }

    let second = ok(&glvar(&args));
    assert!(second.contains("0 written, 0 regenerated, 3 already valid"), "{second}");

    let mut bytes = fs::read(&files[1]).unwrap();
    bytes[0] = b'#';
    fs::write(&files[1], &bytes).unwrap();
    let third = ok(&glvar(&args));
    assert!(third.contains("0 written, 1 regenerated, 2 already valid"), "{third}");
    assert_ne!(fs::read(&files[1]).unwrap(), bytes);
}

#[test]
fn figures_are_reproducible_and_carry_the_config_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(40);
    let conf = write_config(tmp.path(), &cfg);
    let hash = cfg.hash();
    for name in ["fig1-rb", "fig2", "fig3a", "fig3b"] {
        let a = tmp.path().join(format!("{name}-a"));
        let b = tmp.path().join(format!("{name}-b"));
        for dir in [&a, &b] {
            ok(&glvar(&["figure", name, "--config", conf.to_str().unwrap(), "--out", dir.to_str().unwrap()]));
        }
        let main = if name == "fig2" { "fig2-mean" } else { name };
        let csv = fs::read_to_string(a.join(format!("{main}.csv"))).unwrap();
        assert!(csv.lines().next().unwrap().contains(&format!("config={hash}")), "{name}");
        assert!(a.join(format!("{main}.svg")).exists());
        for entry in fs::read_dir(&a).unwrap() {
            let p = entry.unwrap().path();
            if p.extension().is_some_and(|e| e == "csv") {
                let q = b.join(p.file_name().unwrap());
                assert_eq!(fs::read(&p).unwrap(), fs::read(&q).unwrap(), "{}", p.display());
            }
        }
        for entry in fs::read_dir(a.join("series")).unwrap() {
            let text = fs::read_to_string(entry.unwrap().path()).unwrap();
            assert!(text.starts_with("# glvar-series v1"));
            assert!(text.contains(&format!("config={hash}")));
        }
    }
}

#[test]
fn fig3a_has_the_five_caption_curves() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(30));
    let out = tmp.path().join("o");
    ok(&glvar(&["figure", "fig3a", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    let csv = fs::read_to_string(out.join("fig3a.csv")).unwrap();
    let header = csv.lines().nth(1).unwrap();
    for col in [
        "delta3_inf_theory",
        "sigma_g_vs_epsilon",
        "sigma_g_vs_mean",
        "sigma_g_full_theory",
        "sigma_g_permuted_pairs_theory",
    ] {
        assert!(header.split(',').any(|c| c == col), "{col} missing from {header}");
    }
    let svg = fs::read_to_string(out.join("fig3a.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
}

#[test]
fn fig3b_has_four_curves() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(30));
    let out = tmp.path().join("o");
    ok(&glvar(&["figure", "fig3b", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    let svg = fs::read_to_string(out.join("fig3b.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    let csv = fs::read_to_string(out.join("fig3b.csv")).unwrap();
    let header = csv.lines().nth(1).unwrap();
    for col in ["k_vs_epsilon", "k_vs_mean", "k_diagonal_theory", "k_small_omega"] {
        assert!(header.split(',').any(|c| c == col));
    }
}

#[test]
fn quarter_circle_figure_prints_scope_note() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small_config(1);
    cfg.system = glvar_core::SystemKind::QuarterCircle;
    let conf = write_config(tmp.path(), &cfg);
    let out = tmp.path().join("o");
    let stdout = ok(&glvar(&["figure", "fig1-qcb", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    assert!(stdout.contains("note: quarter circle"), "{stdout}");
    let csv = fs::read_to_string(out.join("fig1-qcb.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains("delta3_saturation_num"));
    assert!(!csv.contains("sigma_g"));
}

#[test]
fn ensemble_figures_need_the_rectangle() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small_config(1);
    cfg.system = glvar_core::SystemKind::QuarterCircle;
    let conf = write_config(tmp.path(), &cfg);
    let out = glvar(&["figure", "fig3a", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rectangular"));
}

#[test]
fn theory_command_writes_a_series() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(20));
    let out = tmp.path().join("o");
    ok(&glvar(&["theory", "delta3-saturation", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    let text = fs::read_to_string(out.join("theory-delta3-saturation.csv")).unwrap();
    let series = glvar_core::StatSeries::from_csv(&text).unwrap();
    assert_eq!(series.len(), 1001);
    assert!(series.values.iter().all(|v| *v > 0.0));
}

#[test]
fn usage_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, small_config(3).to_toml() + "\nunknown_key = 1\n").unwrap();
    assert_eq!(glvar(&["generate", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(glvar(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(glvar(&["theory", "nonsense"]).status.code(), Some(2));
    assert_eq!(glvar(&["--config", "x.toml", "--paper-scale", "generate"]).status.code(), Some(2));
}

#[test]
fn printed_config_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(5).with_seed(42);
    let conf = write_config(tmp.path(), &cfg);
    let text = ok(&glvar(&["config", "--config", conf.to_str().unwrap()]));
    assert_eq!(text, cfg.to_toml());
    let again = ok(&glvar(&["config", "--config", conf.to_str().unwrap(), "--seed", "7"]));
    assert!(again.contains("seed = 7"));
}
