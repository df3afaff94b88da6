use std::path::Path;
use std::process::{Command, Output};

use semilab_cli::{ExperimentConfig, RunReport};

const CONFIG: &str = r#"
[model]
family = "LOG_SPECTRUM"
order = 1

[time_grid]
t_min = 1.0
t_max = 30.0
points = 12
spacing = "GEOMETRIC"

[output]
directory = "unused"
formats = ["CSV", "JSON"]
"#;

fn semilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semilab")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let runs: Vec<_> = ["a", "b"]
        .iter()
        .map(|name| {
            let out = dir.path().join(name);
            let o = semilab(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--no-timings"]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            out
        })
        .collect();
    for file in ["samples.csv", "report.json"] {
        let a = std::fs::read(runs[0].join(file)).unwrap();
        let b = std::fs::read(runs[1].join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn timings_are_the_only_difference() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let mut reports = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        assert_eq!(semilab(&["theorem-check", "--config", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(0));
        let mut r = RunReport::load(&out.join("report.json")).unwrap();
        assert!(!r.timings.is_empty());
        r.timings.clear();
        reports.push(r);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn echoed_config_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    assert_eq!(semilab(&["simulate", "--config", &cfg_path, "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let report = RunReport::load(&out.join("report.json")).unwrap();
    let original = ExperimentConfig::from_toml_str(CONFIG, "inline").unwrap();
    let echoed: ExperimentConfig = serde_json::from_value(report.config.clone()).unwrap();
    assert_eq!(echoed, original);

    // rerunning from the echo reproduces the samples
    let again = write_config(dir.path(), &echoed.to_toml_string().unwrap());
    let out2 = dir.path().join("out2");
    assert_eq!(semilab(&["simulate", "--config", &again, "--out", out2.to_str().unwrap()]).status.code(), Some(0));
    let second = RunReport::load(&out2.join("report.json")).unwrap();
    assert_eq!(second.samples, report.samples);
    assert_eq!(second.config_hash, report.config_hash);
}

#[test]
fn csv_rows_match_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    semilab(&["theorem-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let theorem = std::fs::read_to_string(out.join("theorem.csv")).unwrap();
    let mut lines = theorem.lines();
    assert_eq!(lines.next(), Some("t,semigroup_norm,envelope,resolvent_product_norm,conclusion"));
    assert_eq!(lines.count(), 12);

    semilab(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let samples = std::fs::read_to_string(out.join("samples.csv")).unwrap();
    let mut lines = samples.lines();
    assert_eq!(lines.next(), Some("t,semigroup_norm,resolvent_product_norm,ratio"));
    assert_eq!(lines.count(), 12);
    // atomic writes leave no temporaries behind
    let names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(names.iter().all(|n| n.ends_with(".csv") || n.ends_with(".json")), "{names:?}");
}

#[test]
fn json_only_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &CONFIG.replace(r#"["CSV", "JSON"]"#, r#"["JSON"]"#));
    let out = dir.path().join("out");
    assert_eq!(semilab(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(0));
    assert!(out.join("report.json").exists());
    assert!(!out.join("samples.csv").exists());
}

#[test]
fn report_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w");
    let o = semilab(&["witness", "--t", "10,20", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let path = out.join("report.json");
    assert_eq!(semilab(&["report", path.to_str().unwrap()]).status.code(), Some(0));

    let mut report = RunReport::load(&path).unwrap();
    report.verdicts.get_mut("witness_bracket").unwrap().verdict = semilab_cli::Verdict::Fail;
    let failing = dir.path().join("failing.json");
    std::fs::write(&failing, report.to_json().unwrap()).unwrap();
    let o = semilab(&["report", failing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("witness_bracket"));

    let missing = dir.path().join("missing.json");
    let o = semilab(&["report", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.json"));

    std::fs::write(dir.path().join("junk.json"), "{").unwrap();
    let o = semilab(&["report", dir.path().join("junk.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(semilab(&["hardy", "--cases", "0"]).status.code(), Some(2));
    assert_eq!(semilab(&["simulate", "--family", "NOPE"]).status.code(), Some(2));
    assert_eq!(semilab(&["frobnicate"]).status.code(), Some(2));

    let o = semilab(&["simulate", "--family", "log-spectrum", "--max-dim", "500"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("TRUNCATION_INADEQUATE") && msg.contains("dim 1600"), "{msg}");

    let o = semilab(&["witness", "--t", "10,100", "--dim", "200"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("TRUNCATION_INADEQUATE"));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), &CONFIG.replace("points = 12", "points = -3"));
    let o = semilab(&["simulate", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("points") && msg.contains("line"), "{msg}");

    let thin = write_config(dir.path(), &CONFIG.replace("order = 1", "order = 1\nmax_index = 100"));
    let o = semilab(&["simulate", "--config", &thin]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("max_index >= 241"), "{}", stderr(&o));

    let o = semilab(&["simulate", "--config", &thin, "--family", "jordan-pairs"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hardy_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = semilab(&["hardy", "--cases", "500", "--seed", seed, "--out", out.to_str().unwrap(), "--no-timings"]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out.join("report.json")).unwrap()
    };
    assert_eq!(run("a", "7"), run("b", "7"));
    assert_ne!(run("c", "7"), run("d", "8"));
}
