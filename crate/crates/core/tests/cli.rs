use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gravcat::cli::Scenario;

fn gravcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravcat")).args(args).output().unwrap()
}

fn write_defaults(dir: &Path, scenario: Scenario) -> PathBuf {
    let out = gravcat(&["--defaults", scenario.name()]);
    assert!(out.status.success());
    let path = dir.join(format!("{}.toml", scenario.name()));
    fs::write(&path, &out.stdout).unwrap();
    path
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

/// The error object is the last stderr line; warnings may precede it.
fn error_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().unwrap_or("")).unwrap_or_else(|_| panic!("stderr: {text}"))
}

#[test]
fn every_scenario_is_deterministic_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    for scenario in Scenario::ALL {
        let cfg = write_defaults(tmp.path(), scenario);
        let cfg = cfg.to_str().unwrap();
        let a = tmp.path().join(format!("{}-a", scenario.name()));
        let b = tmp.path().join(format!("{}-b", scenario.name()));
        for (dir, threads) in [(&a, "1"), (&b, "4")] {
            let out = gravcat(&["--config", cfg, "--out", dir.to_str().unwrap(), "--threads", threads]);
            assert!(out.status.success(), "{scenario}: {}", String::from_utf8_lossy(&out.stderr));
        }
        let (fa, fb) = (files(&a), files(&b));
        assert!(!fa.is_empty());
        assert!(fa.iter().any(|(n, _)| n.starts_with(scenario.name()) && n.ends_with(".csv")));
        assert_eq!(fa, fb, "{scenario} differs between runs");
    }
}

#[test]
fn csv_header_identifies_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_defaults(tmp.path(), Scenario::QubitEvolve);
    let run = |out: &str, extra: &[&str]| {
        let dir = tmp.path().join(out);
        let mut args = vec!["--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert!(gravcat(&args).status.success());
        fs::read_to_string(dir.join("qubit-evolve.csv")).unwrap()
    };
    let a = run("a", &[]);
    let b = run("b", &[]);
    let lines: Vec<&str> = a.lines().collect();
    assert!(lines[0].starts_with("# gravcat "));
    let hash = lines[1].strip_prefix("# config-sha256: ").unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    let config: serde_json::Value = serde_json::from_str(lines[2].strip_prefix("# config: ").unwrap()).unwrap();
    assert_eq!(config["scenario"], "qubit-evolve");
    assert!(lines[3].starts_with("t ["));
    // Output location is not part of the run identity.
    assert_eq!(a, b);

    fs::write(&cfg, fs::read_to_string(&cfg).unwrap().replace("uu = 0.1", "uu = 0.2")).unwrap();
    let c = run("c", &[]);
    assert_ne!(c.lines().nth(1), a.lines().nth(1));
}

#[test]
fn json_output_parses() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_defaults(tmp.path(), Scenario::Sweep);
    let dir = tmp.path().join("o");
    let out = gravcat(&["--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(v["header"]["tool"], "gravcat");
    let text = serde_json::to_string(&v).unwrap();
    assert!(text.contains("period"));
}

#[test]
fn unknown_keys_reported_with_lines() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "scenario = \"sweep\"\nbogus = 1\n\n[parameters]\nd = 1e-6\nmassez = [1.0]\n").unwrap();
    let out = gravcat(&["--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_json(&out);
    assert_eq!(e["error"]["kind"], "config");
    let keys = e["error"]["details"]["unknown_keys"].as_array().unwrap();
    assert_eq!(keys.len(), 2);
    assert_eq!((keys[0]["path"].as_str(), keys[0]["line"].as_u64()), (Some("bogus"), Some(2)));
    assert_eq!((keys[1]["path"].as_str(), keys[1]["line"].as_u64()), (Some("parameters.massez"), Some(6)));
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let path = |name: &str, body: &str| {
        let p = tmp.path().join(name);
        fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_owned()
    };
    let out_dir = tmp.path().join("o");
    let out_dir = out_dir.to_str().unwrap();

    let unknown = path("a.toml", "scenario = \"nope\"\n");
    assert_eq!(gravcat(&["--config", &unknown]).status.code(), Some(2));
    let syntax = path("b.toml", "scenario = \n");
    assert_eq!(gravcat(&["--config", &syntax]).status.code(), Some(2));
    let missing = tmp.path().join("missing.toml");
    assert_eq!(gravcat(&["--config", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(gravcat(&["--defaults", "nope"]).status.code(), Some(2));

    let unstable = path("c.toml", "scenario = \"rotor-simulate\"\n[parameters]\nb = 0.0\nc = 1.5\n");
    assert_eq!(gravcat(&["--config", &unstable, "--threads", "0"]).status.code(), Some(2));
    let run = gravcat(&["--config", &unstable, "--out", out_dir]);
    assert_eq!(run.status.code(), Some(1));
    assert_eq!(error_json(&run)["error"]["kind"], "runtime");

    let check = gravcat(&["--config", &unstable, "--validate"]);
    assert!(check.status.success());
    let v: serde_json::Value = serde_json::from_slice(&check.stdout).unwrap();
    assert!(v["warnings"][0].as_str().unwrap().contains("1 + b - |c| > 0"));
}

#[test]
fn seed_override_reaches_lyapunov_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_defaults(tmp.path(), Scenario::RotorLyapunov);
    let run = |seed: &str, out: &str| {
        let dir = tmp.path().join(out);
        let o = gravcat(&["--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--seed", seed]);
        assert!(o.status.success());
        fs::read_to_string(dir.join("rotor-lyapunov.csv")).unwrap()
    };
    let a = run("1", "a");
    let b = run("1", "b");
    let c = run("2", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
}
