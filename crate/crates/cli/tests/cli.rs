use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy-cert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn tau_of_thm_a_scheme() {
    let out = run(&["tau", "--scheme", "thmA.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["tau"], "16603/3920");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["samples"], 1024);
}

#[test]
fn tau_from_a_scheme_file() {
    let dir = std::env::temp_dir().join(format!("holonomy-cert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("custom.json");
    std::fs::write(&path, r#"{"b": [["0"], ["1"]], "e": [0, 0]}"#).unwrap();
    let out = run(&["tau", "--scheme", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        out.stdout,
        run(&["tau", "--scheme", "log", "--format", "csv"]).stdout
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("quantity,value\n"));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn certificate_exit_codes() {
    let out = run(&["certificate", "thmA_bc"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "pass");
    assert_eq!(v["result"]["inputs"]["exact"]["tau"], "16603/3920");
    assert!(v["result"]["quotient"].as_f64().unwrap() < 14.0);

    let out = run(&["certificate", "noint_baseline"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["verdict"], "fail");

    assert_eq!(
        run(&["certificate", "no_such_preset"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["contour", "thmA", "--resolution", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["tau", "--scheme", "thmA", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["tau", "--scheme", "thmA", "--samples", "1000"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["tau", "--scheme", "thmA", "--precision-bits", "32"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["series", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["tau", "--scheme", "nonsense"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "certificate",
        "thmA_conv2",
        "--samples",
        "512",
        "--seed",
        "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "concentration",
        "--n",
        "400",
        "--trials",
        "1000",
        "--seed",
        "5",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn config_file_merges_under_flags() {
    let dir = std::env::temp_dir().join(format!("holonomy-cert-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"samples": 512, "seed": 9, "tolerance": 0.5}"#).unwrap();
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "256",
        "tau",
        "--scheme",
        "logs",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["samples"], 256);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["tolerance"], 0.5);

    std::fs::write(&cfg, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(
        run(&["--config", cfg.to_str().unwrap(), "tau", "--scheme", "logs"])
            .status
            .code(),
        Some(2)
    );
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("holonomy-cert-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    let out = run(&[
        "contour",
        "logs",
        "--resolution",
        "16",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("re,im,log_abs\n"));
    assert!(text.lines().count() > 100);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn oracle_subcommands() {
    let out = run(&[
        "jumps",
        "--functions",
        "1,log1m",
        "-D",
        "4",
        "--truncation",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["result"]["jumps"],
        serde_json::json!([0, 1, 2, 3, 4, 5, 6, 7])
    );

    let out = run(&[
        "independence",
        "--functions",
        "1,x,geom",
        "--cap",
        "2",
        "--truncation",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["independent"], false);

    let out = run(&["series", "HA", "--order", "6", "--format", "csv"]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "n,coeff\n0,1\n1,3\n2,15\n3,93\n4,639\n5,4653\n"
    );
}

#[test]
fn thread_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_holonomy-cert"))
        .args(["concentration", "--n", "200", "--trials", "1000"])
        .env("HOLONOMY_CERT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let single = json(&out);
    let multi = json(&run(&["concentration", "--n", "200", "--trials", "1000"]));
    assert_eq!(single["result"], multi["result"]);
}
