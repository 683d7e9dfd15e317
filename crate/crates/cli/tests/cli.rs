use std::process::{Command, Output};

use serde_json::Value;

fn qconvex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qconvex"))
        .args(args)
        .env_remove("QCONVEX_BIT_BUDGET")
        .output()
        .expect("binary runs")
}

fn record(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let line = text.lines().next().expect("one record");
    serde_json::from_str(line).unwrap()
}

#[test]
fn member_128_over_square() {
    let out = qconvex(&["member", "--pivots", "square", "--m", "1", "--k", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert_eq!(r["command"], "member");
    assert_eq!(r["version"], qconvex::VERSION);
    let res = &r["results"];
    assert_eq!(res["direct"], true);
    assert_eq!(res["partial_sums"], true);
    assert_eq!(res["sufficient"], false);
    assert_eq!(res["necessary"], true);
}

#[test]
fn decompose_5_over_linear() {
    let out = qconvex(&["decompose", "--pivots", "linear", "--l", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert_eq!(r["results"]["coefficients"], "1,0,-1,1");
    let checks = &r["results"]["checks"];
    for key in ["sum_ok", "digit_bounds_ok", "partial_sum_bounds_ok"] {
        assert_eq!(checks[key], true, "{key}");
    }
}

#[test]
fn negative_integers_are_accepted() {
    let out = qconvex(&["decompose", "--pivots", "linear", "--l", "-5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(record(&out)["results"]["coefficients"], "-1,0,1,-1");
}

#[test]
fn verify_paper_passes() {
    let out = qconvex(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert_eq!(r["results"]["failed"], 0);
    let names: Vec<&str> = r["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for want in [
        "member-128-square-m1",
        "pow2-square-witnesses",
        "pivothalf-separation",
        "geomdiff-membership",
        "blockexample-s_n-and-falsification",
        "discreteness-halving",
    ] {
        assert!(names.contains(&want), "{want}");
    }
}

#[test]
fn falsification_exits_1() {
    let out = qconvex(&["converge", "--seq", "pow2", "--pivots", "square", "--m", "1", "--horizon", "48"]);
    assert_eq!(out.status.code(), Some(1));
    let w = record(&out)["results"]["outcome"]["witnesses"].clone();
    let js: Vec<u64> = w.as_array().unwrap().iter().map(|w| w["j"].as_u64().unwrap()).collect();
    assert_eq!(js, [3, 8, 15, 24, 35, 48]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qconvex(&["member", "--pivots", "square"]).status.code(), Some(2));
    assert_eq!(qconvex(&["member", "--pivots", "chain:1", "--k", "3"]).status.code(), Some(2));
    assert_eq!(qconvex(&["member", "--k", "3", "--m", "0"]).status.code(), Some(2));
    assert_eq!(qconvex(&["decompose", "--l", "5", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(qconvex(&["nonsense"]).status.code(), Some(2));
    assert_eq!(qconvex(&[]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--pivots", "factorial", "--m", "2", "--count", "200"];
    let a = qconvex(&args);
    let b = qconvex(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = qconvex(&["sweep", "--pivots", "factorial", "--m", "2", "--count", "200", "--seed", "7"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn blocks_csv_table() {
    let out = qconvex(&["blocks", "--seq", "blockexample", "--horizon", "40", "--max-n", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "n,first,last,s_n\n1,1,3,1/1\n2,4,8,1/1\n3,9,15,1/1\n4,16,24,1/1\n");
}

#[test]
fn config_file_with_flag_override_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let report = dir.path().join("report.json");
    std::fs::write(&cfg, "command = \"member\"\npivots = \"square\"\nk = 128\nm = 4\n").unwrap();
    let out = qconvex(&["--config", cfg.to_str().unwrap(), "--m", "1", "--output", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["config"]["m"], 1);
    assert_eq!(r["results"]["direct"], true);
}

#[test]
fn config_echo_round_trips_as_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = qconvex(&["dual", "--chi", "-3/16", "--pivots", "chain:2,3,...", "--n", "4", "--window", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let first = record(&out);

    // the echoed config, rewritten as TOML, reproduces the same report
    let echo = first["config"].as_object().unwrap();
    let mut toml_text = String::new();
    for (key, v) in echo {
        toml_text.push_str(&format!("{key} = {v}\n"));
    }
    let cfg = dir.path().join("echo.toml");
    std::fs::write(&cfg, toml_text).unwrap();
    let again = qconvex(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn unknown_config_keys_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "command = \"member\"\nbogus = 1\n").unwrap();
    assert_eq!(qconvex(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bit_budget_env_var_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_qconvex"))
        .args(["member", "--pivots", "square", "--k", "128"])
        .env("QCONVEX_BIT_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budget"), "{err}");
}
