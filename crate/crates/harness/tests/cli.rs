//! End-to-end checks of the `nearforest` binary: JSON on stdout, exit codes
//! per contract (0 done, 2 usage, 3 parse error).

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nearforest"))
}

fn tmpfile(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nearforest-cli-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn k4_file() -> PathBuf {
    tmpfile(
        "k4.gr",
        "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n",
    )
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

#[test]
fn solve_rpf_on_k4_matches_the_oracle() {
    let input = k4_file();
    let out = bin()
        .args(["solve", "rpf", "-i"])
        .arg(&input)
        .args(["-k", "1", "-r", "1"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["status"], "yes");
    assert_eq!(v["k"], 1);
    assert_eq!(v["r"], 1);
    assert_eq!(v["witness"].as_array().unwrap().len(), 1);
    assert!(v["nodes_expanded"].as_u64().unwrap() > 0);
    assert!(v["elapsed_ms"].is_u64());

    let out = bin()
        .args(["solve", "rpf", "-i"])
        .arg(&input)
        .args(["-k", "0", "-r", "1"])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["status"], "no");
}

#[test]
fn solve_dqf_fallback_agrees_with_pipeline() {
    let input = k4_file();
    let normal = bin()
        .args(["solve", "dqf", "-i"])
        .arg(&input)
        .args(["-k", "1", "-d", "1"])
        .output()
        .unwrap();
    let fallback = bin()
        .args(["solve", "dqf", "-i"])
        .arg(&input)
        .args(["-k", "1", "-d", "1", "--fallback"])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&normal)["status"], stdout_json(&fallback)["status"]);
}

#[test]
fn verify_accepts_and_rejects() {
    let input = k4_file();
    let out = bin()
        .args(["verify", "rpf", "-i"])
        .arg(&input)
        .args(["-r", "1", "--witness", "1"])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["valid"], true);
    let out = bin()
        .args(["verify", "rpf", "-i"])
        .arg(&input)
        .args(["-r", "0", "--witness", "1"])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["valid"], false);
}

#[test]
fn oracle_reports_the_optimum() {
    let input = k4_file();
    let out = bin()
        .args(["oracle", "dqf", "-i"])
        .arg(&input)
        .args(["-d", "1"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["opt_size"], 1);
    assert_eq!(v["refused"], false);
}

#[test]
fn missing_budget_is_a_usage_error() {
    let input = k4_file();
    let out = bin()
        .args(["solve", "rpf", "-i"])
        .arg(&input)
        .args(["-r", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wrong_parameter_flag_is_a_usage_error() {
    let input = k4_file();
    let out = bin()
        .args(["solve", "rpf", "-i"])
        .arg(&input)
        .args(["-k", "1", "-d", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_is_a_parse_error() {
    let input = tmpfile("bad.gr", "p edge 2 1\nq 1 2\n");
    let out = bin()
        .args(["solve", "rpf", "-i"])
        .arg(&input)
        .args(["-k", "1", "-r", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn gen_writes_a_parsable_file_and_is_seed_stable() {
    let out_path = tmpfile("gen.gr", "");
    let run = |seed: &str| {
        let out = bin()
            .args(["gen", "random", "--n", "7", "--edges", "9", "--seed", seed, "-o"])
            .arg(&out_path)
            .output()
            .unwrap();
        assert!(out.status.success());
        fs::read_to_string(&out_path).unwrap()
    };
    let a = run("5");
    let b = run("5");
    assert_eq!(a, b, "same seed, same bytes");
    let c = run("6");
    assert_ne!(a, c);
    assert!(a.starts_with("p edge 7 9\n"));
}

#[test]
fn kernelize_reports_bounds() {
    // C5 plus a pendant: reduces to a single looped vertex.
    let input = tmpfile(
        "c5p.gr",
        "p edge 6 6\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\ne 1 6\n",
    );
    let out = bin()
        .args(["kernelize", "-i"])
        .arg(&input)
        .args(["-k", "1", "-r", "1", "--degree-cap", "22"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["n"], 1);
    assert_eq!(v["m"], 1);
    assert_eq!(v["vertex_bound"], 23);
    assert_eq!(v["edge_bound"], 44);
    assert_eq!(v["within_bounds"], true);
    assert_eq!(v["min_degree3"], false);
}

#[test]
fn bench_writes_json_lines() {
    let out_path = tmpfile("bench.jsonl", "");
    let out = bin()
        .args([
            "bench",
            "--grid",
            "problem=rpf,family=random,n=6,m=7,k=0..1,r=1,seed=0..2",
            "-o",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["status"] == "yes" || v["status"] == "no");
        assert_eq!(v["oracle_agrees"], true);
        assert_eq!(v["rng"], "chacha8");
    }
}
