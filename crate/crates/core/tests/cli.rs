// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtl")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn synth_writes_network_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c17.json");
    let o = mtl(&["synth", "c17", "--fanin", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stats = json(&o);
    assert_eq!(stats["logic_gates"], 6);
    assert_eq!(stats["buffers"], 3);
    assert_eq!(stats["stages"], 3);
    assert_eq!(stats["mapping"], "mtl");
    let net = mtl::TlgNetwork::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(net.gate_count(), 9);
}

#[test]
fn synth_errors() {
    assert_eq!(code(&mtl(&["synth", "c17", "--fanin", "5"])), 2);
    let o = mtl(&["synth", "definitely-missing.bench"]);
    assert_eq!(code(&o), 3);
    assert!(!o.stderr.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.bench", "INPUT(a)\nOUTPUT(y)\ny = FOO(a)\n");
    assert_eq!(code(&mtl(&["synth", &bad])), 2);
    assert_eq!(code(&mtl(&["frobnicate"])), 2);
}

#[test]
fn verify_exit_codes() {
    let o = mtl(&["verify", "c17"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["vectors_tested"], 32);
    assert_eq!(v["mismatches"], 0);
    assert_eq!(v["check"]["mode"], "exhaustive");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    assert_eq!(code(&mtl(&["synth", "c17", "--out", path.to_str().unwrap()])), 0);
    let mut net: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    net["stages"][2][0]["bias"] = Value::from(-3);
    net["stages"][2][0]["weights"] = serde_json::json!([2, 2]);
    let bad = write(dir.path(), "bad.json", &net.to_string());
    let o = mtl(&["verify", "c17", "--network", &bad]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["mismatches"].as_u64().unwrap() > 0);

    let other = dir.path().join("c432.json");
    assert_eq!(code(&mtl(&["synth", "c432", "--out", other.to_str().unwrap()])), 0);
    assert_eq!(code(&mtl(&["verify", "c17", "--network", other.to_str().unwrap()])), 2);

    let o = mtl(&["verify", "c432", "--random", "500", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["vectors_tested"], 500);
}

#[test]
fn report_with_and_without_baseline() {
    let o = mtl(&["report", "c432", "--vectors", "200"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert!(r["comparison"]["energy_reduction_pct"].as_f64().unwrap() > 50.0);
    assert!((r["table_comparison"]["edp_reduction_pct"].as_f64().unwrap() - 99.41).abs() < 0.1);
    assert_eq!(r["report"]["throughput_period"].as_f64().unwrap(), 2e-9);
    assert!(r["report"]["gate_count"].as_u64().unwrap() > 0);
    assert!(r.get("margin").is_none());

    let dir = tempfile::tempdir().unwrap();
    let b = write(dir.path(), "mine.bench", "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n");
    let r = json(&mtl(&["report", &b, "--vectors", "16"]));
    assert_eq!(r["report"]["benchmark"], "mine");
    assert!(r.get("comparison").is_none());
    assert!(r.get("baseline").is_none());

    let o = mtl(&["report", "c432", "--format", "text", "--vectors", "50"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("c432"));
}

#[test]
fn report_monte_carlo_is_reproducible() {
    let args = ["report", "c17", "--mc", "--trials", "100", "--sigma", "0.05", "--vectors", "64"];
    let a = mtl(&[&args[..], &["--jobs", "1"]].concat());
    let b = mtl(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let m = &json(&a)["margin"];
    assert_eq!(m["trials"], 100);
    let y = m["yield"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&y));
    assert_eq!(m["sigma_r"].as_f64().unwrap(), 0.05);
}

#[test]
fn sweep_rows() {
    let o = mtl(&["sweep-fanin", "c432"]);
    assert_eq!(code(&o), 0);
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    let counts: Vec<u64> = rows.iter().map(|r| r["logic_gates"].as_u64().unwrap()).collect();
    assert!(counts[0] >= counts[1] && counts[1] >= counts[2]);
    assert_eq!(rows[0]["mapping"], "mtl");
    assert_eq!(rows[1]["mapping"], "logical_only");
    assert_eq!(rows[2]["mapping"], "logical_only");

    let dir = tempfile::tempdir().unwrap();
    let b = write(dir.path(), "one.bench", "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
    let rows = json(&mtl(&["sweep-fanin", &b]))["rows"].as_array().unwrap().clone();
    assert!(rows.iter().all(|r| r["logic_gates"] == 1));
    let text = mtl(&["sweep-fanin", &b, "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("logical-only"));
}

#[test]
fn sim_reads_vector_files() {
    let dir = tempfile::tempdir().unwrap();
    let v = write(dir.path(), "v.txt", "00000\n11111\n10101\n");
    let o = mtl(&["sim", "c17", "--vectors", &v]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["outputs"], serde_json::json!(["00", "10", "11"]));
    assert_eq!(r["output_cycles"], serde_json::json!([3, 4, 5]));
    assert_eq!(r["cycles"], 6);
    let short = write(dir.path(), "w.txt", "000\n");
    assert_eq!(code(&mtl(&["sim", "c17", "--vectors", &short])), 2);
}

#[test]
fn config_handling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "dev.cfg", "i_c = 2uA\n");
    let o = mtl(&["verify", "c17", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    let bad = write(dir.path(), "bad.cfg", "nonsense = 1\n");
    assert_eq!(code(&mtl(&["verify", "c17", "--config", &bad])), 2);
    let missing = dir.path().join("none.cfg");
    assert_eq!(code(&mtl(&["verify", "c17", "--config", missing.to_str().unwrap()])), 3);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = mtl(&["report", "c499", "--vectors", "100", "--seed", "5"]);
    let b = mtl(&["report", "c499", "--vectors", "100", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
