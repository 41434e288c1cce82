use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

use torhole::catalog::catalog;
use torhole::graph::Graph;
use torhole::surface::io::{self, GraphFile};

fn torhole(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_torhole"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn h_file(dir: &TempDir, i: usize) -> String {
    write(dir, &format!("h{i}.json"), &io::to_json(&catalog()[i - 1]).to_string())
}

#[test]
fn check_on_h1_is_tight() {
    let dir = TempDir::new().unwrap();
    let out = torhole(&["check", &h_file(&dir, 1)], None);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["status"], "Tight");
    assert_eq!(r["freedom"], 6);
}

#[test]
fn rank_on_double_banana_is_negative() {
    let dir = TempDir::new().unwrap();
    let text = serde_json::to_string(&GraphFile::from_graph(&Graph::double_banana())).unwrap();
    let out = torhole(&["rank", "--seed", "7", "--trials", "2", &write(&dir, "banana.json", &text)], None);
    assert_eq!(out.status.code(), Some(2));
    let r = &lines(&out)[0];
    assert_eq!(r["rank"], 17);
    assert_eq!(r["minimally_rigid"], false);
}

#[test]
fn certify_h17_is_one_split() {
    let dir = TempDir::new().unwrap();
    let out = torhole(&["certify", "--validate", &h_file(&dir, 17)], None);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["steps"].as_array().unwrap().len(), 1);
    assert_eq!(r["ranks"], serde_json::json!([3, 6]));
}

#[test]
fn gen_is_deterministic_and_count_zero_is_empty() {
    let args = ["gen", "--seed", "5", "--max-side", "4", "--count", "2"];
    let a = torhole(&args, None);
    let b = torhole(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    for r in lines(&a) {
        assert_eq!(r["freedom"].as_i64().unwrap(), r["hole_length"].as_i64().unwrap() - 3);
    }
    let empty = torhole(&["gen", "--count", "0"], None);
    assert_eq!(empty.status.code(), Some(0));
    assert!(empty.stdout.is_empty());
}

#[test]
fn gen_check_reduce_pipeline() {
    let gen = torhole(&["gen", "--seed", "3", "--max-side", "5", "--count", "3"], None);
    let text = String::from_utf8(gen.stdout).unwrap();
    let check = torhole(&["check"], Some(&text));
    assert!(matches!(check.status.code(), Some(0 | 2)));
    let tight: Vec<&str> = text
        .lines()
        .zip(lines(&check))
        .filter(|(_, c)| c["status"] == "Tight")
        .map(|(l, _)| l)
        .collect();
    assert!(!tight.is_empty());
    let reduce = torhole(&["--jobs", "2", "reduce", "--validate"], Some(&tight.join("\n")));
    assert_eq!(reduce.status.code(), Some(0), "{}", String::from_utf8_lossy(&reduce.stdout));
    let out = lines(&reduce);
    assert_eq!(out.len(), tight.len());
    for (i, r) in out.iter().enumerate() {
        assert_eq!(r["index"], i);
        assert_eq!(r["validated"], true);
    }
}

#[test]
fn tree_homology_and_classify_on_h1() {
    let dir = TempDir::new().unwrap();
    let f = h_file(&dir, 1);
    let tree = torhole(&["tree", "--validate", &f], None);
    assert_eq!(tree.status.code(), Some(0));
    assert_eq!(lines(&tree)[0]["validated"], true);

    let hom = torhole(&["homology", &f], None);
    assert_eq!(hom.status.code(), Some(0));
    assert_eq!(lines(&hom)[0]["crossovers"].as_array().unwrap().len(), 12);

    let class = torhole(&["classify", &f], None);
    assert_eq!(class.status.code(), Some(0));
    let r = &lines(&class)[0];
    assert_eq!(r["verdict"]["kind"], "form");
    assert_eq!(r["verdict"]["index"], 1);
}

#[test]
fn catalog_lists_seventeen_forms() {
    let out = torhole(&["catalog"], None);
    assert_eq!(out.status.code(), Some(0));
    let rs = lines(&out);
    assert_eq!(rs.len(), 17);
    assert_eq!(rs[16]["vertices"], 4);
}

#[test]
fn dot_output_for_check() {
    let dir = TempDir::new().unwrap();
    let out = torhole(&["--format", "dot", "check", &h_file(&dir, 2)], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("graph G {"));
}

#[test]
fn errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"vertices\": 3, \"faces\": [[0, 1, 2]]}");
    let out = torhole(&["check", &bad], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(lines(&out)[0]["error"].is_string());

    let missing = Path::new(dir.path()).join("missing.json");
    assert_eq!(torhole(&["rank", missing.to_str().unwrap()], None).status.code(), Some(1));
    assert_eq!(torhole(&["check", "--no-such-flag"], None).status.code(), Some(1));
    assert_eq!(torhole(&["--format", "dot", "rank", &bad], None).status.code(), Some(1));
}
