use std::io::Write;
use std::process::{Command, Output};

use itertools::Itertools;

fn cpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn single_clique_is_one_community() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# K_7 on letters").unwrap();
    for (a, b) in "abcdefg".chars().tuple_combinations() {
        writeln!(file, "{a} {b}").unwrap();
    }
    let path = file.path().to_str().unwrap();
    for k in 3..=5usize {
        let out = cpl(&["communities", "-i", path, "-k", &k.to_string()]);
        assert!(out.status.success());
        let text = stdout(&out);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1);
        let expected = (1..=k).fold(1, |acc, i| acc * (7 - k + i) / i);
        assert_eq!(lines[0].split(' ').count(), expected);
    }
}

#[test]
fn communities_split_on_overlap() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    // two triangles sharing only vertex c
    writeln!(file, "a b\nb c\na c\nc d\nd e\nc e").unwrap();
    let path = file.path().to_str().unwrap();
    let text = stdout(&cpl(&["communities", "-i", path]));
    assert_eq!(text, "a,b,c\nc,d,e\n");
    let text = stdout(&cpl(&["communities", "-i", path, "--ell", "1"]));
    assert_eq!(text, "a,b,c c,d,e\n");
}

#[test]
fn malformed_edge_list_exits_2() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "a b\nc\n").unwrap();
    let out = cpl(&["communities", "-i", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn seed_is_mandatory() {
    assert_eq!(cpl(&["simulate", "-n", "100", "--p", "0.1"]).status.code(), Some(2));
    assert_eq!(cpl(&["sweep", "-n", "100", "--p-grid", "0.1"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let guard = cpl(&["simulate", "-n", "100000", "--p", "0.5", "--seed", "1"]);
    assert_eq!(guard.status.code(), Some(3));
    let invalid = cpl(&["simulate", "-n", "100", "--p", "0.1", "--ell", "3", "--seed", "1"]);
    assert_eq!(invalid.status.code(), Some(2));
    let bad_p = cpl(&["simulate", "-n", "100", "--p", "1.5", "--seed", "1"]);
    assert_eq!(bad_p.status.code(), Some(2));
    let no_crossing = cpl(&["sweep", "-n", "300", "--mu-grid", "0,0.1", "--seed", "1", "--epsilon", "0.5"]);
    assert_eq!(no_crossing.status.code(), Some(2));
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "-n", "2000", "--mu", "1.5", "--trials", "3", "--seed", "9"];
    let a = cpl(&args);
    let b = cpl(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 4);
    let file = tempfile::NamedTempFile::new().unwrap();
    let path = file.path().to_str().unwrap();
    let mut with_output = args.to_vec();
    with_output.extend(["--output", path]);
    assert!(cpl(&with_output).status.success());
    assert_eq!(std::fs::read(path).unwrap(), a.stdout);
}

#[test]
fn sweep_rows_and_json() {
    let out = cpl(&["sweep", "-n", "500", "--mu-grid", "0.5:1.5:0.5", "--trials", "2", "--seed", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 3 * 2);
    let out = cpl(&["simulate", "-n", "500", "--p", "0.03", "--seed", "3", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn theory_report() {
    let out = cpl(&["theory", "-n", "3000", "--mu", "2"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((value["sigma"].as_f64().unwrap() - 0.908_410_293_682_206_5).abs() < 1e-10);
    assert!((value["critical_p"].as_f64().unwrap() - (6000f64).powf(-0.5)).abs() < 1e-15);
    let out = cpl(&["theory", "--variant", "motif-c4", "-k", "4", "--ell", "3", "-n", "10000"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((value["critical_p"].as_f64().unwrap() - 0.006_704_399_621_018_856).abs() < 1e-15);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["sweep", "-n", "1500", "--mu-grid", "1,2", "--trials", "4", "--seed", "12"];
    let one = Command::new(env!("CARGO_BIN_EXE_cpl")).args(args).env("CPL_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_cpl")).args(args).env("CPL_THREADS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_cpl")).args(args).env("CPL_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
