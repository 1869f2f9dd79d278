use std::fs;
use std::process::{Command, Output};

fn incflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incflow")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn family_f3_prints_closed_forms() {
    let out = incflow(&["family", "--which", "F3", "--k", "10", "--run", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.split_whitespace().eq(["qi", "22"])), "{text}");
    assert!(text.lines().any(|l| l.split_whitespace().eq(["qtu", "30"])), "{text}");
}

#[test]
fn family_json_carries_predictions() {
    let out = incflow(&["--format", "json", "family", "--which", "F2", "--k", "4", "--run", "qtu"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["totals"]["qtu"], 8);
    assert_eq!(v["predicted"]["qtu_total"], 8);
}

#[test]
fn verify_suite_exits_zero() {
    let out = incflow(&["verify", "--suite", "unit-capacity", "--count", "200", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("200/200 instances passed"));
}

#[test]
fn verify_json_lines() {
    let out = incflow(&["--format", "json", "verify", "--suite", "matching", "--count", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 5);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["passed"] == true));
    }
}

#[test]
fn verify_witness_range() {
    let out = incflow(&["verify", "--witness", "30"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solve_qtt_emits_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    let gen = incflow(&["gen", "family", "--which", "F4", "--k", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    let out = incflow(&[
        "--format",
        "json",
        "solve",
        "--method",
        "qtt",
        "--targets",
        "1,4",
        "--instance",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["method"], "qtt");
    assert_eq!(v["total"], 39);
    assert_eq!(v["period_flows"].as_array().unwrap().len(), 16);
}

#[test]
fn exact_and_brute_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let gen = incflow(&[
        "gen", "--out", p, "layered", "--layers", "3", "--width", "2", "--d", "0.7", "--p", "0.5", "--seed", "3",
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let a = stdout(&incflow(&["exact", "--instance", p]));
    let b = stdout(&incflow(&["exact", "--brute", "--instance", p]));
    let opt = |s: &str| s.lines().next().unwrap().split_whitespace().nth(1).unwrap().to_string();
    assert_eq!(opt(&a), opt(&b));
}

#[test]
fn emit_lp_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("m.txt");
    let lp = dir.path().join("m.lp");
    incflow(&["gen", "family", "--which", "M2", "--out", inst.to_str().unwrap()]);
    let out =
        incflow(&["emit-lp", "--model", "imfp1", "--instance", inst.to_str().unwrap(), "--out", lp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(lp).unwrap();
    assert!(text.contains("Maximize") && text.ends_with("End\n"));
}

#[test]
fn bench_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = incflow(&[
        "bench",
        "--n",
        "7",
        "--d",
        "0.5",
        "--p",
        "0.6",
        "--u-max",
        "3",
        "--count",
        "3",
        "--methods",
        "qi,qtt",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(incflow(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(incflow(&["solve", "--instance", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(incflow(&["family", "--which", "F9"]).status.code(), Some(2));
    assert_eq!(incflow(&["bench", "--methods", "given", "--count", "1"]).status.code(), Some(2));
}

#[test]
fn verify_rejects_general_capacities() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    fs::write(&path, "incflow v1\nnodes 2 source 0 sink 1 horizon 2\narc 0 0 1 2 P\n").unwrap();
    assert_eq!(incflow(&["verify", "--instance", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn x3c_reduction_reaches_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.txt");
    let p = path.to_str().unwrap();
    let gen = incflow(&["gen", "--out", p, "x3c", "--elements", "6", "--sets", "1 2 3,4 5 6,2 3 4", "--horizon", "4"]);
    assert_eq!(gen.status.code(), Some(0), "{}", String::from_utf8_lossy(&gen.stderr));
    // 3·(0 + 1) + 3·2·(4 − 2)
    let out = stdout(&incflow(&["exact", "--instance", p]));
    assert!(out.starts_with("optimum  15\n"), "{out}");
    assert_eq!(incflow(&["gen", "x3c", "--elements", "4", "--sets", "1 2 3", "--horizon", "2"]).status.code(), Some(2));
}
