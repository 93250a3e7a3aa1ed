use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choice-lab"))
        .args(args)
        .env_remove("CHOICE_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_of(o: &Output) -> Value {
    assert!(
        o.status.code().is_some_and(|c| c < 2),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn example1_passes_and_detects_a_changed_weight() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("e1.csv");
    let out = run(&["example1", "--menus", "200", "--csv", p(&csv)]);
    assert_eq!(code(&out), 0);
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.contains("marginals: EQUAL (exact)"));
    assert!(md.contains("0 vs 1/2"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().count() > 200);

    let one = run(&["example1", "--menus", "1", "--json"]);
    assert_eq!(json_of(&one)["pass"], true);

    let bad = run(&["example1", "--menus", "200", "--mu-prime-weight", "2/5", "--json"]);
    assert_eq!(code(&bad), 1);
    let v = json_of(&bad);
    assert_eq!(v["marginals_equal"], false);
    assert!(v["mismatched_menus"].as_u64().unwrap() > 0);
}

#[test]
fn example2_quick_mode() {
    let out = run(&["example2", "--n", "20000", "--triples", "4", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["triples"].as_array().unwrap().len(), 4);
    assert_eq!(v["footnote"]["nu2"]["prob"]["value"], 0.0);
    assert_eq!(v["formula_pass"], true);
    assert_eq!(code(&out), 0);
}

#[test]
fn example2_rejects_tiny_samples() {
    assert_eq!(code(&run(&["example2", "--n", "100"])), 2);
}

#[test]
fn identify_moments_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let out = run(&[
        "identify-moments",
        "--law",
        p(&data("law_four_atoms.json")),
        "--out",
        p(&csv),
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert!(v["max_abs_err"].as_f64().unwrap() <= 1e-3);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,recovered,direct,abs_err"));
    // i + j <= 4 with i, j >= 0.
    assert_eq!(lines.count(), 15);
}

#[test]
fn sample_rcc_then_check_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let rcc = dir.path().join("rcc.json");
    let out = run(&[
        "sample-rcc",
        "--dist",
        p(&data("mu.json")),
        "--menus",
        p(&data("menus.json")),
        "--family",
        "--out",
        p(&rcc),
    ]);
    assert_eq!(code(&out), 0);
    let report = dir.path().join("axioms.json");
    let out = run(&["check-axioms", "--rcc", p(&rcc), "--report", p(&report)]);
    assert_eq!(code(&out), 0);
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.contains("necessary"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["command"], "check-axioms");
    assert_eq!(v["axioms"].as_array().unwrap().len(), 3);
    assert!(v["companions"].as_u64().unwrap() > 0);
}

#[test]
fn check_axioms_flags_a_bad_table() {
    let dir = tempfile::tempdir().unwrap();
    let rcc = dir.path().join("bad.json");
    // The larger menu gives p more probability than the smaller one.
    let lot = |x: &str, y: &str| serde_json::json!({"x": x, "y": y, "chart": "MM"});
    let table = serde_json::json!([
        {"menu": [lot("1/2", "0"), lot("0", "1/2")], "rows": [
            {"subset": [0], "prob": "1/4"}, {"subset": [1], "prob": "3/4"}]},
        {"menu": [lot("1/2", "0"), lot("0", "1/2"), lot("1/4", "1/4")], "rows": [
            {"subset": [0], "prob": "1/2"}, {"subset": [1], "prob": "1/2"}, {"subset": [2], "prob": "0"}]}
    ]);
    std::fs::write(&rcc, table.to_string()).unwrap();
    let out = run(&["check-axioms", "--rcc", p(&rcc), "--json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["pass"], false);
}

#[test]
fn decompose_joint_writes_cells_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let cells = dir.path().join("cells.json");
    let table = dir.path().join("table.json");
    let out = run(&[
        "decompose-joint",
        "--events",
        p(&data("events_fan.json")),
        "--validate",
        "20000",
        "--dist",
        p(&data("mu.json")),
        "--out",
        p(&cells),
        "--table",
        p(&table),
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["exact_check"]["mismatches"], 0);
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&cells).unwrap()).unwrap();
    let cells = d["cells"].as_array().unwrap();
    assert!(!cells.is_empty());
    for c in cells {
        assert!(c["events"].as_array().unwrap().len() <= 3);
    }
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(t.as_array().unwrap().len(), cells.len() + 1);
    assert_eq!(v["joint_table"]["rows"].as_array().unwrap().len(), cells.len() + 1);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, class) in [
        ("pref1.json", "pivot"),
        ("eu.json", "indifference"),
        ("nu1.json", "circle"),
        ("nu2.json", "sample-direction"),
    ] {
        let svg = dir.path().join("f.svg");
        let out = run(&["render", "--spec", p(&data(spec)), "--out", p(&svg)]);
        assert_eq!(code(&out), 0, "{spec}");
        let text = std::fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<svg") || text.starts_with("<?xml"), "{spec}");
        assert!(text.contains(&format!("class=\"{class}\"")), "{spec}");
        assert!(text.trim_end().ends_with("</svg>"));
    }
    assert_eq!(code(&run(&["render", "--spec", p(&data("pref1.json"))])), 2);
}

#[test]
fn same_seed_gives_identical_json_across_thread_counts() {
    let (dist, menus) = (data("nu1.json"), data("menus.json"));
    let go = |t: &str| {
        let args = [
            "sample-rcc",
            "--dist",
            p(&dist),
            "--menus",
            p(&menus),
            "--n",
            "50000",
            "--seed",
            "7",
            "--threads",
            t,
            "--json",
        ];
        run(&args).stdout
    };
    let one = go("1");
    assert!(!one.is_empty());
    assert_eq!(one, go("1"));
    assert_eq!(one, go("4"));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"kind\": \"nope\"}").unwrap();
    assert_eq!(
        code(&run(&[
            "sample-rcc",
            "--dist",
            p(&junk),
            "--menus",
            p(&data("menus.json"))
        ])),
        2
    );
    assert_eq!(code(&run(&["check-axioms", "--rcc", "/nonexistent.json"])), 2);
    assert_eq!(code(&run(&["identify-moments", "--law", p(&junk)])), 2);
}
