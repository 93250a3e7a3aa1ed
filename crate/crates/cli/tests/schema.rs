use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Validator for one named definition of the shared schema.
fn validator(def: &str) -> jsonschema::Validator {
    let mut schema = read(&root().join("schemas/choice-lab.schema.json"));
    schema["$ref"] = Value::String(format!("#/$defs/{def}"));
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(def: &str, doc: &Value) {
    let v = validator(def);
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{e} at {}", e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{def}: {errors:?}");
}

fn run(args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_choice-lab"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.code().is_some_and(|c| c < 2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn data_files_match_the_schema() {
    let data = root().join("data");
    for (file, def) in [
        ("eu.json", "preference"),
        ("pref1.json", "preference"),
        ("mu.json", "distribution"),
        ("mu_prime.json", "distribution"),
        ("nu1.json", "distribution"),
        ("nu2.json", "distribution"),
        ("law_four_atoms.json", "slope_law"),
        ("law_point_mass.json", "slope_law"),
        ("menus.json", "menus"),
        ("events_fan.json", "events"),
    ] {
        assert_valid(def, &read(&data.join(file)));
    }
}

#[test]
fn schema_rejects_malformed_documents() {
    let v = validator("lottery");
    assert!(!v.is_valid(&serde_json::json!({"x": "1/2", "y": "1/4"})));
    assert!(!v.is_valid(&serde_json::json!({"x": 0.5, "y": "1/4", "chart": "MM"})));
    let v = validator("preference");
    assert!(!v.is_valid(&serde_json::json!({"kind": "eu"})));
    assert!(!v.is_valid(&serde_json::json!({"kind": "wu_pivot", "pivot": ["0", "0"]})));
}

#[test]
fn command_outputs_match_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let data = root().join("data");
    let p = |x: &Path| x.to_str().unwrap().to_string();
    let rcc = dir.path().join("rcc.json");
    let rcc_mc = dir.path().join("rcc_mc.json");
    let cells = dir.path().join("cells.json");
    let table = dir.path().join("table.json");
    let report = dir.path().join("axioms.json");
    run(&[
        "sample-rcc",
        "--dist",
        &p(&data.join("mu.json")),
        "--menus",
        &p(&data.join("menus.json")),
        "--family",
        "--out",
        &p(&rcc),
    ]);
    run(&[
        "sample-rcc",
        "--dist",
        &p(&data.join("nu1.json")),
        "--menus",
        &p(&data.join("menus.json")),
        "--n",
        "20000",
        "--out",
        &p(&rcc_mc),
    ]);
    run(&["check-axioms", "--rcc", &p(&rcc), "--report", &p(&report)]);
    run(&[
        "decompose-joint",
        "--events",
        &p(&data.join("events_fan.json")),
        "--validate",
        "1000",
        "--dist",
        &p(&data.join("nu1.json")),
        "--samples",
        "20000",
        "--out",
        &p(&cells),
        "--table",
        &p(&table),
    ]);
    assert_valid("rcc", &read(&rcc));
    assert_valid("rcc", &read(&rcc_mc));
    assert_valid("axiom_report", &read(&report));
    assert_valid("decomposition", &read(&cells));
    assert_valid("joint_table", &read(&table));
}

#[test]
fn library_serializations_match_the_schema() {
    use choice_lab::io::{DistributionJson, LocalUtilityJson, PreferenceJson};
    use choice_lab::preferences::example1;
    use choice_lab::random_utility::{mu, mu_prime};
    for d in [mu(), mu_prime()] {
        let doc = serde_json::to_value(DistributionJson::from_distribution(&d).unwrap()).unwrap();
        assert_valid("distribution", &doc);
    }
    let prefs = [
        PreferenceJson::WuFunctional(example1::v1()),
        PreferenceJson::SemiWeighted(example1::semi1()),
        PreferenceJson::Implicit {
            local: LocalUtilityJson::Weighted {
                u: [0.0, 1.0, 0.5],
                g: [1.0, 1.0, 0.5],
            },
            ranking: None,
        },
    ];
    for p in prefs {
        assert_valid("preference", &serde_json::to_value(p).unwrap());
    }
}
