// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use moment_space::builtin;
use moment_space::format::algebra_to_json;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moment-space"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn build_file(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.path().join(name);
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path_str(&out)]);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn compact_su2_build_and_decompose() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "c.json", &["--type", "compact", "--g", "builtin:su2"]);
    let doc = read(&file);
    assert_eq!(doc["dim"], 6);
    let lambda = doc["lambda"].as_array().unwrap();
    for (r, row) in lambda.iter().enumerate() {
        for (c, x) in row.as_array().unwrap().iter().enumerate() {
            let expected = if r != c {
                0.0
            } else if r < 3 {
                1.0
            } else {
                -1.0
            };
            assert_eq!(x.as_f64().unwrap(), expected);
        }
    }

    let out = dir.path().join("d.json");
    let o = run(&["decompose", path_str(&file), "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let d = read(&out);
    let comps = d["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["type"], "+");
    assert_eq!(comps[0]["dim"], 6);
    assert_eq!(d["pass"], true);
}

#[test]
fn scrambled_sum_decomposes() {
    let dir = TempDir::new().unwrap();
    let file = build_file(
        &dir,
        "s.json",
        &["--type", "noncompact", "--g", "builtin:su2+su3", "--scramble", "11"],
    );
    let o = run(&["decompose", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let d: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut dims: Vec<u64> = d["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            assert_eq!(c["type"], "-");
            c["dim"].as_u64().unwrap()
        })
        .collect();
    dims.sort();
    assert_eq!(dims, vec![6, 16]);
}

#[test]
fn non_effective_input_exits_2_naming_the_hypothesis() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "e.json", &["--type", "euclidean", "--g", "builtin:su2+r1"]);
    let o = run(&["decompose", path_str(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("effective"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&[
            "verify-forms",
            "--case",
            "compact",
            "--g",
            "builtin:su2",
            "--samples",
            "10",
            "--seed",
            "5",
            "--report",
            path_str(p),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let doc = read(&a);
    assert_eq!(doc["case"], "compact");
    assert_eq!(doc["samples"], 10);
    assert_eq!(doc["seed"], 5);
    for c in doc["checks"].as_array().unwrap() {
        assert!(c["name"].is_string() && c["max_residual"].is_number() && c["pass"] == true);
    }
}

#[test]
fn verify_forms_covers_every_family() {
    for case in ["euclidean", "compact", "noncompact"] {
        let o = run(&["verify-forms", "--case", case, "--g", "builtin:su2", "--samples", "5"]);
        assert_eq!(o.status.code(), Some(0), "{case}");
        let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
        let names: Vec<&str> = doc["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        for family in ["realization.", "prop_tau.", "prop_xi.", "min_degeneracy.", "canonical."] {
            assert!(names.iter().any(|n| n.starts_with(family)), "{case} lacks {family}");
        }
    }
}

#[test]
fn check_algebra_flags_a_perturbed_structure_constant() {
    let dir = TempDir::new().unwrap();
    let good = run(&["check-algebra", "builtin:su3"]);
    assert_eq!(good.status.code(), Some(0));

    // Any antisymmetric bracket on a 3-dimensional space of this shape
    // satisfies Jacobi, so the perturbation is applied to su(3).
    let mut doc = algebra_to_json(&builtin("su3").unwrap());
    let file = dir.path().join("g.json");
    std::fs::write(&file, doc.to_string()).unwrap();
    assert_eq!(run(&["check-algebra", path_str(&file)]).status.code(), Some(0));

    let coeffs = doc["brackets"][0]["coeffs"].as_object_mut().unwrap();
    let key = coeffs.keys().next().unwrap().clone();
    let x = coeffs[&key].as_f64().unwrap();
    coeffs.insert(key, Value::from(x + 1e-3));
    std::fs::write(&file, doc.to_string()).unwrap();
    let o = run(&["check-algebra", path_str(&file)]);
    assert_eq!(o.status.code(), Some(1));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    let jacobi = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "jacobi")
        .unwrap();
    assert_eq!(jacobi["pass"], false);
}

#[test]
fn validate_legendrian_flags_corrupted_lambda() {
    let dir = TempDir::new().unwrap();
    let file = build_file(&dir, "c.json", &["--type", "compact", "--g", "builtin:su2"]);
    assert_eq!(run(&["validate-legendrian", path_str(&file)]).status.code(), Some(0));

    let mut doc = read(&file);
    let x = doc["lambda"][0][3].as_f64().unwrap();
    doc["lambda"][0][3] = Value::from(x + 1e-3);
    doc["lambda"][3][0] = Value::from(x + 1e-3);
    std::fs::write(&file, doc.to_string()).unwrap();
    let o = run(&["validate-legendrian", path_str(&file)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["decompose", path_str(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["check-algebra", path_str(&bad)]).status.code(), Some(2));

    let lower = dir.path().join("lower.json");
    std::fs::write(
        &lower,
        r#"{"dim": 2, "brackets": [{"i": 1, "j": 0, "coeffs": {"0": 1.0}}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["check-algebra", path_str(&lower)]).status.code(), Some(2));

    assert_eq!(run(&["check-algebra", "builtin:e8"]).status.code(), Some(2));
    let samples0 = run(&["verify-forms", "--case", "compact", "--g", "builtin:su2", "--samples", "0"]);
    assert_eq!(samples0.status.code(), Some(2));
    let path_g = run(&["verify-forms", "--case", "compact", "--g", path_str(&lower)]);
    assert_eq!(path_g.status.code(), Some(2));
}
