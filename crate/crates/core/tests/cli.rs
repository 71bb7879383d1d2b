use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("circuits").join(name)
}

fn qlocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlocal")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Structural equality with numbers compared to `tol`.
fn assert_close(got: &Value, want: &Value, tol: f64, path: &str) {
    match (got, want) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= tol, "{path}: {a} vs {b}");
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len(), "{path}: length");
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                assert_close(x, y, tol, &format!("{path}[{i}]"));
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>(), "{path}: keys");
            for (k, x) in a {
                assert_close(x, &b[k], tol, &format!("{path}.{k}"));
            }
        }
        _ => assert_eq!(got, want, "{path}"),
    }
}

fn golden(circuit: &str, expected: &str, extra: &[&str]) {
    let path = corpus(circuit);
    let mut args = vec!["run", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = qlocal(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let want: Value = serde_json::from_str(&std::fs::read_to_string(corpus(expected)).unwrap()).unwrap();
    assert_close(&json(&out), &want, 1e-12, "$");
}

#[test]
fn corpus_matches_expected_outputs() {
    golden("bell.qc", "bell.expected.json", &[]);
    golden("teleport.qc", "teleport.expected.json", &[]);
    golden(
        "chsh.qc",
        "chsh.expected.json",
        &["--brief", "--pauli", "ZZIIIIII", "--pauli", "IIZZIIII", "--pauli", "IIIIZZII", "--pauli", "IIIIIIZZ"],
    );
}

#[test]
fn bell_reduced_states_are_maximally_mixed() {
    let out = qlocal(&["run", corpus("bell.qc").to_str().unwrap()]);
    let report = json(&out);
    for q in report["qubits"].as_array().unwrap() {
        for key in ["oracle", "from_descriptor", "from_evolution"] {
            let data = q[key]["data"].as_array().unwrap();
            let re: Vec<f64> = data.iter().map(|z| z[0].as_f64().unwrap()).collect();
            for (got, want) in re.iter().zip([0.5, 0.0, 0.0, 0.5]) {
                assert!((got - want).abs() < 1e-12);
            }
        }
    }
    assert_eq!(report["passed"], true);
}

#[test]
fn output_is_byte_stable() {
    let path = corpus("teleport.qc");
    let a = qlocal(&["run", path.to_str().unwrap()]);
    let b = qlocal(&["run", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let c = qlocal(&["check", "thm2", "--n", "3", "--trials", "5", "--seed", "4"]);
    let d = qlocal(&["check", "thm2", "--n", "3", "--trials", "5", "--seed", "4"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn empty_circuit_reports_identity() {
    let dir = scratch("empty");
    let file = dir.join("empty.qc");
    std::fs::write(&file, "qubits 3\n").unwrap();
    let out = qlocal(&["run", file.to_str().unwrap(), "--subset", "1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["max_deviation"].as_f64(), Some(0.0));
    assert_eq!(report["subset"]["subset"]["members"], serde_json::json!([1, 3]));
}

#[test]
fn input_and_resource_errors() {
    let out = qlocal(&["run", corpus("malformed.qc").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(qlocal(&["run", corpus("chsh.qc").to_str().unwrap(), "--max-qubits", "4"]).status.code(), Some(3));
    assert_eq!(qlocal(&["check", "nosuch"]).status.code(), Some(2));
    assert_eq!(qlocal(&["check", "dims", "--n", "4"]).status.code(), Some(3));
    assert_eq!(qlocal(&["run", corpus("bell.qc").to_str().unwrap(), "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn check_suites() {
    let out = qlocal(&["check", "thm1", "--n", "3", "--trials", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("thm1: pass"));

    let out = qlocal(&["check", "dims", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dimensions"]["descriptor_dim"], 12);
    assert!(v["report"]["comparisons"].as_array().unwrap().iter().all(|c| c["deviation"] == 0.0));

    let out = qlocal(&["check", "locality", "--circuit", corpus("bell.qc").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // An impossible tolerance turns the sweep into a semantic negative.
    let out = qlocal(&["check", "thm2", "--n", "2", "--trials", "3", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equivalence_verdicts() {
    let eq = |a: &str, b: &str, subset: &str| {
        let out = qlocal(&[
            "equiv",
            corpus(&format!("equiv/{a}")).to_str().unwrap(),
            corpus(&format!("equiv/{b}")).to_str().unwrap(),
            "--subset",
            subset,
        ]);
        (out.status.code().unwrap(), json(&out))
    };
    let (code, v) = eq("hh.qc", "empty2.qc", "1");
    assert_eq!(code, 0);
    let w = v["witness"]["data"].as_array().unwrap();
    assert!((w[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12 && w[1][0].as_f64().unwrap().abs() < 1e-12);

    for subset in ["1", "2"] {
        let (code, v) = eq("cnot_negate_control.qc", "empty2.qc", subset);
        assert_eq!(code, 1);
        assert_eq!(v["witness"], Value::Null);
        assert!(v["distinguishing_cell"].is_array());
    }

    let (code, v) = eq("bell.qc", "bell_then_x2.qc", "1");
    assert_eq!(code, 0);
    let w: Vec<f64> = v["witness"]["data"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    for (got, want) in w.iter().zip([0.0, 1.0, 1.0, 0.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert_eq!(eq("bell.qc", "bell_then_x2.qc", "2").0, 1);

    let out = qlocal(&["equiv", corpus("bell.qc").to_str().unwrap(), corpus("teleport.qc").to_str().unwrap(), "--subset", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reconstruct_from_exported_matrices() {
    let dir = scratch("ems");
    let bell = corpus("bell.qc");
    let out = qlocal(&["run", bell.to_str().unwrap(), "--brief", "--export-ems", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (q1, q2) = (dir.join("em_q1.json"), dir.join("em_q2.json"));
    let out = qlocal(&["reconstruct", q1.to_str().unwrap(), q2.to_str().unwrap(), "--circuit", bell.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-8);

    // Corrupt one cell of the first grid.
    let mut em: Value = serde_json::from_str(&std::fs::read_to_string(&q1).unwrap()).unwrap();
    em["grid"][0][1]["data"][0][0] = Value::from(0.75);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, em.to_string()).unwrap();
    let out = qlocal(&["reconstruct", bad.to_str().unwrap(), q2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("integrity"));

    let out = qlocal(&["reconstruct", "--circuit", corpus("teleport.qc").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn identity_reconstructs_to_identity() {
    let dir = scratch("identity");
    let file = dir.join("id.qc");
    std::fs::write(&file, "qubits 2\n").unwrap();
    let out = qlocal(&["reconstruct", "--circuit", file.to_str().unwrap()]);
    let u = &json(&out)["unitary"]["data"];
    for (i, z) in u.as_array().unwrap().iter().enumerate() {
        let want = if i % 5 == 0 { 1.0 } else { 0.0 };
        assert!((z[0].as_f64().unwrap() - want).abs() < 1e-15 && z[1].as_f64().unwrap().abs() < 1e-15);
    }
}
