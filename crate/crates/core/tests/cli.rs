use std::path::{Path, PathBuf};
use std::process::Command;

use qshape::cli::{run_args, Outcome, EXIT_CERTIFICATE, EXIT_FALSE, EXIT_INPUT, EXIT_PASS};
use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/v1").join(name)
}

fn qshape(args: &[&str]) -> Outcome {
    run_args(std::iter::once("qshape").chain(args.iter().copied()))
}

fn json_of(out: &Outcome) -> Value {
    assert_eq!(out.code, EXIT_PASS, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid JSON output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn shift_fixture_has_no_homology() {
    let path = fixture("k2_shift.json");
    let doc = json_of(&qshape(&["homology", path.to_str().unwrap()]));
    assert_eq!(doc["kind"], "homology");
    assert_eq!(doc["exact"], true);
    let entries = doc["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        assert!(e["dims"].as_array().unwrap().iter().all(|d| d == 0), "{e}");
    }
}

#[test]
fn rz_k_on_simple_fixture() {
    let path = fixture("s2_a2.json");
    let doc = json_of(&qshape(&["rz", "k", path.to_str().unwrap()]));
    assert_eq!(doc["kind"], "diffmod");
    assert_eq!(doc["module"]["dims"], json!([2, 1]));
    // J = I_2 ⊕ I_1 with ∂ mapping the top of I_2 onto I_1.
    assert_eq!(doc["differential"], json!([[[0, 0], [1, 0]], [[0]]]));
    assert_eq!(doc["module"]["maps"]["a"], json!([[1, 0]]));

    let dir = tempfile::tempdir().unwrap();
    let j = write(dir.path(), "j.json", &serde_json::to_string(&doc).unwrap());
    let h = json_of(&qshape(&["rz", "h", &j]));
    assert_eq!(h["kind"], "module");
    assert_eq!(h["module"]["dims"], json!([0, 1]));
}

fn generated(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = qshape(&[&["generate"], args].concat());
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    write(dir, name, &out.stdout)
}

/// One input per command, written to a temporary directory.
fn jobs(dir: &Path) -> Vec<Vec<String>> {
    let m1 = generated(dir, "m1.json", &["module", "--seed", "11", "--algebra", "A3"]);
    let m2 = generated(dir, "m2.json", &["module", "--seed", "12", "--algebra", "A3"]);
    let d = generated(dir, "d.json", &["diffmod", "--seed", "3", "--field", "F5", "--max-dim", "10"]);
    let si =
        generated(dir, "si.json", &["semiinjective", "--seed", "5", "--field", "F3", "--shape", "cyclic:3,2", "--max-dim", "12"]);
    let lp = generated(dir, "lp.json", &["semiinjective", "--seed", "6", "--max-dim", "10"]);
    let s2 = fixture("s2_a2.json").to_str().unwrap().to_string();
    let shift = fixture("k2_shift.json").to_str().unwrap().to_string();
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        v(&["homology", &d]),
        v(&["homology", &si]),
        v(&["homology", &shift]),
        v(&["resolve", &d]),
        v(&["resolve", &si]),
        v(&["resolve", &shift]),
        v(&["split", &si]),
        v(&["split", &lp]),
        v(&["check-minimal", &si]),
        v(&["check-minimal", &lp]),
        v(&["iso", &m1, &m1]),
        v(&["iso", &m1, &m2]),
        v(&["iso", &si, &si]),
        v(&["hom-derived", &m1, &m2]),
        v(&["rz", "k", &s2]),
        v(&["rz", "k", &m1]),
    ]
}

#[test]
fn outputs_are_byte_identical_and_reverify() {
    let dir = tempfile::tempdir().unwrap();
    for (n, job) in jobs(dir.path()).into_iter().enumerate() {
        let args: Vec<&str> = job.iter().map(String::as_str).collect();
        let a = qshape(&args);
        let b = qshape(&args);
        assert_eq!(a, b, "job {job:?} is not deterministic");
        assert!(a.code == EXIT_PASS || a.code == EXIT_FALSE, "job {job:?}: {}", a.stderr);
        let out = write(dir.path(), &format!("out{n}.json"), &a.stdout);
        let v = qshape(&["verify", &out]);
        assert_eq!(v.code, EXIT_PASS, "job {job:?} failed to re-verify:\n{}{}", v.stdout, v.stderr);
        assert_eq!(serde_json::from_str::<Value>(&v.stdout).unwrap()["passed"], true);
    }
}

#[test]
fn generated_inputs_depend_only_on_the_seed() {
    let a = qshape(&["generate", "diffmod", "--seed", "42"]);
    let b = qshape(&["generate", "diffmod", "--seed", "42"]);
    let c = qshape(&["generate", "diffmod", "--seed", "43"]);
    assert_eq!(a, b);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn tampered_certificates_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = generated(dir.path(), "d.json", &["diffmod", "--seed", "8", "--max-dim", "8"]);
    let mut doc = json_of(&qshape(&["resolve", &d]));
    doc["certificates"]["minimal"] = json!(false);
    let bad = write(dir.path(), "bad.json", &doc.to_string());
    let v = qshape(&["verify", &bad, "--format", "summary"]);
    assert_eq!(v.code, EXIT_CERTIFICATE, "{}", v.stdout);
    assert!(v.stdout.contains("FAIL minimal"), "{}", v.stdout);

    let m = generated(dir.path(), "m.json", &["module", "--seed", "2", "--max-dim", "6"]);
    let mut iso = json_of(&qshape(&["iso", &m, &m]));
    let zeroed = zero_matrices(&iso["witness"]);
    iso["witness"] = zeroed;
    let bad = write(dir.path(), "bad_iso.json", &iso.to_string());
    assert_eq!(qshape(&["verify", &bad]).code, EXIT_CERTIFICATE);

    let mut hom = json_of(&qshape(&["homology", fixture("k2_shift.json").to_str().unwrap()]));
    hom["entries"][0]["dims"] = json!([1]);
    let bad = write(dir.path(), "bad_hom.json", &hom.to_string());
    assert_eq!(qshape(&["verify", &bad]).code, EXIT_CERTIFICATE);
}

fn zero_matrices(v: &Value) -> Value {
    match v {
        Value::Array(xs) => Value::Array(xs.iter().map(zero_matrices).collect()),
        Value::Number(_) => json!(0),
        other => other.clone(),
    }
}

#[test]
fn input_errors_carry_name_path_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let syntax = write(dir.path(), "syntax.json", "{\n  \"format\": \"qshape\",\n  \"version\": }\n");
    let out = qshape(&["resolve", &syntax]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("error[parse-error]") && out.stderr.contains("line 3"), "{}", out.stderr);
    assert!(out.stderr.contains("digest "), "{}", out.stderr);

    let shape = json!({
        "format": "qshape", "version": 1, "kind": "module",
        "field": {"kind": "prime", "p": 3},
        "algebra": {"vertices": ["1", "2"], "arrows": [{"name": "a", "source": "1", "target": "2"}]},
        "module": {"dims": [1, 2], "maps": {"a": [[1], [2, 0]]}}
    });
    let bad = write(dir.path(), "rows.json", &shape.to_string());
    let out = qshape(&["resolve", &bad]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("module.maps.a[1]"), "{}", out.stderr);

    let mut not_square_zero = shape.clone();
    not_square_zero["kind"] = json!("diffmod");
    not_square_zero["module"] = json!({"dims": [0, 1]});
    not_square_zero["differential"] = json!([[], [[1]]]);
    let bad = write(dir.path(), "dsq.json", &not_square_zero.to_string());
    let out = qshape(&["resolve", &bad]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.starts_with("error[") && out.stderr.contains("dsq.json"), "{}", out.stderr);

    let out = qshape(&["homology", fixture("k2_shift.json").to_str().unwrap(), "--field", "F7"]);
    assert_eq!(out.code, EXIT_INPUT);

    let out = qshape(&["selftest", "huge"]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn verdicts_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = json!({
        "format": "qshape", "version": 1, "kind": "module",
        "field": {"kind": "prime", "p": 2},
        "algebra": {"vertices": ["1", "2"], "arrows": [{"name": "a", "source": "1", "target": "2"}]},
        "module": {"dims": [1, 0]}
    });
    let a = write(dir.path(), "s1.json", &s1.to_string());
    let s2 = fixture("s2_a2.json");
    let out = qshape(&["iso", &a, s2.to_str().unwrap(), "--format", "summary"]);
    assert_eq!(out.code, EXIT_FALSE, "{}", out.stdout);
    assert!(out.stdout.starts_with("not isomorphic"));

    // A non-minimal semiinjective object: the loop diagram of an injective with zero differential.
    let inj = json!({
        "format": "qshape", "version": 1, "kind": "diffmod",
        "field": {"kind": "prime", "p": 2},
        "algebra": {"vertices": ["1", "2"], "arrows": [{"name": "a", "source": "1", "target": "2"}]},
        "module": {"dims": [2, 2], "maps": {"a": [[1, 0], [0, 1]]}},
        "differential": [[[0, 0], [1, 0]], [[0, 0], [1, 0]]]
    });
    let p = write(dir.path(), "inj.json", &inj.to_string());
    let out = qshape(&["check-minimal", &p, "--format", "summary"]);
    assert_eq!(out.code, EXIT_FALSE, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("semiinjective: true") && out.stdout.contains("minimal: false"), "{}", out.stdout);
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("res.json");
    let path = fixture("s2_a2.json");
    let out = qshape(&["resolve", path.to_str().unwrap(), "--output", target.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.is_empty());
    let direct = qshape(&["resolve", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), direct.stdout);
}

#[test]
fn binary_matches_library_entry_point() {
    let path = fixture("k2_shift.json");
    let out = Command::new(env!("CARGO_BIN_EXE_qshape")).args(["homology", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let lib = qshape(&["homology", path.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);

    let out = Command::new(env!("CARGO_BIN_EXE_qshape")).args(["verify", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn goldens_are_reproduced_byte_for_byte() {
    let goldens = [
        ("homology_k2_shift.json", vec!["homology", "k2_shift.json"]),
        ("rz_k_s2_a2.json", vec!["rz", "k", "s2_a2.json"]),
        ("resolve_s2_a2.json", vec!["resolve", "s2_a2.json"]),
        ("check_minimal_cyclic32.json", vec!["check-minimal", "cyclic32_semiinjective.json"]),
        ("split_cyclic32.json", vec!["split", "cyclic32_semiinjective.json"]),
    ];
    for (golden, args) in goldens {
        let args: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".json") { fixture(a).to_str().unwrap().to_string() } else { a.to_string() })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = qshape(&args);
        let expected = std::fs::read_to_string(fixture(&format!("golden/{golden}"))).unwrap();
        assert_eq!(out.stdout, expected, "{golden} drifted");
        let v = qshape(&["verify", fixture(&format!("golden/{golden}")).to_str().unwrap()]);
        assert_eq!(v.code, EXIT_PASS, "{golden}: {}", v.stdout);
    }
}
