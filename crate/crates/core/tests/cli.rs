use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn instances() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances")
}

fn inst(name: &str) -> PathBuf {
    instances().join(name)
}

fn coreg(args: &[&str], path: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coreg"));
    cmd.arg(args[0]).arg(path).args(&args[1..]).env_remove("COREG_BUDGET");
    cmd.output().expect("coreg runs")
}

fn report(args: &[&str], path: &Path) -> (Value, i32) {
    let out = coreg(args, path);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?} on {}: {e}", path.display()));
    (v, out.status.code().unwrap())
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, report: &Value) {
    let errors: Vec<String> = v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations {errors:?} in {report}");
}

fn shipped() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(instances())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "inst"))
        .collect();
    files.sort();
    files
}

#[test]
fn fwidth_of_e1() {
    let (v, code) = report(&["fwidth", "--ideal", "a", "--artinian", "N"], &inst("e1.inst"));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["fwidth"], 1);
    assert_eq!(v["result"]["obstruction"], "(x)");
    assert_eq!(v["result"]["certificate"]["kind"], "obstruction");
}

#[test]
fn theorem_on_e1_exits_zero() {
    let (v, code) = report(&["verify-theorem", "--M", "M", "--N", "N", "--ideal", "a", "--n", "1"], &inst("e1.inst"));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["agreement"], true);
}

#[test]
fn profile_of_e3_is_all_finitely_generated() {
    let (v, code) = report(&["profile", "--M", "M", "--N", "N", "--ideal", "a", "--imax", "2"], &inst("e3.inst"));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["first_non_finitely_generated"], "infinity");
}

#[test]
fn reports_validate_and_repeat_byte_for_byte() {
    let v = validator();
    let graded_only: &[&[&str]] = &[&["ext", "--M", "M", "--L", "L", "--index", "1"], &["fdepth", "--ideal", "a", "--M", "L"], &["oracle-width", "--ideal", "a", "--N", "N"]];
    let common: &[&[&str]] = &[
        &["fwidth", "--ideal", "a", "--N", "N"],
        &["fseq", "--ideal", "a", "--N", "N"],
        &["att", "--N", "N"],
        &["cosupp", "--N", "N"],
        &["length", "--of", "N"],
        &["tor", "--M", "M", "--N", "N", "--index", "1"],
        &["profile", "--M", "M", "--N", "N", "--ideal", "a", "--slices", "--nmax", "3"],
        &["verify-theorem", "--M", "M", "--N", "N", "--ideal", "a", "--n", "1"],
        &["oracle-att", "--N", "N"],
        &["oracle-tor", "--M", "M", "--N", "N", "--index", "1"],
    ];
    for path in shipped() {
        let graded = !std::fs::read_to_string(&path).unwrap().contains("field = ZZ");
        let extra = if graded { graded_only } else { &[] };
        for args in common.iter().chain(extra) {
            let first = coreg(args, &path);
            let second = coreg(args, &path);
            assert_eq!(first.stdout, second.stdout, "{args:?} on {} differs between runs", path.display());
            assert_eq!(first.status.code(), Some(0), "{args:?} on {}", path.display());
            assert_valid(&v, &serde_json::from_slice(&first.stdout).unwrap());
        }
    }
}

#[test]
fn inclusions_on_shipped_sequences() {
    let v = validator();
    for path in shipped() {
        if !std::fs::read_to_string(&path).unwrap().contains("[sequence s]") {
            continue;
        }
        let (r, code) = report(&["verify-inclusions", "--M", "M", "--N", "N", "--seq", "s"], &path);
        assert_eq!(code, 0, "{}: {r}", path.display());
        assert_eq!(r["result"]["pass"], true);
        assert_valid(&v, &r);
    }
}

#[test]
fn parse_errors_are_positioned() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.inst");
    std::fs::write(&path, "[ring]\nfield = QQ\nvars = x, y\n[ideal a]\ngens = x + z\n").unwrap();
    let out = coreg(&["gb", "--ideal", "a"], &path);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("bad.inst:5:12: undeclared variable 'z'"), "{stderr}");
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["errors"][0]["kind"], "parse");
    assert_eq!(r["errors"][0]["line"], 5);
    assert_valid(&validator(), &r);
}

#[test]
fn exit_codes() {
    assert_eq!(coreg(&["fwidth", "--ideal", "a"], &inst("e1.inst")).status.code(), Some(2));
    assert_eq!(coreg(&["gb", "--ideal", "nope"], &inst("e1.inst")).status.code(), Some(2));
    assert_eq!(coreg(&["fwidth", "--ideal", "a", "--N", "N"], Path::new("/nonexistent.inst")).status.code(), Some(2));
    assert_eq!(coreg(&["ext", "--M", "M", "--L", "M"], &inst("prufer.inst")).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_coreg"))
        .args(["fwidth"])
        .arg(inst("maximal_three.inst"))
        .args(["--ideal", "a", "--N", "N"])
        .env("COREG_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["errors"][0]["kind"], "search-budget-exceeded");
}

#[test]
fn timing_only_on_request() {
    let (plain, _) = report(&["gb", "--ideal", "a"], &inst("e1.inst"));
    assert!(plain.get("timing_ms").is_none());
    let (timed, _) = report(&["gb", "--ideal", "a", "--timing"], &inst("e1.inst"));
    assert!(timed["timing_ms"].as_f64().unwrap() >= 0.0);
    assert_valid(&validator(), &timed);
}

#[test]
fn text_format() {
    let out = coreg(&["fwidth", "--ideal", "a", "--N", "N", "--format", "text"], &inst("e1.inst"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fwidth: 1"));
    assert!(text.contains("status: ok"));
}

#[test]
fn prufer_examples() {
    let (r, code) = report(&["verify-theorem", "--M", "Q", "--N", "N", "--ideal", "a", "--n", "3"], &inst("prufer.inst"));
    assert_eq!(code, 0);
    assert!(r["result"]["clauses"].as_array().unwrap().iter().all(|c| c["status"] == "holds"));
    let (r, _) = report(&["tor", "--M", "Q", "--N", "N", "--index", "1"], &inst("prufer.inst"));
    assert_eq!(r["result"]["tor"], "Z/4");
}
