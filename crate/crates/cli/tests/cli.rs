use corravg_cli::{run_with, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("corravg").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn compute_parity_deviation() {
    let (code, out, _) = run(&["compute", "--function", "parity", "--N", "100", "--H", "5", "--quantity", "deviation"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "-100\n");
    let (_, out, _) = run(&["compute", "--function", "parity", "--N", "100", "--H", "3", "--quantity", "modified"]);
    assert_eq!(out, "11.1111111111\n");
    let (_, out, _) = run(&["compute", "--function", "moebius", "--N", "10", "--H", "2", "--quantity", "selberg"]);
    assert_eq!(out, "15\n");
}

#[test]
fn verify_json_report() {
    let (code, out, _) = run(&["verify", "--function", "parity", "--N", "100", "--H", "3", "--identity", "I", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["function"], "parity");
    assert_eq!(v["meta"]["N"], 100);
    assert!(v["meta"]["version"].is_string());
    assert_eq!(v["results"][0]["residual"], 2.0);
    assert_eq!(v["results"][0]["which"], "I");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["compute", "--function", "parity", "--N", "100", "--H", "0", "--quantity", "deviation"],
        vec!["compute", "--function", "parity", "--N", "100", "--H", "101", "--quantity", "deviation"],
        vec!["compute", "--function", "parity", "--N", "100", "--H", "3", "--quantity", "nope"],
        vec!["compute", "--function", "parity", "--N", "100", "--H", "3", "--quantity", "selberg", "--bogus"],
        vec!["compute", "--function", "rademacher", "--N", "100", "--H", "3", "--quantity", "selberg"],
        vec!["theorem", "--function", "parity", "--N", "100", "--H", "3", "--A", "1"],
        vec!["scan", "--function", "parity", "--N", "100", "--H-grid", "list:5,3"],
        vec!["verify", "--function", "parity", "--N", "100", "--H", "3", "--identity", "IV"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn gallagher_threshold_controls_exit_code() {
    let base = ["gallagher", "--function", "parity", "--N", "100", "--H", "1"];
    let (code, out, _) = run(&base);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("lhs=100\trhs_core=101"));
    let mut tight = base.to_vec();
    tight.extend(["--threshold", "0.5"]);
    let (code, _, err) = run(&tight);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(err.contains("exceeds threshold"));
}

#[test]
fn theorem_accepts_negative_exponent() {
    let (code, out, _) = run(&["theorem", "--function", "parity", "--N", "100", "--H", "31", "--A", "-1", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"][0]["params"]["derived_length"], 1);
    assert_eq!(v["results"][0]["observed"], 100.0);
    assert_eq!(v["results"][0]["conclusion_ratio"], 0.00334548860861);
}

#[test]
fn scan_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let csv_s = csv.to_str().unwrap();
    let args = ["scan", "--function", "parity", "--N", "100", "--H-grid", "list:3,4", "--csv", csv_s];
    let (code, out, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.is_empty());
    let first = std::fs::read_to_string(&csv).unwrap();
    let mut lines = first.lines();
    assert_eq!(lines.next().unwrap(), "H,deviation,selberg,modified,ratio_I,ratio_II,ratio_III,gallagher_ratio");
    assert!(lines.next().unwrap().starts_with("3,-100,100,11.1111111111,"));
    assert!(lines.next().unwrap().starts_with("4,0,0,0,"));
    run(&args);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), first);

    let json = ["scan", "--function", "rademacher", "--seed", "3", "--N", "500", "--H-grid", "geom:1:200:6", "--json"];
    let (code, a, _) = run(&json);
    assert_eq!(code, EXIT_OK);
    let (_, b, _) = run(&json);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["meta"]["seed"], 3);
    assert_eq!(v["results"].as_array().unwrap().len(), 6);
}

#[test]
fn gen_then_load_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let p = path.to_str().unwrap();
    let (code, _, _) = run(&["gen", "--function", "moebius", "--N", "10", "--out", p]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,value\n1,1\n2,-1\n3,-1\n4,0\n"));
    let spec = format!("file:{p}");
    let (code, out, _) = run(&["compute", "--function", &spec, "--H", "2", "--quantity", "selberg"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "15\n");
    let (code, _, _) = run(&["compute", "--function", &spec, "--N", "11", "--H", "2", "--quantity", "selberg"]);
    assert_eq!(code, EXIT_USAGE);

    std::fs::write(&path, "n,value\n1,1\n2,nan\n3,1\n").unwrap();
    let (code, _, err) = run(&["compute", "--function", &spec, "--H", "1", "--quantity", "selberg"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("row 2"));
}

#[test]
fn verify_all_identities_by_default() {
    let (code, out, _) = run(&["verify", "--function", "liouville", "--N", "1000", "--H", "32"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 3);
}
