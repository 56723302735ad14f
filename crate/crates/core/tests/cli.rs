use std::path::PathBuf;
use std::process::{Command, Output};

use stackyrr::cli::parse_report;

fn stackyrr(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stackyrr"));
    c.args(args).env_remove("STACKYRR_TUPLE_CAP").env_remove("STACKYRR_CONDUCTOR_CAP");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stackyrr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn euler_report_parses_back() {
    let o = stackyrr(&["euler", "--gset", "s3-natural", "--oracle"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = parse_report(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(r.command, "euler");
    assert_eq!(r.result["chi_phy"], 2);
    assert!(r.all_agree());
}

#[test]
fn curve_report_values() {
    let o = stackyrr(&["euler", "--curve", "p237"], &[]);
    let r = parse_report(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(r.result["chi_orb"], serde_json::json!(["-1", "42"]));
    assert!(r.oracles.is_none());
}

#[test]
fn rr_on_a_file() {
    let curve = scratch("curve.json", r#"{"genus": 1, "stacky": [{"label": "a", "order": 4}]}"#);
    let div = scratch("div.json", r#"[{"label": "a", "num": 7, "den": 4}, {"label": "b", "num": 2}]"#);
    let o = stackyrr(
        &["rr", "--curve", curve.to_str().unwrap(), "--divisor", div.to_str().unwrap(), "--oracle"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = parse_report(&String::from_utf8(o.stdout).unwrap()).unwrap();
    // floor(7/4) + 2 + 1 - 1
    assert_eq!(r.result["chi"], 3);
    assert_eq!(r.result["multiplicities"]["a"], 3);
}

#[test]
fn output_file_matches_stdout() {
    let target = scratch("out.json", "");
    let a = stackyrr(&["series", "--gset", "d4-vertices"], &[]);
    let b = stackyrr(&["series", "--gset", "d4-vertices", "--output", target.to_str().unwrap()], &[]);
    assert_eq!(b.status.code(), Some(0));
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), a.stdout);
}

#[test]
fn table_format() {
    let o = stackyrr(&["weighted", "--strata", "modular-weights", "--variant", "top", "--format", "table", "--oracle"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("stackyrr weighted (schema 1)\n"));
    assert!(text.contains("weighted_chi  18"));
    assert!(text.contains("agree"));
    assert!(!text.contains("DISAGREE"));
}

#[test]
fn invalid_input_exits_with_2() {
    let bad_json = scratch("bad.json", "{\"group\": \"S3\", \"natural\": ");
    let bad_shape = scratch("shape.json", r#"{"group": "S3", "natural": true, "trivial": 2}"#);
    let not_char = scratch(
        "char.json",
        r#"{"gset": "pt-z2", "orbit_characters": [{"orbit": 0, "values_on_stab_classes": [1, 0]}]}"#,
    );
    let cases: Vec<Vec<&str>> = vec![
        vec!["inertia", "--gset", bad_json.to_str().unwrap()],
        vec!["inertia", "--gset", bad_shape.to_str().unwrap()],
        vec!["devissage", "--bundle", not_char.to_str().unwrap()],
        vec!["classes", "--group", "no-such-group"],
        vec!["report", "--fixture", "no-such-fixture"],
    ];
    for args in cases {
        let o = stackyrr(&args, &[]);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
        assert!(!stderr(&o).is_empty());
    }
    let o = stackyrr(&["inertia", "--gset", bad_json.to_str().unwrap()], &[]);
    assert!(stderr(&o).contains("bad.json"), "{}", stderr(&o));
    let o = stackyrr(&["classes", "--group", "S3"], &[("STACKYRR_TUPLE_CAP", "lots")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_caps_exit_with_3() {
    let o = stackyrr(&["series", "--gset", "pt-s3", "--max-m", "3"], &[("STACKYRR_TUPLE_CAP", "100")]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = stackyrr(&["devissage", "--bundle", "pt-z3-character"], &[("STACKYRR_CONDUCTOR_CAP", "2")]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = stackyrr(&["series", "--gset", "pt-s3", "--max-m", "3"], &[("STACKYRR_TUPLE_CAP", "1000")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn exit_status_mapping() {
    use stackyrr::Error;
    let resource = Error::Resource { what: "x", needed: 2, cap: 1 };
    assert_eq!(resource.exit_status(), 3);
    assert_eq!(Error::Inconsistent("x".into()).exit_status(), 4);
    assert_eq!(Error::Parse("x".into()).exit_status(), 2);
    assert_eq!(Error::DivisionByZero.exit_status(), 2);
}

#[test]
fn reports_are_deterministic() {
    let a = stackyrr(&["report", "--oracle"], &[]);
    let b = stackyrr(&["report", "--oracle"], &[]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let r = parse_report(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert!(r.all_agree());
}
