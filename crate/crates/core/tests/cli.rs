//! The `mmv-kit` binary, driven as a subprocess.

use mmv_kit::numeval::{eval_value, NamedValue};
use mmv_kit::shell::{parse, render_digits, GUARD_DIGITS};
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmv-kit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_matches_library_digits() {
    for src in ["M(-2)", "T(1,2)", "S(1,2)", "t(3)", "zeta(-1,2)", "psi(1,2;3)", "Tconv(2|1,1)"] {
        let v: NamedValue = parse(src).unwrap().as_value().unwrap().clone();
        let o = bin(&["eval", src, "--digits", "35"]);
        assert!(o.status.success(), "{src}");
        let lib = render_digits(&eval_value(&v, 35 + GUARD_DIGITS).unwrap(), 35);
        assert_eq!(stdout(&o).trim(), lib, "{src}");
    }
}

#[test]
fn digits_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mmv-kit"))
        .args(["eval", "log2"])
        .env("MMV_KIT_DIGITS", "12")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "0.693147180559 (±1ulp)");
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["eval", "T(1,"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "Q(2)"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "T(2,1)"]).status.code(), Some(3));
    assert_eq!(bin(&["dual", "M(2,1)"]).status.code(), Some(3));
    assert_eq!(bin(&["dim", "--weight", "99"]).status.code(), Some(3));
    assert_eq!(bin(&["verify", "/nonexistent/fixtures.jsonl"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn products_and_duals_print_combinations() {
    let o = bin(&["product", "--mode", "st", "M(2,1,-3)", "M(-2)"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("2*M(2,1,-5)"), "{text}");
    let o = bin(&["product", "--mode", "sha", "M(-2)", "M(2)"]);
    assert!(o.status.success());
    let o = bin(&["dual", "M(-1,1,2)"]);
    let text = stdout(&o);
    for term in ["M(-4)", "M(-1,-3)", "M(-1,3)"] {
        assert!(text.contains(term), "{text}");
    }
}

#[test]
fn relations_written_to_file() {
    let path = std::env::temp_dir().join(format!("mmv_kit_rel_{}.json", std::process::id()));
    let o = bin(&["relations", "--weight", "3", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(j["bound"], 2);
    assert_eq!(j["generators"].as_array().unwrap().len(), j["rank"].as_u64().unwrap() as usize + 2);
    assert!(j["relations"].as_array().unwrap().iter().all(|r| r["coeffs"].is_object() && r["source"].is_string()));
}

#[test]
fn verify_reports_each_fixture() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/msv.jsonl");
    let o = bin(&["verify", path]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.ends_with(" ok")).count() >= 5, "{text}");
}
