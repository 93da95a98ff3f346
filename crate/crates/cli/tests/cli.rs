use std::path::Path;
use std::process::{Command, Output};

use oscu_core::fixtures;
use serde_json::Value;

fn oscu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscu")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = oscu(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CONIC: &str = r#"{"variables":["a","b","c"],"polynomial":"a*c - b^2","field":"Q","point":["1","0","0"],"order":2}"#;

#[test]
fn det3_demo() {
    let r = &json(&["demo", "det3"])["results"];
    assert_eq!(r["rank_tilde"], 7);
    assert_eq!(r["rank_phi"], 0);
    assert_eq!(r["gauss_rank"], 4);
    assert_eq!(r["forms"]["F02"], "2*y3*y6 + 2*y4*y7");
}

#[test]
fn fermat_and_perm3_demos() {
    assert_eq!(json(&["demo", "fermat", "--n", "3"])["results"]["rank_phi"], 3);
    let r = json(&["demo", "perm3", "--samples", "2"]);
    let samples = r["results"]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 2);
    assert!(samples.iter().all(|s| s["rank_phi"] == 3));
}

#[test]
fn conic_has_no_cubic_form() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "conic.json", CONIC);
    let r = &json(&["fubini", "--input", &spec])["results"];
    assert_eq!(r["forms"]["F03"], "0");
    assert_eq!(r["forms"]["F02"], "2*y1^2");
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "det3.json", &fixtures::det3(3).unwrap().to_json());
    let a = oscu(&["oracle", "--input", &spec, "--samples", "40", "--seed", "9"]);
    let b = oscu(&["oracle", "--input", &spec, "--samples", "40", "--seed", "9", "--jobs", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("mismatches: []"), "{text}");
}

#[test]
fn hilbert_flags_det3_in_degree_four() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "det3.json", &fixtures::det3(3).unwrap().to_json());
    let r = &json(&["hilbert", "--input", &spec])["results"];
    let defects: Vec<u64> = r["defects"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(defects[..4], [0, 0, 0, 0]);
    assert!(defects[4] > 0, "{defects:?}");
}

#[test]
fn family_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "family.json",
        r#"{"variables":["u","v","w"],"forms":["u^2 + v^2 + w^2","u*v*w - w^3"]}"#,
    );
    let out = dir.path().join("spec.json");
    let status = oscu(&["family", "--input", &input, "--output", out.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let r = &json(&["fubini", "--input", out.to_str().unwrap()])["results"];
    assert_eq!(r["forms"]["F02"], "2*y1^2 + 2*y2^2 + 2*y3^2");
    assert_eq!(r["forms"]["F03"], "-6*y1*y2*y3 + 6*y3^3");
    assert_eq!(r["gauss_rank"], 3);

    // One degree higher, a generic quartic term breaks membership.
    let input = write(
        dir.path(),
        "family4.json",
        r#"{"variables":["u","v","w"],"forms":["u^2 + v^2 + w^2","u*v*w - w^3","u^4 + 2*v^3*w - u*v*w^2"],"degree":4}"#,
    );
    let out = oscu(&["family", "--input", &input, "--order", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let spec = write(dir.path(), "spec4.json", &String::from_utf8(out.stdout).unwrap());
    let r = &json(&["rank", "--input", &spec])["results"];
    assert_eq!(r["phi_member"], false);
    assert_eq!(r["rank_tilde"], 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &CONIC.replace("b^2", "b^^2"));
    assert_eq!(oscu(&["fubini", "--input", &bad]).status.code(), Some(2));
    let spec = write(dir.path(), "conic.json", CONIC);
    assert_eq!(oscu(&["fubini", "--input", &spec, "--point", "0,1,0"]).status.code(), Some(3));
    assert_eq!(oscu(&["fubini", "--input", &spec, "--point", "1,x,0"]).status.code(), Some(2));
    assert_eq!(oscu(&["fubini"]).status.code(), Some(2));
    let singular = write(
        dir.path(),
        "singular.json",
        r#"{"variables":["a","b","c"],"polynomial":"a*b*c","field":"Q","point":["1","0","0"],"order":3}"#,
    );
    assert_eq!(oscu(&["fubini", "--input", &singular]).status.code(), Some(3));
}

#[test]
fn extension_field_point_override() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "fermat.json", &fixtures::fermat(3, 3).unwrap().to_json());
    let r = &json(&["rank", "--input", &spec, "--point", "-1,t,-1,-1,-1"])["results"];
    assert_eq!(r["rank_phi"], 3);
    assert_eq!(r["point"][1], "t");
}
