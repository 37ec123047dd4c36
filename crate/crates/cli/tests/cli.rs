use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use opcert_cli::fixtures::{default_dir, load_fixtures};
use opcert_cli::CertificateDocument;

fn opcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcert")).args(args).output().expect("binary runs")
}

fn problem(id: &str) -> PathBuf {
    default_dir().join(id).join("problem")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn certify_to(id: &str, dir: &Path) -> PathBuf {
    let out = dir.join(format!("{id}.json"));
    let o = opcert(&["certify", s(&problem(id)), "--json", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

#[test]
fn certify_prints_the_proof_and_progress_separately() {
    let o = opcert(&["certify", s(&problem("small-certificate"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Done! Ideal membership of all claims could be verified!"));
    assert!(out.contains("-d + a*b*c = (-d + a*b)*c + d*(-1 + c)"));
    assert!(stderr(&o).contains("Computing a (partial) Groebner basis"));
}

#[test]
fn failed_certification_exits_one() {
    let o = opcert(&["certify", s(&problem("long-claim-maxiter-10")), "--maxiter", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Failed! Not all ideal memberships could be verified."));
}

#[test]
fn quiver_errors_exit_two() {
    let o = opcert(&["certify", s(&problem("quiver-typo"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("The claim a*d - b*c is not compatible with the quiver"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad");
    fs::write(&path, "[algebra]\nvars = a, b\n\n[claims]\na*b - q\n").unwrap();
    let o = opcert(&["certify", s(&path)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 5") && err.contains('q'), "{err}");
}

#[test]
fn verify_accepts_documents_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let doc_path = certify_to("mp-uniqueness", dir.path());
    let p = problem("mp-uniqueness");
    let o = opcert(&["verify", s(&p), s(&doc_path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let doc = CertificateDocument::from_json(&fs::read_to_string(&doc_path).unwrap()).unwrap();
    let mut bad = doc.clone();
    bad.claims[0].certificate.as_mut().unwrap()[3].left_coeff = "2".into();
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, bad.to_json()).unwrap();
    let o = opcert(&["verify", s(&p), s(&bad_path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("claim 0 `b - c`"), "{}", stdout(&o));

    let mut bad = doc;
    bad.claims[0].certificate.as_mut().unwrap()[0].gen_index = 12;
    fs::write(&bad_path, bad.to_json()).unwrap();
    let o = opcert(&["verify", s(&p), s(&bad_path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("out of range"));
}

#[test]
fn verify_rejects_a_document_for_another_problem() {
    let dir = tempfile::tempdir().unwrap();
    let doc_path = certify_to("real-mp", dir.path());
    let o = opcert(&["verify", s(&problem("mp-uniqueness")), s(&doc_path)]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn prove_documents_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prove.json");
    let p = problem("mp-existence-prove");
    let o = opcert(&["prove", s(&p), "--json", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("true\n"));
    assert_eq!(opcert(&["verify", s(&p), s(&out)]).status.code(), Some(0));
}

#[test]
fn documents_are_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |path: &Path| {
        let mut doc = CertificateDocument::from_json(&fs::read_to_string(path).unwrap()).unwrap();
        doc.timing.seconds = 0.0;
        doc.to_json()
    };
    for id in ["mp-uniqueness", "full-rank-decomposition"] {
        let a = strip(&certify_to(id, dir.path()));
        let b = strip(&certify_to(id, dir.path()));
        assert_eq!(a, b);
    }
}

#[test]
fn document_field_names() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(certify_to("small-certificate", dir.path())).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "proved");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["timing"]["seconds"].is_number());
    let t = &v["claims"][0]["certificate"][1];
    assert_eq!(t["left_coeff"], "1");
    assert_eq!(t["left_word"], "d");
    assert_eq!(t["gen_index"], 1);
    assert_eq!(t["right_word"], "1");
    assert_eq!(v["claims"][0]["integer_clean"], true);
}

#[test]
fn list_commands() {
    let o = opcert(&["gb", s(&problem("interreduce-xy")), "--interreduce"]);
    assert_eq!(stdout(&o).trim(), "[-y + y*x, -y + y^2]");
    let o = opcert(&["find", s(&problem("find-default")), "a*b"]);
    assert_eq!(stdout(&o).trim(), "[-a*b + c*d]");
    let o = opcert(&["cancel", s(&problem("cancel-left")), "left", "c", "a"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(opcert(&["certify"]).status.code(), Some(2));
    assert_eq!(opcert(&["find", s(&problem("find-default")), "a*b", "--heuristic", "magic"]).status.code(), Some(2));
    assert_eq!(opcert(&["certify", "/nonexistent/problem"]).status.code(), Some(2));
    assert_eq!(opcert(&["--help"]).status.code(), Some(0));
}

#[test]
fn fixture_runner_filters_and_reports() {
    let o = opcert(&["fixtures", "mp-*"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("PASS mp-uniqueness"));
    assert!(!out.contains("real-mp"));
    assert!(out.contains("5/5 fixtures passed"));
}

#[test]
fn every_fixture_names_its_origin() {
    let all = load_fixtures(&default_dir(), None).unwrap();
    assert!(all.len() >= 20);
    for f in &all {
        assert!(!f.expected.origin.is_empty(), "{}", f.id);
    }
}

#[test]
fn whole_corpus_status() {
    let o = opcert(&["fixtures"]);
    let out = stdout(&o);
    // The printed second range inclusion is not reproducible; everything
    // else must pass.
    let failed: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1, "{out}");
    assert!(failed[0].contains("range-inclusion-adjoint-in-dagger"));
    assert_eq!(o.status.code(), Some(1));
}
