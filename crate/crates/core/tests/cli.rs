use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use matfac::corpus::MFDocument;
use matfac::mfcore::MatrixFactorization;
use matfac::ring::{Field, Poly, Ring};

fn matfac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matfac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus_file(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{name}.mf"))
        .display()
        .to_string()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn certificate(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(&matfac(args))).unwrap()
}

fn write_doc(dir: &Path, name: &str, x: &MatrixFactorization) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, MFDocument::from_factorization(x, None).print()).unwrap();
    path
}

#[test]
fn shift_moves_the_first_projective_to_the_last() {
    let dir = tempfile::tempdir().unwrap();
    let ring = Ring::new(Field::Rational, &["x", "y"]).unwrap();
    let f = Poly::parse(&ring, "x^2*y").unwrap();
    let p1 = write_doc(
        dir.path(),
        "p1.mf",
        &MatrixFactorization::projective(1, 3, &f),
    );
    let shifted = MFDocument::parse(&stdout(&matfac(&[
        "shift",
        "-j",
        "1",
        p1.to_str().unwrap(),
    ])))
    .unwrap();
    let p3 = MFDocument::from_factorization(&MatrixFactorization::projective(3, 3, &f), None);
    assert_eq!(
        shifted.to_factorization().unwrap(),
        p3.to_factorization().unwrap()
    );
}

#[test]
fn predict_dinfty() {
    let cert = certificate(&["predict", &corpus_file("dinfty")]);
    assert_eq!(cert["valid"], true);
    assert_eq!(cert["evidence"]["m"], serde_json::json!([0, 0, 1]));
    assert_eq!(cert["evidence"]["stable_size"], 3);
}

#[test]
fn verify_e6() {
    let cert = certificate(&["verify", &corpus_file("e6")]);
    assert_eq!(cert["valid"], true);
    assert_eq!(cert["evidence"]["reduced"], true);
}

#[test]
fn certificates_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let args = ["--seed", "11", "resolution", &corpus_file("lines3")];
    let first = stdout(&matfac(&args));
    let mut with_out = args.to_vec();
    let out_arg = out.to_str().unwrap();
    with_out.extend(["--out", out_arg]);
    let second = stdout(&matfac(&with_out));
    assert_eq!(first, second);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    let cert: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(cert["seed"], 11);
    assert_eq!(cert["inputs"][0]["name"], "lines3.mf");
}

#[test]
fn format_is_idempotent_on_the_corpus() {
    for name in ["dinfty", "e7", "lines4"] {
        let path = corpus_file(name);
        assert_eq!(
            stdout(&matfac(&["format", &path])),
            std::fs::read_to_string(&path).unwrap()
        );
    }
}

#[test]
fn syzygy_output_is_a_document() {
    let text = stdout(&matfac(&["syzygy", &corpus_file("dinfty")]));
    let doc = MFDocument::parse(&text).unwrap();
    assert_eq!(doc.n, 4);
    assert!(doc.to_factorization().unwrap().verify().valid);
}

#[test]
fn split_modes() {
    let dir = tempfile::tempdir().unwrap();
    let syz = dir.path().join("syz.mf");
    std::fs::write(&syz, stdout(&matfac(&["syzygy", &corpus_file("dinfty")]))).unwrap();
    let syz = syz.to_str().unwrap();
    let exact = certificate(&["split", syz]);
    assert_eq!(exact["valid"], true);
    assert_eq!(
        exact["evidence"]["multiplicities"],
        serde_json::json!([0, 0, 1])
    );
    assert_eq!(exact["exactness"], "exact");
    let truncated = certificate(&["split", "--mode", "truncated", "--precision", "5", syz]);
    assert_eq!(
        truncated["evidence"]["multiplicities"],
        serde_json::json!([0, 0, 1])
    );
}

#[test]
fn sum_and_checks_pass_on_the_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let sum = dir.path().join("sum.mf");
    let text = stdout(&matfac(&["sum", &corpus_file("e8a"), &corpus_file("e8b")]));
    std::fs::write(&sum, text).unwrap();
    let sum = sum.to_str().unwrap();
    for cmd in [
        "iso-check",
        "cone",
        "homotopy-verify",
        "gamma-check",
        "cover-check",
    ] {
        assert_eq!(certificate(&[cmd, sum])["valid"], true, "{cmd}");
    }
    assert_eq!(
        certificate(&["cone", "--map", "zero", &corpus_file("pair")])["valid"],
        true
    );
}

#[test]
fn invalid_factorization_is_a_verdict_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus_file("pair"))
        .unwrap()
        .replace("\"x*y\"", "\"x*y^2\"");
    let path = dir.path().join("bad.mf");
    std::fs::write(&path, text).unwrap();
    let path = path.to_str().unwrap();
    let cert = certificate(&["verify", path]);
    assert_eq!(cert["valid"], false);
    assert_eq!(cert["evidence"]["report"]["first_failure"], 1);
    assert_eq!(certificate(&["resolution", path])["valid"], false);
    // Transforms have nothing to print for a non-factorization.
    assert_eq!(matfac(&["syzygy", path]).status.code(), Some(3));
}

#[test]
fn errors_set_the_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.mf");
    std::fs::write(&path, "{\n  \"field\": \"Q\",\n  oops\n}\n").unwrap();
    let out = matfac(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        matfac(&["verify", "/no/such/file.mf"]).status.code(),
        Some(2)
    );
    let out = matfac(&["cover-check", "--prime", "11", &corpus_file("dinfty")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corpus_run_passes() {
    let cert = certificate(&["corpus-run"]);
    assert_eq!(cert["valid"], true);
    assert_eq!(cert["evidence"]["criteria"].as_array().unwrap().len(), 10);
}
