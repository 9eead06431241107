use std::path::PathBuf;
use std::process::{Command, Output};

use ordlab::decision::Outcome;
use ordlab::report::Report;

fn ordlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordlab")).args(args).output().expect("binary runs")
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(ordlab(&["cvx", "z*w", "w + z*w"]).status.code(), Some(0));
    assert_eq!(ordlab(&["iso", "z*w", "w + z*w"]).status.code(), Some(0));
    assert_eq!(ordlab(&["iso", "zsum(w;1;2)", "zsum(w;1;3)"]).status.code(), Some(2));
    let bad = ordlab(&["normalize", "w +"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));
}

#[test]
fn both_formats_parse_back() {
    for fmt in ["text", "json"] {
        let out = ordlab(&["--format", fmt, "circ", "pcvx", "C[z]", "C[w+1+w*+e]"]);
        let r = Report::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(r.outcome, Some(Outcome::Yes));
        assert_eq!(r.command, ["circ", "pcvx", "C[z]", "C[w+1+w*+e]"]);
    }
}

#[test]
fn verify_accepts_saved_reports_and_rejects_edits() {
    let out = ordlab(&["cvx", "z*w", "w + z*w"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let good = tmp("good.report");
    std::fs::write(&good, &text).unwrap();
    let v = ordlab(&["verify", good.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));

    let edited = text.replace("certificate.left = \"w\"", "certificate.left = \"w*\"");
    assert_ne!(edited, text);
    let bad = tmp("bad.report");
    std::fs::write(&bad, edited).unwrap();
    assert_eq!(ordlab(&["verify", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn corpus_passes() {
    let out = ordlab(&["corpus", "run", corpus_dir().to_str().unwrap()]);
    let table = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{table}");
    assert!(!table.contains("FAIL"));
    let last = table.lines().last().unwrap();
    let (passed, total) = last.trim_end_matches(" passed").split_once('/').unwrap();
    assert_eq!(passed, total);
}

#[test]
fn corpus_reports_failures() {
    let dir = tmp("corpus-fail");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("a.txt"), "cvx w e => yes\ncvx 1 e => yes\n").unwrap();
    let out = ordlab(&["corpus", "run", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("FAIL cvx w e => yes (got no)"), "{table}");
    assert!(table.trim_end().ends_with("1/2 passed"));
}
