use std::path::Path;
use std::process::{Command, Output};

use cylmatch::faults::{inject, Fault};
use cylmatch::io::{parse_mcd, serialize_mcd};

fn cylmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylmatch")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.mcd");
    let o = cylmatch(&["generate", "--kind", "flag", "--n", "9", "--seed", "3", "--out", path(&f)]);
    assert!(o.status.success());
    let o = cylmatch(&["validate", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok: 9 vertices, 36 edges"));
}

#[test]
fn validate_reports_fault_kind() {
    let dir = tempfile::tempdir().unwrap();
    let good = cylmatch(&["generate", "--kind", "mixed", "--n", "7", "--seed", "1"]);
    let d = parse_mcd(&stdout(&good)).unwrap();
    let bad = dir.path().join("bad.mcd");
    std::fs::write(&bad, serialize_mcd(&inject(&d, Fault::Tangency).unwrap())).unwrap();
    let o = cylmatch(&["validate", "--in", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("tangency:"), "{}", stdout(&o));
}

#[test]
fn lemma_check_fails_on_double_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    let f = parse_mcd(&stdout(&cylmatch(&["generate", "--kind", "flag", "--n", "6", "--seed", "2"]))).unwrap();
    std::fs::write(corpus.join("broken.mcd"), serialize_mcd(&inject(&f, Fault::DoubleCrossing).unwrap())).unwrap();
    let cex = dir.path().join("cex");
    let o = cylmatch(&[
        "lemma-check", "--scale", "0", "--bulk", "0", "--corpus", path(&corpus), "--cex-dir", path(&cex),
    ]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{out}");
    let line = out.lines().find(|l| l.contains(" validator ")).unwrap();
    assert!(line.starts_with("FAIL"), "{line}");
    assert!(out.contains("double-crossing"), "{out}");
    // the shrunk counterexample still fails validation
    let shrunk = cex.join("validator.mcd");
    assert_eq!(cylmatch(&["validate", "--in", path(&shrunk)]).status.code(), Some(1));
}

#[test]
fn lemma_check_passes_small_corpus() {
    let o = cylmatch(&["lemma-check", "--scale", "1", "--bulk", "10", "--seed", "5"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!out.contains("FAIL"));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for r in 0..2 {
        let d = dir.path().join(format!("d{r}.mcd"));
        let m = dir.path().join(format!("m{r}.txt"));
        let w = dir.path().join(format!("w{r}.txt"));
        let s = dir.path().join(format!("s{r}.svg"));
        cylmatch(&["generate", "--kind", "flag", "--n", "15", "--seed", "11", "--out", path(&d)]);
        assert!(cylmatch(&["solve", "--in", path(&d), "--out", path(&m)]).status.success());
        assert!(cylmatch(&["solve", "--in", path(&d), "--flag", "--out", path(&w)]).status.success());
        assert!(cylmatch(&["render", "--in", path(&d), "--matching", path(&w), "--labels", "--out", path(&s)]).status.success());
        runs.push([d, m, w, s].map(|p| std::fs::read(p).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
    let witnesses = String::from_utf8(runs[0][2].clone()).unwrap();
    assert!(witnesses.lines().any(|l| l.starts_with("wit ")), "{witnesses}");
    assert!(String::from_utf8_lossy(&runs[0][3]).contains("<svg"));
}

#[test]
fn oracle_matches_solver_on_wrap_free() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("p.mcd");
    cylmatch(&["generate", "--kind", "planefree", "--n", "8", "--seed", "4", "--out", path(&d)]);
    let o = cylmatch(&["oracle", "--in", path(&d)]);
    assert!(stdout(&o).starts_with("match 4\n"), "{}", stdout(&o));
    let s = cylmatch(&["solve", "--in", path(&d)]);
    assert!(stdout(&s).starts_with("match 4\n"));
}

#[test]
fn paper_mode_refuses_small_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("f.mcd");
    cylmatch(&["generate", "--kind", "flag", "--n", "12", "--out", path(&d)]);
    let o = cylmatch(&["solve", "--in", path(&d), "--mode", "paper"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("n0"), "{err}");
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("junk.mcd");
    std::fs::write(&d, "not a drawing\n").unwrap();
    let o = cylmatch(&["validate", "--in", path(&d)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(cylmatch(&["generate", "--kind", "archetype:nope"]).status.code(), Some(2));
}
