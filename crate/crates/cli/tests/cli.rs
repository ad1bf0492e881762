use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const OLD: &str = "package de { package test { } }\n";
const NEW: &str = "package de { package test { <<persistent>> <<active>> class ECU { } } }\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cdimpact"))
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn added_class_checklist_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let (old, new) = (file(dir.path(), "old.cd", OLD), file(dir.path(), "new.cd", NEW));
    let o = run(&["--old", s(&old), "--new", s(&new), "--builtin-rules"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "ORM file analysis:\n=====\n\
         - Add entry to mapping file for new class. (Causing model change: Added class 'de.test.ECU')\n\
         \n\
         Property file analysis:\n=====\n\
         Add these entries to the property file core.properties:\n\
         \x20 - ECU (Causing model change: Added class 'de.test.ECU')\n\
         \x20 - ECUS (Causing model change: Added class 'de.test.ECU')\n"
    );
}

#[test]
fn identical_models_exit_zero_with_nothing_to_do() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (file(dir.path(), "a.cd", NEW), file(dir.path(), "b.cd", NEW));
    let o = run(&["--old", s(&a), "--new", s(&b), "--builtin-rules"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn malformed_rules_exit_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let (old, new) = (file(dir.path(), "old.cd", OLD), file(dir.path(), "new.cd", NEW));
    let rules = file(dir.path(), "bad.ir", "impactRule \"R\" {\n  description = \"d\"\n  impact { pc.addedClass( }\n}\n");
    let o = run(&["--old", s(&old), "--new", s(&new), "--rules", s(&rules)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.ir: 3:"), "{err}");
}

#[test]
fn unresolved_under_fail_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (old, new) = (file(dir.path(), "old.cd", OLD), file(dir.path(), "new.cd", NEW));
    let rules = file(
        dir.path(),
        "r.ir",
        "impactRule \"R\" { description = \"d\" impact { pc.addedClass() => \"See {Nowhere}\" } }\n",
    );
    let base = ["--old", s(&old), "--new", s(&new), "--rules", s(&rules)];
    let o = run(&[&base[..], &["--unresolved", "fail"]].concat());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = run(&base);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("See {Nowhere:unresolved}"));
    assert!(stderr(&o).contains("UNRESOLVED_PLACEHOLDER"));
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["--old", "x.cd"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--old", "a.cd", "--new", "b.cd", "--builtin-rules", "--mode", "long"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--old", "missing-a.cd", "--new", "missing-b.cd", "--builtin-rules"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing-a.cd"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn detailed_mode_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let (old, new) = (file(dir.path(), "old.cd", OLD), file(dir.path(), "new.cd", NEW));
    let out = dir.path().join("checklist.txt");
    let json = dir.path().join("checklist.json");
    let diff = dir.path().join("diff.json");
    let o = run(&[
        "--old", s(&old), "--new", s(&new), "--builtin-rules", "--mode", "detailed",
        "--out", s(&out), "--json-out", s(&json), "--diff-out", s(&diff),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "");
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("ORM file analysis:\n=====\nDescription: "));
    assert!(text.contains("Relevant for: "));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["sections"].as_array().unwrap().len(), 2);
    let d: serde_json::Value = serde_json::from_str(&fs::read_to_string(&diff).unwrap()).unwrap();
    assert_eq!(d[0]["description"], "Added class 'de.test.ECU'");
}

#[test]
fn filters_drop_sections() {
    let dir = tempfile::tempdir().unwrap();
    let (old, new) = (file(dir.path(), "old.cd", OLD), file(dir.path(), "new.cd", NEW));
    let o = run(&["--old", s(&old), "--new", s(&new), "--builtin-rules", "--min-severity", "critical"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn synthetic_generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = run(&["--gen-synthetic", "50,10,9", "--out", s(d)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for name in ["old.cd", "new.cd", "manifest.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let o = run(&[
        "--old", s(&a.join("old.cd")), "--new", s(&a.join("new.cd")), "--builtin-rules",
        "--diff-out", s(&dir.path().join("d.json")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    let diff: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(manifest["differences"].as_array().unwrap().len(), diff.as_array().unwrap().len());
    assert_eq!(run(&["--gen-synthetic", "0,1,1"]).status.code(), Some(1));
}
