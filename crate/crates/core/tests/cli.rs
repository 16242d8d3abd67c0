use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn milnor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(dir: &Path, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(file);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = milnor(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_and_usage_codes() {
    assert_eq!(milnor(&["--help"]).status.code(), Some(0));
    assert_eq!(milnor(&[]).status.code(), Some(1));
    assert_eq!(milnor(&["invariants"]).status.code(), Some(1));
    assert_eq!(milnor(&["generate", "v-pi", "1,x"]).status.code(), Some(1));
}

#[test]
fn bad_input_file() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"pd\": 3}").unwrap();
    let o = milnor(&["invariants", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));
    assert_eq!(milnor(&["invariants", p(&dir.path().join("missing.json"))]).status.code(), Some(2));
}

#[test]
fn milnor_link_table_and_json() {
    let dir = TempDir::new().unwrap();
    let m3 = generate(dir.path(), "m3.json", &["milnor-link", "3"]);
    let o = milnor(&["invariants", p(&m3), "--max-length", "3", "--max-r", "1", "--nonzero"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.trim() == "123: 1 (mod 0)"), "{text}");
    assert!(text.lines().any(|l| l.trim() == "213: -1 (mod 0)"), "{text}");
    let o = milnor(&["invariants", p(&m3), "--max-length", "3", "--max-r", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().map(|a| a[0].clone()).unwrap_or(v);
    let hit = rows["entries"].as_array().unwrap().iter().find(|e| e["index"] == "123").unwrap().clone();
    assert_eq!(hit["value"], 1);
}

#[test]
fn generators_and_cables() {
    let dir = TempDir::new().unwrap();
    let vpi = generate(dir.path(), "vpi.json", &["v-pi", "2,1,3,4"]);
    let o = milnor(&["invariants", p(&vpi), "--max-length", "4", "--max-r", "1", "--nonzero"]);
    assert!(stdout(&o).lines().any(|l| l.trim() == "2134: 1"), "{}", stdout(&o));
    let inv = generate(dir.path(), "vpi-inv.json", &["v-pi", "1,2", "--inverse", "--closure"]);
    let o = milnor(&["invariants", p(&inv), "--max-length", "2", "--nonzero"]);
    assert!(stdout(&o).lines().any(|l| l.trim() == "12: -1 (mod 0)"));
    let vtau = generate(dir.path(), "vtau.json", &["v-tau", "1", "--k", "2", "--n", "2", "--closure"]);
    let o = milnor(&["invariants", p(&vtau), "--max-length", "4", "--nonzero"]);
    assert!(stdout(&o).lines().any(|l| l.trim() == "1122: 1 (mod 0)" || l.trim() == "1122: -1 (mod 0)"));
    assert!(generate(dir.path(), "t.json", &["trivial", "3", "--string-link"]).exists());
    let hopf = dir.path().join("hopf.json");
    fs::write(&hopf, r#"{"strands":2,"word":[1,1]}"#).unwrap();
    let cable = generate(dir.path(), "c.json", &["cable", p(&hopf), "2,1"]);
    let o = milnor(&["invariants", p(&cable), "--max-length", "2", "--nonzero"]);
    let text = stdout(&o);
    for row in ["13: 1 (mod 0)", "23: 1 (mod 0)"] {
        assert!(text.lines().any(|l| l.trim() == row), "{text}");
    }
    assert!(!text.lines().any(|l| l.trim().starts_with("12:")));
    let o = milnor(&["cable", p(&hopf), "2,1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"pd\""));
}

#[test]
fn classify_links() {
    let dir = TempDir::new().unwrap();
    let w = dir.path().join("whitehead.json");
    fs::write(&w, r#"{"strands":3,"word":[1,1,-2,1,-2]}"#).unwrap();
    let o = generate(dir.path(), "o.json", &["trivial", "2"]);
    let out = milnor(&["classify", p(&w), p(&o)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "No");
    assert_eq!(stdout(&milnor(&["classify", p(&o), p(&o)])).trim(), "Yes");
    let single = stdout(&milnor(&["classify", p(&w)]));
    assert!(single.contains("link-homotopy trivial: true"), "{single}");
    assert!(single.contains("self-delta trivial: false"), "{single}");
    let json = stdout(&milnor(&["classify", p(&w), "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["homotopy_trivial"], true);
    assert_eq!(v["cor2"]["consistent"], true);

    let hopf = dir.path().join("hopf.json");
    fs::write(&hopf, r#"{"strands":2,"word":[1,1]}"#).unwrap();
    assert_eq!(milnor(&["classify", p(&hopf)]).status.code(), Some(0));
    assert_eq!(milnor(&["classify", p(&hopf), "--strict"]).status.code(), Some(3));
    assert_eq!(milnor(&["classify", p(&hopf), p(&o), "--strict"]).status.code(), Some(0));
    assert_eq!(milnor(&["classify", p(&hopf), "--homotopy"]).status.code(), Some(1));
}

#[test]
fn classify_string_links() {
    let dir = TempDir::new().unwrap();
    let a = generate(dir.path(), "a.json", &["v-pi", "1,2,3"]);
    let b = generate(dir.path(), "b.json", &["v-pi", "1,2,3", "--inverse"]);
    let t = generate(dir.path(), "t.json", &["trivial", "3", "--string-link"]);
    assert_eq!(stdout(&milnor(&["classify", p(&a), p(&a), "--homotopy"])).trim(), "link-homotopic");
    assert_eq!(stdout(&milnor(&["classify", p(&a), p(&b)])).trim(), "not link-homotopic");
    let nf = stdout(&milnor(&["classify", p(&b)]));
    assert!(nf.contains("V_(1 2 3)^-1") || nf.contains("^-1"), "{nf}");
    assert!(stdout(&milnor(&["classify", p(&t)])).contains("trivial"));
    assert_eq!(milnor(&["classify", p(&a), p(&t), "--self-delta"]).status.code(), Some(1));
    let l = generate(dir.path(), "l.json", &["trivial", "3"]);
    assert_eq!(milnor(&["classify", p(&a), p(&l)]).status.code(), Some(1));
}
