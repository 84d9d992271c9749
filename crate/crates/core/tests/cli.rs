use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn quadfam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadfam")).args(args).output().unwrap()
}

fn run_ok(args: &[&str]) -> Output {
    let out = quadfam(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn code(args: &[&str]) -> i32 {
    quadfam(args).status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let generic = fixture("generic");
    let rank = fixture("rank_one");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("count.json", vec!["count", s(&generic), "--heights", "2,4,6", "--per-fiber"]),
        ("count.csv", vec!["count", s(&generic), "--heights", "2,4,6"]),
        ("rank1.csv", vec!["rank1", s(&rank), "--point", "-1,1,1"]),
        ("rank1.json", vec!["rank1", s(&rank)]),
        ("ms.json", vec!["multisection", s(&generic)]),
        ("classify.json", vec!["classify", s(&generic)]),
    ];
    for (name, args) in cases {
        let outputs: Vec<Vec<u8>> = ["1", "4"]
            .iter()
            .map(|jobs| {
                let path = dir.path().join(format!("{jobs}-{name}"));
                let mut full = vec!["--jobs", jobs, "--out", s(&path)];
                full.extend(&args);
                let stdout = run_ok(&full).stdout;
                assert!(!stdout.is_empty());
                fs::read(&path).unwrap()
            })
            .collect();
        assert_eq!(outputs[0], outputs[1], "{name}");
    }
    let csv = fs::read_to_string(dir.path().join("1-count.csv")).unwrap();
    assert!(csv.starts_with("B,N,slope\n"));
    let csv = fs::read_to_string(dir.path().join("1-rank1.csv")).unwrap();
    assert!(csv.starts_with("u,t,x,y,certificate\n"));
}

#[test]
fn every_section_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let mut cases: Vec<(String, Vec<String>, bool)> = ["generic", "regression", "retry_at_alpha", "exceptional7", "exceptional8"]
        .iter()
        .map(|n| (n.to_string(), vec!["multisection".to_string()], false))
        .collect();
    cases.push(("extension".into(), vec!["multisection".into(), "--allow-extension".into()], false));
    cases.push(("quartic_u2".into(), vec!["bertini".into()], true));
    for (name, cmd, quartic) in cases {
        let family = fixture(&name);
        let out = dir.path().join(format!("{name}.json"));
        let mut args: Vec<&str> = vec!["--out", s(&out), &cmd[0]];
        args.extend(cmd[1..].iter().map(String::as_str));
        args.push(s(&family));
        run_ok(&args);
        let json: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert!(json.get("section").is_some(), "{name}");
        // both the full report and the bare section verify
        let bare = dir.path().join(format!("{name}-section.json"));
        fs::write(&bare, json["section"].to_string()).unwrap();
        for section in [&out, &bare] {
            let mut v = vec!["verify", s(&family), s(section)];
            if quartic {
                v.push("--quartic");
            }
            run_ok(&v);
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let generic = fixture("generic");
    assert_eq!(code(&["classify", s(&generic)]), 0);
    assert_eq!(code(&["classify", s(&fixture("product_with_elliptic"))]), 2);
    assert_eq!(code(&["classify", "/nonexistent/family.json"]), 1);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"a0": ["1"], "a1": [], "a2": [], "a3": ["1"], "a4": []}"#).unwrap();
    assert_eq!(code(&["classify", s(&bad)]), 1);
    fs::write(&bad, "{").unwrap();
    assert_eq!(code(&["count", s(&bad)]), 1);
    let txt = dir.path().join("out.txt");
    assert_eq!(code(&["--out", s(&txt), "classify", s(&generic)]), 1);
    let csv = dir.path().join("out.csv");
    assert_eq!(code(&["--out", s(&csv), "classify", s(&generic)]), 1);
    assert_eq!(code(&["count", s(&generic), "--heights", "4,2"]), 1);
    assert_eq!(code(&["rank1", s(&generic), "--u-min", "3", "--u-max", "-3"]), 1);
    assert_eq!(code(&["--jobs", "0", "classify", s(&generic)]), 1);
    assert_eq!(code(&["rank1", s(&fixture("rank_one")), "--point", "0,2,0"]), 2);

    // a section for one family does not verify on another
    let out = dir.path().join("ms.json");
    run_ok(&["--out", s(&out), "multisection", s(&generic)]);
    assert_eq!(code(&["verify", s(&fixture("rank_one")), s(&out)]), 2);
}
