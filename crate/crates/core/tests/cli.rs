use std::path::{Path, PathBuf};
use std::process::Command;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fincat"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn validate(path: &Path) -> (i32, String) {
    run(&["validate", path.to_str().unwrap()])
}

#[test]
fn invariant_text_format() {
    assert_eq!(
        run(&["ccat", "interval2.json"]).1.lines().next(),
        Some("ccat = 0")
    );
    assert_eq!(
        run(&["ccat", "cyclic2.json"]).1.lines().next(),
        Some("ccat = inf")
    );
    assert_eq!(
        run(&["ctc", "interval1.json"]).1.lines().next(),
        Some("cTC = 0")
    );
    assert_eq!(
        run(&["ctcn", "point.json", "--n", "3"]).1.lines().next(),
        Some("cTC_3 = 0")
    );
    assert_eq!(
        run(&["cd", "cyclic2_id.json", "cyclic2_trivial.json"])
            .1
            .lines()
            .next(),
        Some("cD = inf")
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fib-check", "z4_to_z2.json"]).0, 0);
    let (code, out) = run(&["fib-check", "nosobre.json"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("fibration: yes, op-fibration: no"), "{out}");
    assert!(out.contains("lift of s"), "{out}");
    assert_eq!(run(&["cover-check", "interval2_cover.json"]).0, 0);
    assert_eq!(run(&["cover-check", "chain2_cover.json"]).0, 1);
    assert_eq!(
        run(&["homotopic", "cyclic2_id.json", "cyclic2_trivial.json"]).0,
        1
    );
    assert_eq!(
        run(&["homotopic", "cyclic2_id.json", "cyclic2_id.json"]).0,
        0
    );
    assert_eq!(run(&["equiv", "iso_fiber.json", "--arrow", "s"]).0, 0);
    assert_eq!(run(&["equiv", "adjoint_fibers.json", "--arrow", "s"]).0, 1);
    assert_eq!(run(&["varadarajan", "varadarajan_infinite.json"]).0, 0);
    assert_eq!(run(&["tanaka", "product_i2_i1.json"]).0, 0);
}

#[test]
fn invalid_input_and_budget_exit_2() {
    assert_eq!(run(&["ccat", "missing.json"]).0, 2);
    assert_eq!(run(&["ccat", "cyclic2_id.json"]).0, 2);
    assert_eq!(
        run(&["fiber", "iso_fiber.json", "--object", "nowhere"]).0,
        2
    );
    assert_eq!(run(&["ctcn", "point.json", "--n", "1"]).0, 2);
    assert_eq!(run(&["--budget", "2", "ccat", "chain2.json"]).0, 2);
    assert_eq!(run(&["no-such-verb"]).0, 2);
    assert_eq!(
        run(&["--witness", "w.json", "fib-check", "nosobre.json"]).0,
        2
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "X", "objects": ["a"], "arrows": [{"id": "f", "src": "a", "tgt": "b"}], "compose": []}"#).unwrap();
    assert_eq!(run(&["ccat", bad.to_str().unwrap()]).0, 2);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(validate(&bad).0, 2);
}

#[test]
fn witness_files_validate() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["homotopic", "cyclic2_id.json", "cyclic2_id.json"],
        vec!["ccat", "interval2.json"],
        vec!["ccat", "cyclic2.json"],
        vec!["ccat", "chain2.json"],
        vec!["ctc", "interval1.json"],
        vec!["ctc", "cyclic2.json"],
        vec!["ctcn", "interval1.json", "--n", "3"],
        vec!["cd", "cyclic2_id.json", "cyclic2_trivial.json"],
        vec![
            "cd",
            "cyclic2_id.json",
            "cyclic2_id.json",
            "cyclic2_id.json",
        ],
        vec!["lift", "product_i1_i2.json", "lift_g.json", "lift_h.json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let w = dir.path().join(format!("w{i}.json"));
        let mut a = vec!["--witness", w.to_str().unwrap()];
        a.extend(args);
        let (code, _) = run(&a);
        assert!(code == 0 || code == 1, "{args:?} exited {code}");
        let (code, out) = validate(&w);
        assert_eq!(code, 0, "{args:?}: {out}");
        assert!(out.contains("valid"), "{out}");
    }
}

#[test]
fn json_output_parses() {
    for args in [
        vec!["--json", "ccat", "interval2.json"],
        vec!["--json", "fib-check", "nosobre.json"],
        vec!["--json", "fiber", "iso_fiber.json", "--object", "1"],
        vec!["--json", "transport", "iso_fiber.json", "--arrow", "s"],
        vec!["--json", "suite", "--count", "3"],
        vec!["--json", "random", "--seed", "1"],
        vec!["--json", "validate", "nosobre.json"],
    ] {
        let (_, out) = run(&args);
        let v: serde_json::Value =
            serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(v.is_object(), "{args:?}");
    }
}

#[test]
fn random_output_is_a_category() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let (code, out) = run(&[
        "random",
        "--seed",
        "9",
        "--objects",
        "3",
        "--arrows",
        "4",
        "--connected",
    ]);
    assert_eq!(code, 0);
    std::fs::write(&p, out).unwrap();
    let (code, out) = validate(&p);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("category: valid"), "{out}");
    assert_eq!(run(&["ccat", p.to_str().unwrap()]).0, 0);
}

#[test]
fn suite_reports_no_violations() {
    let (code, out) = run(&["suite", "--seed", "100", "--count", "10"]);
    assert_eq!(code, 0, "{out}");
}
