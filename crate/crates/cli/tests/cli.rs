use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spancalc_core::random::{random_groupoid, random_span};
use spancalc_core::FiniteGroupoid;

fn spancalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spancalc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn card_of_terminal() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.json", &FiniteGroupoid::terminal().to_json());
    let o = spancalc(&["card", s(&t)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/1\n");
    let o = spancalc(&["--json", "card", s(&t)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cardinality"], "1/1");
}

#[test]
fn folding_action() {
    // Z/2 swapping two of three points: |S//G| = 1/2 + 1/2 + ... = 1 + 1/2
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        r#"{"group": {"order": 2, "mul": [[0, 1], [1, 0]]}, "points": 3, "act": [[0, 1, 2], [1, 0, 2]]}"#,
    );
    assert_eq!(stdout(&spancalc(&["card", s(&a)])), "3/2\n");
}

#[test]
fn malformed_json_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"objects\": 1,\n  \"morphisms\": [");
    let o = spancalc(&["card", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn invalid_groupoid_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    // two morphisms on one object, but 1∘1 is declared to be 1
    let g = write(
        dir.path(),
        "g.json",
        r#"{"objects": 1, "morphisms": [{"src": 0, "tgt": 0}, {"src": 0, "tgt": 0}],
            "identity": [0], "compose": [[0,0,0],[0,1,1],[1,0,1],[1,1,1]], "inverse": [0, 1]}"#,
    );
    let o = spancalc(&["check", s(&g)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("groupoid: invalid"));
    let ok = write(dir.path(), "ok.json", &FiniteGroupoid::terminal().to_json());
    assert_eq!(spancalc(&["check", s(&ok)]).status.code(), Some(0));
}

#[test]
fn size_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_groupoid(&mut rng, 3);
    let path = write(dir.path(), "g.json", &g.groupoid.to_json());
    let o = Command::new(env!("CARGO_BIN_EXE_spancalc"))
        .args(["card", s(&path)])
        .env("SPANCALC_SIZE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("size cap of 1"));
}

#[test]
fn hecke_verify() {
    let o = spancalc(&["hecke", "--q", "2", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    assert!(!out.contains("FAIL"));
    assert_eq!(spancalc(&["hecke", "--q", "4", "--verify"]).status.code(), Some(2));
}

#[test]
fn hecke_constants_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = spancalc(&["hecke", "--q", "2", "--verify", "--constants", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["labels"], serde_json::json!(["e", "P", "L", "PL", "LP", "PLP"]));
    assert!(stdout(&o).contains("P*L = 1/1 PL"));
}

#[test]
fn fock_ccr() {
    let o = spancalc(&["fock", "--truncate", "6", "--check-ccr"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS AA* - A*A = 1 on {0..5}^2"));
    let o = spancalc(&["fock", "--truncate", "6", "--colors", "2"]);
    assert!(stdout(&o).contains("1/1 + 2/1 z + 2/1 z^2 + 4/3 z^3 + 2/3 z^4 + 4/15 z^5 + 4/45 z^6"));
    assert_eq!(spancalc(&["fock", "--truncate", "9"]).status.code(), Some(2));
}

#[test]
fn hall_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hall.json");
    let o = spancalc(&["hall", "--quiver", "a2", "--q", "2", "--dmax", "1,1", "--verify", "--table", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 3);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["products"]["(1,0)[] * (0,1)[]"]["(1,1)[1]"], "1/1");
    assert_eq!(spancalc(&["hall", "--quiver", "a2", "--q", "2", "--dmax", "1"]).status.code(), Some(2));
    assert_eq!(spancalc(&["hall", "--quiver", "x9", "--q", "2", "--dmax", "1"]).status.code(), Some(2));
}

#[test]
fn compose_and_degroupoidify() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..5 {
        let x = random_groupoid(&mut rng, 2);
        let y = random_groupoid(&mut rng, 2);
        let z = random_groupoid(&mut rng, 2);
        let sp = random_span(&mut rng, &x, &y, 2);
        let tp = random_span(&mut rng, &y, &z, 2);
        let sf = write(dir.path(), &format!("s{i}.json"), &sp.to_json());
        let tf = write(dir.path(), &format!("t{i}.json"), &tp.to_json());
        let out = dir.path().join(format!("ts{i}.json"));
        for alpha in ["0", "1", "-1"] {
            let o = spancalc(&["compose", s(&tf), s(&sf), "--check", "--alpha", alpha, "--out", s(&out)]);
            assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
            assert!(stdout(&o).contains("PASS matrix(T∘S)"));
        }
        // the written composite degroupoidifies to the same matrix
        let direct = spancalc(&["compose", s(&tf), s(&sf)]);
        let via_file = spancalc(&["degroupoidify", s(&out)]);
        assert_eq!(stdout(&direct), stdout(&via_file));
        let csv = dir.path().join("m.csv");
        assert_eq!(spancalc(&["degroupoidify", s(&sf), "--alpha", "1/2", "--csv", s(&csv)]).status.code(), Some(0));
        assert!(std::fs::read_to_string(&csv).is_ok());
    }
    let o = spancalc(&["degroupoidify", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["--json", "hall", "--quiver", "a3:rl", "--q", "2", "--dmax", "1,1,1"];
    assert_eq!(spancalc(&args).stdout, spancalc(&args).stdout);
    let args = ["--json", "hecke", "--q", "2", "--constants", "/dev/null"];
    assert_eq!(spancalc(&args).stdout, spancalc(&args).stdout);
}
