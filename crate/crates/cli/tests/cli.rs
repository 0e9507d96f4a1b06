use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn steiner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steiner")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn machine(o: &Output, key: &str) -> Option<String> {
    stdout(o).lines().find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
}

#[test]
fn verify_catalog_design() {
    let o = steiner(&["--machine", "verify", "s2-4-13.L4.1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(machine(&o, "steiner").as_deref(), Some("true"));
    assert_eq!(machine(&o, "blocks").as_deref(), Some("13"));
}

#[test]
fn verify_rejects_broken_file() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = stdout(&steiner(&["catalog", "emit", "s2-4-13.L4.1"]));
    // drop the last block
    let mut lines: Vec<&str> = emitted.lines().collect();
    lines.pop();
    let path = dir.path().join("short.des");
    fs::write(&path, lines.join("\n")).unwrap();
    let o = steiner(&["--machine", "verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(machine(&o, "result").as_deref(), Some("fail"));
}

#[test]
fn emitted_design_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.des");
    fs::write(&path, stdout(&steiner(&["catalog", "emit", "s2-4-25.L4.3"]))).unwrap();
    let o = steiner(&["--machine", "verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(machine(&o, "blocks").as_deref(), Some("50"));
}

#[test]
fn permute_reports_common_count() {
    let o = steiner(&["--machine", "permute", "s2-4-13.L4.1", "--p2", "(0,1,2,3,4,5)", "--p3", "(5,4,3,2,1,0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(machine(&o, "common").as_deref(), Some("0"));
}

#[test]
fn repro_passing_token() {
    let o = steiner(&["repro", "L4.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn repro_failing_claim_exits_one() {
    let o = steiner(&["repro", "T5.4-closure"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn unknown_id_suggests_neighbours() {
    let o = steiner(&["repro", "L4.x"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("L4.1"), "{err}");
    assert_eq!(steiner(&["verify", "s2-4-99"]).status.code(), Some(2));
}

#[test]
fn catalog_lists_every_kind() {
    let list = stdout(&steiner(&["catalog", "list"]));
    for id in ["s2-4-13.L4.1", "s2-4-37.step3", "gdd-4-4.L4.5", "kts-27.sub9", "s2-4-13.L4.1.perms"] {
        assert!(list.contains(id), "{id} missing");
    }
}

#[test]
fn scan_table() {
    let o = steiner(&["scan", "s2-4-13.L4.1", "--table", "s2-4-13.L4.1.perms"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn trade_search_small_volume() {
    let o = steiner(&["--machine", "trade-search", "--volume", "3", "--steiner"]);
    assert_eq!(machine(&o, "outcome").as_deref(), Some("nonexistence"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn construct_plan_writes_designs() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write(
        dir.path(),
        "p.plan",
        "base gdd gdd-3-4.L4.8.delete-0\nweight 4\ningredient * gdd-4-4.L4.5.perms#4\nfill plus-one\nfiller * s2-4-13.L4.1.perms#6\n",
    );
    let prefix = dir.path().join("out");
    let o = steiner(&["--machine", "construct", "--plan", &plan, "--out", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(machine(&o, "measured_common").as_deref(), Some("52"));
    let first = dir.path().join("out.1.des");
    let v = steiner(&["--machine", "verify", first.to_str().unwrap()]);
    assert_eq!(machine(&v, "blocks").as_deref(), Some("196"));
}

#[test]
fn closure_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "c.spec", "label J3[49]\nterm 9 0,1,2,4,16\nterm 4 J3[13]\ntarget I3[49]\n");
    let o = steiner(&["--machine", "closure", "--spec", &spec]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(machine(&o, "missing").as_deref(), Some("{}"));

    let bad = write(dir.path(), "bad.spec", "label J3[40]\nterm 1 J3[13]\ntarget I3[40]\n");
    assert_eq!(steiner(&["closure", "--spec", &bad]).status.code(), Some(1));
}
