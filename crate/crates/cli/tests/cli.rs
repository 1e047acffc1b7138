use std::path::Path;
use std::process::{Command, Output};

use idionet_core::Paratope;
use idionet_sim::World;

fn idionet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idionet"))
        .args(args)
        .env_remove("IDIONET_JOBS")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_paratope_is_repeatable_and_loads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    assert!(idionet(&["gen-paratope", "--seed", "7", "--out", path(&a)]).status.success());
    assert!(idionet(&["gen-paratope", "--seed", "7", "--out", path(&b)]).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("# seed = 7\n"));
    let p = Paratope::load(&a).unwrap();
    assert_eq!((p.antibodies(), p.antigens()), (16, 8));

    let other = idionet(&["gen-paratope", "--seed", "8"]);
    assert_ne!(String::from_utf8(other.stdout).unwrap(), text);
}

#[test]
fn timed_out_run_exits_2_with_record() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("trained.txt");
    let trace = dir.path().join("trace.jsonl");
    let out = idionet(&[
        "run",
        "--system",
        "S1",
        "--timeout",
        "20",
        "--save-paratope",
        path(&saved),
        "--trace",
        path(&trace),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["t"], 20.0);
    assert!(v["n_s"].is_u64());
    assert!(v["s"].is_f64());
    assert_eq!(v["config"]["run"]["system"], "S1");
    assert_eq!(v["config"]["run"]["k1"], 0.625);

    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count(), 20);
    for l in lines.lines() {
        let t: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(t["final_winner"].is_u64());
    }

    // the trained paratope starts a mirror-world run
    let dir2 = dir.path().join("mirror.json");
    assert!(idionet(&["mirror-world", "--out", path(&dir2)]).status.success());
    let again = idionet(&[
        "run",
        "--timeout",
        "5",
        "--world",
        path(&dir2),
        "--paratope",
        path(&saved),
    ]);
    assert_eq!(again.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(v["world"], "mirror-maze");
    assert_eq!(v["paratope"], "trained");
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed = 9\n[run]\nsystem = \"S2\"\nk1 = 0.3\ntimeout = 3.0\n").unwrap();
    let out = idionet(&["run", "-c", path(&cfg), "--k1", "0.4"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["system"], "S2");
    assert_eq!(v["k1"], 0.4);

    std::fs::write(&cfg, "[run]\nk1 = \"high\"\n").unwrap();
    let bad = idionet(&["run", "-c", path(&cfg)]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("k1"));

    let bad = idionet(&["run", "--set", "run.reinforcement.no_such_gain=1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("no_such_gain"));
}

#[test]
fn sweep_writes_one_row_per_value() {
    let out = idionet(&[
        "sweep", "--axis", "k1", "--values", "0,0.5,1", "--runs", "1", "--timeout", "5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# ")));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(rdr.records().count(), 3);

    let empty = idionet(&["sweep", "--axis", "k1", "--values"]);
    assert_eq!(empty.status.code(), Some(1));
    let unknown = idionet(&["sweep", "--axis", "k3", "--values", "1"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn compare_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.csv");
    let out = idionet(&[
        "compare",
        "--paratopes",
        "1",
        "--runs-per-paratope",
        "2",
        "--timeout",
        "5",
        "--jobs",
        "2",
        "--records",
        path(&records),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // three systems in maze, mirror and combined
    assert_eq!(v["groups"].as_array().unwrap().len(), 9);
    assert_eq!(v["config"]["protocol"]["runs_per_paratope"], 2);
    let text = std::fs::read_to_string(&records).unwrap();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(rdr.records().count(), 12);
}

#[test]
fn mirror_world_twice_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    assert!(idionet(&["mirror-world", "--out", path(&once)]).status.success());
    assert!(idionet(&["mirror-world", "--world", path(&once), "--out", path(&twice)])
        .status
        .success());
    assert_eq!(World::load(&twice).unwrap(), World::maze());
}
