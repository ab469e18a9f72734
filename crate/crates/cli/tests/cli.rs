//! End-to-end runs of the `tanglekit` binary and the table cache.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tanglekit::{structure_constants, AlgebraKind};
use tanglekit_cli::cache::{cached_table, load_table, persist_table, table_path};
use tanglekit_cli::TableError;

fn tanglekit(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanglekit"))
        .args(args)
        .current_dir(cwd)
        .env_remove("TANGLEKIT_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_golden() {
    let dir = tempfile::tempdir().unwrap();
    let o = tanglekit(&["eval", "--algebra", "blob", "--rank", "3", "--word", "e1 e e1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dp · {3|3 :: N1-N2,S1-S2,N3-S3 ;loops:-}\n");
}

#[test]
fn enumerate_type_b_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = tanglekit(&["enumerate", "--algebra", "typeB", "--rank", "2", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["diagram"].is_string() && r["class"].is_string()));
}

#[test]
fn usage_errors_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 4] = [
        (&["eval", "--algebra", "blob", "--rank", "3", "--word", "e3"], "--word"),
        (&["eval", "--algebra", "blob", "--rank", "3", "--word", "f2"], "--word"),
        (&["enumerate", "--algebra", "tl", "--rank", "0"], "--rank"),
        (&["verify", "--max-rank", "9"], "--max-rank"),
    ];
    for (args, flag) in cases {
        let o = tanglekit(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains(flag), "{args:?}: {err}");
    }
    let o = tanglekit(&["enumerate", "--algebra", "nope", "--rank", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_status_tracks_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = tanglekit(&["verify", "--suite", "counts", "--max-rank", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("overall: PASS (13 of 13 reports pass)\n"), "{}", stdout(&o));

    // the generator map with blob loop value delta and TL loop value delta^2
    // is not multiplicative, so the full run fails on exactly those reports
    let o = tanglekit(&["verify", "--suite", "all", "--max-rank", "4", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failing: Vec<&str> = reports
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["overall"] == false)
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["lemma57"; 3]);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["enumerate", "--algebra", "typeD", "--rank", "4"][..],
        &["render", "--algebra", "blob", "--rank", "3"][..],
        &["table", "--algebra", "typeB", "--rank", "2", "--format", "json"][..],
        &["verify", "--suite", "words", "--max-rank", "3", "--format", "json"][..],
    ] {
        let a = tanglekit(args, dir.path());
        let b = tanglekit(args, dir.path());
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("basis.txt");
    let o = tanglekit(
        &["render", "--algebra", "tl", "--rank", "3", "--out", target.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&target).unwrap().lines().count(), 5);
}

#[test]
fn table_round_trip_equals_fresh_computation() {
    let dir = tempfile::tempdir().unwrap();
    let kind = AlgebraKind::type_b(2);
    let fresh = structure_constants(&kind);
    let path = persist_table(&fresh, dir.path()).unwrap();
    assert_eq!(load_table(&path).unwrap(), fresh);
    assert_eq!(cached_table(&kind, dir.path()).unwrap(), fresh);
}

#[test]
fn edited_hash_is_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let kind = AlgebraKind::type_b(2);
    let path = persist_table(&structure_constants(&kind), dir.path()).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["param_hash"] = "00".repeat(32).into();
    fs::write(&path, doc.to_string()).unwrap();
    assert!(matches!(load_table(&path), Err(TableError::CorruptTable { .. })));

    doc["param_hash"] = tanglekit_cli::cache::param_hash(&kind).into();
    doc["format_version"] = 99.into();
    fs::write(&path, doc.to_string()).unwrap();
    assert!(matches!(load_table(&path), Err(TableError::CorruptTable { .. })));

    // the binary refuses it too instead of recomputing
    let o = tanglekit(
        &["table", "--algebra", "typeB", "--rank", "2", "--cache-dir", dir.path().to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("corrupt table"));
}

#[test]
fn tl_rank_five_table_is_sparse() {
    let dir = tempfile::tempdir().unwrap();
    let kind = AlgebraKind::tl(5);
    let path = persist_table(&structure_constants(&kind), dir.path()).unwrap();
    let t = load_table(&path).unwrap();
    assert_eq!(t.dim(), 42);
    // one nonzero entry per ordered pair of basis diagrams
    assert_eq!(t.entries.len(), 42 * 42);
    assert!(t.entries.iter().all(|e| e.i < 42 && e.j < 42 && e.k < 42));
}

#[test]
fn cache_dir_defaults_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let o = tanglekit(&["table", "--algebra", "tl", "--rank", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("tl rank 3 (delta = d), dimension 5\n"), "{}", stdout(&o));
    let kind = AlgebraKind::tl(3);
    assert!(table_path(&dir.path().join(".tanglekit-cache"), &kind).exists());

    let elsewhere = dir.path().join("env-cache");
    let o = Command::new(env!("CARGO_BIN_EXE_tanglekit"))
        .args(["table", "--algebra", "tl", "--rank", "3"])
        .current_dir(dir.path())
        .env("TANGLEKIT_CACHE", &elsewhere)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(table_path(&elsewhere, &kind).exists());
}
