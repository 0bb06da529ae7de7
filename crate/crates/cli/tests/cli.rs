use std::path::Path;
use std::process::{Command, Output};

fn cstlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cstlab")).current_dir(dir).args(args).output().expect("run cstlab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn registry_config(dir: &Path, name: &str, pmax: u64) -> String {
    let o = cstlab(dir, &["registry", "show", name]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o).replace("pmax = 100000", &format!("pmax = {pmax}"));
    let path = dir.join(format!("{name}.toml"));
    std::fs::write(&path, text).unwrap();
    path.file_name().unwrap().to_string_lossy().into_owned()
}

#[test]
fn selftest_of_b_c2_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cstlab(dir.path(), &["selftest", "--group", "B_C2", "--n", "100000", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("B_C2") && stdout(&o).contains("PASS"));
}

#[test]
fn count_twice_reuses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = registry_config(dir.path(), "B_C1", 20_000);
    let first = cstlab(dir.path(), &["count", "--config", &cfg]);
    let second = cstlab(dir.path(), &["count", "--config", &cfg]);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(code(&second), 0);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stderr(&first).contains("counted"));
    assert!(stderr(&second).contains("read"));
    // a different pmax must not silently reuse the cache
    let o = cstlab(dir.path(), &["count", "--config", &cfg, "--pmax", "10000"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("cache mismatch"));
}

#[test]
fn analyze_needs_cache_or_count_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = registry_config(dir.path(), "B_C1", 20_000);
    let o = cstlab(dir.path(), &["analyze", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("cstlab count --config") && err.contains("--count"), "{err}");
}

#[test]
fn analyze_writes_report_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = registry_config(dir.path(), "B_C1", 30_000);
    let o = cstlab(dir.path(), &["analyze", "--config", &cfg, "--count"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("verdict all PASS"));
    let out = dir.path().join("out");
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    for key in ["config_hash", "n", "tables", "verdicts"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    for key in ["character_sums", "moments", "chisq"] {
        assert!(report["tables"].get(key).is_some(), "missing tables.{key}");
    }
    assert_eq!(report["verdicts"]["all"], true);
    let cs = std::fs::read_to_string(out.join("character_sums.csv")).unwrap();
    assert!(cs.starts_with("irrep,xi,re_S,im_S,threshold,verdict\n"));
    let mo = std::fs::read_to_string(out.join("moments.csv")).unwrap();
    assert!(mo.starts_with("j,k,xi,empirical,predicted,sigma_dev\n"));
    // `report` renders the saved file with the same verdict
    let r = cstlab(dir.path(), &["report", "--config", &cfg]);
    assert_eq!(code(&r), 0);
    assert!(stdout(&r).contains("verdict all PASS"));
}

#[test]
fn mismatched_claim_fails_with_chi_square_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = registry_config(dir.path(), "B_C1", 30_000);
    let text = std::fs::read_to_string(dir.path().join(&cfg)).unwrap();
    std::fs::write(dir.path().join(&cfg), text.replace("claimed_group = \"B_C1\"", "claimed_group = \"E_C1\"")).unwrap();
    let o = cstlab(dir.path(), &["analyze", "--config", &cfg, "--count"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("verdict chisq FAIL"), "{text}");
    assert!(text.contains("observed") && text.contains("expected"), "{text}");
    let r = cstlab(dir.path(), &["report", "--input", "out/report.json"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn command_line_values_win_with_a_note() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = registry_config(dir.path(), "E_C1", 20_000);
    let o = cstlab(dir.path(), &["count", "--config", &cfg, "--pmax", "5000"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("pmax = 5000 overrides config value 20000"), "{}", stderr(&o));
    assert!(stderr(&o).contains("p <= 5000"));
}

#[test]
fn usage_and_config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cstlab(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&cstlab(dir.path(), &["selftest", "--n", "many"])), 1);
    assert_eq!(code(&cstlab(dir.path(), &["selftest", "--group", "Z_C9"])), 1);
    assert_eq!(code(&cstlab(dir.path(), &["--help"])), 0);
    let cfg = registry_config(dir.path(), "B_C1", 20_000);
    let text = std::fs::read_to_string(dir.path().join(&cfg)).unwrap();
    std::fs::write(dir.path().join("bad.toml"), text.replace("[run]\n", "[run]\ncolour = \"blue\"\n")).unwrap();
    let o = cstlab(dir.path(), &["count", "--config", "bad.toml"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
    assert_eq!(code(&cstlab(dir.path(), &["registry", "show", "X_Y"])), 1);
}

#[test]
fn registry_listing_and_entries() {
    let dir = tempfile::tempdir().unwrap();
    let o = cstlab(dir.path(), &["registry", "list"]);
    assert_eq!(code(&o), 0);
    let list = stdout(&o);
    assert!(list.lines().count() >= 5);
    assert!(list.lines().all(|l| l.contains("lfield=")));
    let e = stdout(&cstlab(dir.path(), &["registry", "show", "E_C1"]));
    assert!(e.contains("kind = \"square\"") && e.contains("[lfield]\nkind = \"trivial\""), "{e}");
    let c = stdout(&cstlab(dir.path(), &["registry", "show", "c_c2"]));
    assert!(c.contains("kind = \"quadratic\"\nd = -1") && c.contains("kronecker(-4, p)"), "{c}");
}

#[test]
fn lfun_and_haar_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = cstlab(dir.path(), &["lfun", "--registry", "B_C1", "--pmax", "20000", "--count", "--s", "1.5,2", "--x", "1000,20000"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("out/lfun.json")).unwrap()).unwrap();
    assert!(!v["scans"].as_array().unwrap().is_empty());
    assert_eq!(v["bad_primes"], serde_json::json!([2, 3, 11, 37]));
    let h = cstlab(dir.path(), &["haar", "--group", "B_C1", "--n", "50000", "--out", "h.csv"]);
    assert_eq!(code(&h), 0);
    assert!(stdout(&h).starts_with("j,k,quadrature,monte_carlo,sigma_dev"));
    let rows = std::fs::read_to_string(dir.path().join("h.csv")).unwrap();
    assert_eq!(rows.lines().count(), 50_001);
}
