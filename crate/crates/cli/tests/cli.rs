use std::path::Path;
use std::process::{Command, Output};

fn dgcm(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dgcm"));
    c.args(args).env_remove("DGCM_CACHE_DIR");
    if let Some(dir) = cache {
        c.env("DGCM_CACHE_DIR", dir);
    }
    c.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixtures_exit_with_their_verdicts() {
    for (name, want) in [("inst-a", 0), ("inst-b", 0), ("inst-c", 0), ("inst-d", 0), ("inst-e", 1)] {
        let o = dgcm(&["run", name, "--json"], None);
        assert_eq!(code(&o), want, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(doc["schema"], "dgcm-report/1");
        assert_eq!(doc["summary"]["exit_code"], want);
    }
}

#[test]
fn json_is_deterministic_and_cached_runs_match() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&dgcm(&["run", "inst-b", "--json", "--oracle"], None));
    let b = stdout(&dgcm(&["run", "inst-b", "--json", "--oracle"], None));
    assert_eq!(a, b);
    let c = stdout(&dgcm(&["run", "inst-b", "--json", "--oracle"], Some(dir.path())));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let d = stdout(&dgcm(&["run", "inst-b", "--json", "--oracle"], Some(dir.path())));
    assert_eq!(a, c);
    assert_eq!(a, d);
}

#[test]
fn rejection_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("e.dgcm");
    std::fs::write(&p, "field Q\nring A = poly(x:1, y:1)\ndg R = sqzero(A; quotient(A; (x)), 1)\nconstruct-mcm R\n").unwrap();
    let o = dgcm(&["run", p.to_str().unwrap()], None);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("hypothesis-rejected"), "{}", stdout(&o));
}

#[test]
fn parse_errors_carry_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.dgcm");
    std::fs::write(&p, "ring A = poly(x:1, y:1)\ndg R = koszul(A; z)\n").unwrap();
    let o = dgcm(&["run", p.to_str().unwrap()], None);
    assert_eq!(code(&o), 65);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.dgcm:2:18:") && err.contains("'z'"), "{err}");
}

#[test]
fn usage_and_missing_input() {
    assert_eq!(code(&dgcm(&["run"], None)), 64);
    assert_eq!(code(&dgcm(&["run", "inst-a", "--bound", "0"], None)), 64);
    assert_eq!(code(&dgcm(&["run", "inst-a", "--json", "--table"], None)), 64);
    assert_eq!(code(&dgcm(&["fixtures", "show", "inst-z"], None)), 64);
    assert_eq!(code(&dgcm(&["run", "/nonexistent/x.dgcm"], None)), 66);
}

#[test]
fn fixtures_list_and_show() {
    let list = stdout(&dgcm(&["fixtures", "list"], None));
    for name in ["inst-a", "inst-b", "inst-c", "inst-d", "inst-e"] {
        assert!(list.contains(name), "{list}");
    }
    let show = stdout(&dgcm(&["fixtures", "show", "inst-a"], None));
    assert!(show.contains("koszul("), "{show}");
}

#[test]
fn bound_flag_overrides_the_session() {
    let o = dgcm(&["run", "inst-d", "--json", "--bound", "6"], None);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["bound"], 6);
}

#[test]
fn table_is_the_default_for_fixtures() {
    let o = dgcm(&["run", "inst-c"], None);
    assert!(stdout(&o).starts_with("dgcm-report/1"), "{}", stdout(&o));
}
