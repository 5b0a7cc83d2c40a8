use std::collections::BTreeSet;

use dgcm::fixtures::{fixture, FIXTURES};
use dgcm::report::Verdict;
use dgcm::session::{parse_session, run_session, Command, DgCtor, RunOptions, StmtKind};
use serde_json::Value;

fn opts(name: &str, oracle: bool) -> RunOptions {
    RunOptions { name: name.into(), bound: None, oracle, format: None }
}

fn integers(s: &str, out: &mut BTreeSet<i64>) {
    for tok in s.split(|c: char| !(c.is_ascii_digit() || c == '-')) {
        if let Ok(v) = tok.parse::<i64>() {
            out.insert(v);
        }
    }
}

fn json_integers(v: &Value, out: &mut BTreeSet<i64>) {
    match v {
        Value::Number(n) => {
            out.extend(n.as_i64());
        }
        Value::String(s) => integers(s, out),
        Value::Array(xs) => xs.iter().for_each(|x| json_integers(x, out)),
        Value::Object(m) => m.iter().for_each(|(k, x)| {
            integers(k, out);
            json_integers(x, out);
        }),
        _ => {}
    }
}

#[test]
fn printing_is_a_fixed_point_on_the_corpus() {
    for f in FIXTURES {
        let s = parse_session(f.text).unwrap();
        let printed = s.to_string();
        let again = parse_session(&printed).unwrap();
        assert_eq!(again, s, "{}", f.name);
        assert_eq!(again.to_string(), printed, "{}", f.name);
    }
}

#[test]
fn inst_a_has_one_dg_binding() {
    let s = fixture("inst-a").unwrap().session();
    let dgs: Vec<_> = s.stmts.iter().filter_map(|st| match &st.kind {
        StmtKind::Dg { ctor, .. } => Some(ctor),
        _ => None,
    }).collect();
    assert_eq!(dgs.len(), 1);
    assert!(matches!(dgs[0], DgCtor::Koszul { elems, .. } if elems.len() == 2));
}

#[test]
fn undeclared_variable_is_located() {
    let e = parse_session("ring A = poly(x:1, y:1)\ndg R = koszul(A; z)\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 18));
    assert!(e.msg.contains("unbound identifier"), "{}", e.msg);
}

#[test]
fn construct_then_check_passes_on_inst_a() {
    let s = fixture("inst-a").unwrap().session();
    let doc = run_session(&s, &opts("inst-a", false));
    let mut constructed = false;
    for r in &doc.results {
        assert_eq!(r.report.verdict, Verdict::Pass, "line {}: {}", r.line, r.report.table());
        constructed |= r.command.starts_with("construct-mcm");
    }
    assert!(constructed);
    assert_eq!(doc.exit_code(), 0);
}

#[test]
fn inst_e_construction_is_rejected() {
    let s = parse_session("field Q\nring A = poly(x:1, y:1)\ndg R = sqzero(A; quotient(A; (x)), 1)\nconstruct-mcm R\n").unwrap();
    let doc = run_session(&s, &opts("e", false));
    assert!(matches!(doc.results[0].report.verdict, Verdict::HypothesisRejected { .. }));
    assert_eq!(doc.exit_code(), 2);
}

#[test]
fn oracle_agrees_on_inst_b() {
    let s = fixture("inst-b").unwrap().session();
    let doc = run_session(&s, &opts("inst-b", true));
    let mut compared = 0;
    for r in &doc.results {
        assert!(r.report.passed(), "line {}: {}", r.line, r.report.table());
        if r.report.conditions.iter().any(|c| c.name == "dense oracle agrees") {
            compared += 1;
        }
    }
    assert!(compared >= 4, "{compared}");
}

#[test]
fn reruns_are_byte_identical() {
    for f in FIXTURES {
        let s = f.session();
        for oracle in [false, true] {
            let a = run_session(&s, &opts(f.name, oracle)).to_json();
            let b = run_session(&s, &opts(f.name, oracle)).to_json();
            assert_eq!(a, b, "{}", f.name);
        }
    }
}

#[test]
fn table_numbers_appear_in_the_json() {
    for f in FIXTURES {
        let doc = run_session(&f.session(), &opts(f.name, true));
        for r in &doc.results {
            let mut table = BTreeSet::new();
            integers(&r.report.table(), &mut table);
            let mut json = BTreeSet::new();
            json_integers(&serde_json::to_value(&r.report).unwrap(), &mut json);
            let missing: Vec<_> = table.difference(&json).collect();
            assert!(missing.is_empty(), "{} line {}: {missing:?}", f.name, r.line);
        }
    }
}

#[test]
fn bound_override_is_recorded() {
    let s = fixture("inst-d").unwrap().session();
    let doc = run_session(&s, &RunOptions { bound: Some(6), ..opts("inst-d", false) });
    assert_eq!(doc.bound, 6);
    assert!(doc.results.iter().any(|r| matches!(r.report.bounds.get("resolution"), Some(6))));
}

#[test]
fn every_fixture_uses_every_kind_of_command_somewhere() {
    let mut seen = BTreeSet::new();
    for f in FIXTURES {
        for (_, c) in f.session().commands() {
            let tag = match c {
                Command::Depth { .. } => "depth",
                Command::Profile(_) => "profile",
                Command::Classify(_) => "classify",
                Command::McmCheck(_) => "mcm-check",
                Command::McmDualCheck(_) => "mcm-dual-check",
                Command::ConstructMcm { .. } => "construct-mcm",
                Command::VerifyAbf { .. } => "verify abf",
                Command::VerifyInit { .. } => "verify init",
                _ => continue,
            };
            seen.insert(tag);
        }
    }
    assert_eq!(seen.len(), 8, "{seen:?}");
}
