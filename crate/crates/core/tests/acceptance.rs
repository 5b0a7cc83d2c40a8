//! The ten acceptance criteria. Prints one line per criterion and writes the evidence
//! document to `$CARGO_TARGET_TMPDIR/acceptance.json`. Exits nonzero if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use dgcm::algebra::ideal::Ideal;
use dgcm::cm;
use dgcm::dg::dualizing::gorenstein_dualizing;
use dgcm::dg::{DGAlgebra, DGModule};
use dgcm::fixtures::{self, inst_a, inst_b, inst_c, inst_d, inst_e, named_rings, poly_base, presentation_label, random_artinian_base, random_init_instance, random_koszul, random_module, random_polynomial_ring, rng};
use dgcm::local::{self, depth, local_cohomology_profile, xi_nonzero};
use dgcm::oracle::DenseOracle;
use dgcm::report::{CertReport, Verdict};
use dgcm::Field;
use serde_json::{json, Value};

const BOUND: i64 = 4;

struct Outcome {
    pass: bool,
    detail: String,
    evidence: Value,
}

fn outcome(pass: bool, detail: impl Into<String>, evidence: Value) -> Outcome {
    Outcome { pass, detail: detail.into(), evidence }
}

fn rep_json(r: &CertReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

/// `(label, ring, module)` over every named ring: `R`, `k`, `H^0(R)` and `Σ^{-n} R`.
fn fixture_bank() -> Vec<(String, Arc<DGAlgebra>, DGModule)> {
    let mut out = Vec::new();
    for (name, r) in named_rings() {
        let n = cm::ring_data(&r).expect("fixture rings have cohomology").n;
        out.push((format!("{name}: R"), r.clone(), DGModule::ring(&r)));
        out.push((format!("{name}: k"), r.clone(), DGModule::residue_field(&r)));
        out.push((format!("{name}: H0(R)"), r.clone(), DGModule::from_h0_module(&r, &r.h0_presentation())));
        if n > 0 {
            out.push((format!("{name}: Σ^-{n} R"), r.clone(), DGModule::ring(&r).shift(-n)));
        }
    }
    out
}

fn kernel_oracle() -> Outcome {
    let mut g = rng(1);
    let mut evidence = Vec::new();
    let mut bad = Vec::new();
    let mut max_piece = 0;
    for k in 0..50 {
        let base = random_artinian_base(&mut g);
        let r = random_koszul(&mut g, &base, 2);
        let (mname, m) = random_module(&mut g, &r);
        let label = format!("{} / {mname}", presentation_label(&r));
        let o = DenseOracle::new(&m.cx).expect("Artinian base");
        let top = o.top_degree();
        for t in 0..=top {
            max_piece = max_piece.max(dgcm::oracle::base_dimension(&base, t));
        }
        let dense = o.profile();
        // cohomology_at, degree by degree
        let mut kernel = std::collections::BTreeMap::new();
        for i in m.cx.lo()..=m.cx.hi() {
            let tw = m.cx.twists(i);
            let Some(lo) = tw.iter().min().copied() else { continue };
            let hi = tw.iter().max().copied().unwrap_or(lo) + top;
            let dims = m.cx.cohomology_hilbert(i, lo..=hi).expect("certified");
            let nz: Vec<(i64, usize)> = (lo..=hi).zip(dims).filter(|(_, d)| *d > 0).collect();
            if !nz.is_empty() {
                kernel.insert(i, nz);
            }
        }
        let p = local_cohomology_profile(&m).expect("profile");
        let torsion: std::collections::BTreeMap<i64, Vec<(i64, usize)>> = p.entries.iter().filter(|(_, e)| e.nonzero).map(|(i, e)| (*i, e.hilbert.clone())).collect();
        let dc = depth(&m, None, BOUND).expect("depth");
        let agree = kernel == dense && torsion == dense && dc.depth == o.depth();
        if !agree {
            bad.push(format!("#{k} {label}"));
        }
        evidence.push(json!({ "instance": k, "label": label, "profile": format!("{dense:?}"), "depth": dc.depth, "agree": agree }));
    }
    let pass = bad.is_empty() && max_piece <= 30;
    let detail = if pass { format!("50 instances agree, largest graded piece {max_piece}") } else { format!("disagreements: {}", bad.join("; ")) };
    outcome(pass, detail, Value::Array(evidence))
}

fn fixture_cohomology() -> Outcome {
    let r = inst_a();
    let base = r.base.clone();
    let x = Ideal::new(base.clone(), vec![base.var(0)]).unwrap();
    let mut ok = true;
    let mut ev = Vec::new();
    for i in [0, -1] {
        let h = r.complex().cohomology_at(i).unwrap().module;
        let (min, _) = h.minimize().unwrap();
        let rels = Ideal::new(base.clone(), min.relations.iter().map(|v| v[0].clone()).collect()).unwrap();
        // mutual normal-form reduction of the relation ideal against (x)
        let iso = min.rank() == 1 && rels.contains_ideal(&x) && x.contains_ideal(&rels);
        ok &= iso;
        ev.push(json!({ "degree": i, "rank": min.rank(), "twist": min.gen_degrees, "relations": rels.gens.iter().map(|p| p.to_string()).collect::<Vec<_>>(), "iso to A/(x)": iso }));
    }
    let rb = inst_b();
    let c = rb.complex();
    let top = rb.base.top_degree().unwrap();
    let dims: Vec<usize> = [-1, 0].iter().map(|&i| c.cohomology_hilbert(i, 0..=top + 2).unwrap().iter().sum()).collect();
    ok &= dims == vec![2, 2];
    ev.push(json!({ "inst-b dims (H^-1, H^0)": dims }));
    outcome(ok, format!("INST-A H^0 and H^-1 are A/(x); INST-B dims {dims:?}"), Value::Array(ev))
}

fn depth_consistency() -> Outcome {
    let mut bank: Vec<(String, Arc<DGAlgebra>, DGModule)> = fixture_bank();
    let mut g = rng(3);
    for k in 0..25 {
        let r = if k % 3 == 2 {
            let b = random_artinian_base(&mut g);
            random_koszul(&mut g, &b, 2)
        } else {
            random_polynomial_ring(&mut g)
        };
        let (mname, m) = random_module(&mut g, &r);
        bank.push((format!("random #{k}: {} / {mname}", presentation_label(&r)), r, m));
    }
    let mut bad = Vec::new();
    let mut ev = Vec::new();
    let mut equality_cases = 0;
    for (label, r, m) in &bank {
        let d = depth(m, None, BOUND);
        let b = cm::depth_bound(m, None, BOUND);
        let ideals = [None, Some(Ideal::new(r.base.clone(), vec![r.base.var(0)]).unwrap())];
        let mut row = json!({ "label": label });
        match (d, b) {
            (Ok(d), Ok(b)) => {
                let agree = d.via_profile == Some(d.via_ext);
                let mut bound_ok = b.passed();
                if b.invariants.get("torsion in H^inf") == Some(&dgcm::report::Value::Bool(true)) {
                    equality_cases += 1;
                }
                let bi = cm::depth_bound(m, ideals[1].as_ref(), BOUND);
                bound_ok &= bi.as_ref().is_ok_and(|x| x.passed());
                if !(agree && bound_ok) {
                    bad.push(label.clone());
                }
                row["depth"] = json!(d.depth);
                row["via_ext"] = json!(d.via_ext);
                row["via_profile"] = json!(d.via_profile);
                row["depth_bound"] = rep_json(&b);
                row["depth_bound (x)"] = bi.map(|x| rep_json(&x)).unwrap_or_else(|e| json!(e.to_string()));
            }
            (d, b) => {
                bad.push(format!("{label}: {:?} {:?}", d.err(), b.err()));
            }
        }
        ev.push(row);
    }
    let pass = bad.is_empty() && equality_cases > 0;
    let detail = if pass { format!("{} instances, {equality_cases} equality cases", bank.len()) } else { format!("failures: {}", bad.join("; ")) };
    outcome(pass, detail, Value::Array(ev))
}

fn abf_equality() -> Outcome {
    let a = poly_base(Field::Rational, 2);
    let (x, y) = (a.var(0), a.var(1));
    let kxy = DGAlgebra::koszul(a.clone(), vec![x.clone(), y.clone()]).unwrap();
    let kx2 = DGAlgebra::koszul(a.clone(), vec![x.pow(2), x.pow(2)]).unwrap();
    let rings: Vec<(&str, Arc<DGAlgebra>)> = vec![("inst-d", inst_d()), ("inst-c", inst_c()), ("inst-a", inst_a()), ("inst-b", inst_b()), ("K(A; x, y)", kxy), ("K(A; x^2, x^2)", kx2)];
    let mut ev = Vec::new();
    let mut bad = Vec::new();
    let mut passed = 0;
    let mut spans = std::collections::BTreeSet::new();
    for (name, r) in &rings {
        let rd = cm::ring_data(r).unwrap();
        let b = r.base.clone();
        let fs: Vec<(String, DGModule)> = b
            .vars()
            .iter()
            .enumerate()
            .filter(|(_, v)| !b.reduce(v).is_zero())
            .map(|(i, v)| (format!("K({v})"), DGModule::koszul_dg_module(&b.vars()[..=i].iter().filter(|w| !b.reduce(w).is_zero()).cloned().collect::<Vec<_>>(), &DGModule::ring(r))))
            .chain(std::iter::once(("K(y)".to_string(), DGModule::ring(r).koszul_on(&b.vars()[b.nvars() - 1]))))
            .collect();
        let ms = vec![("R".to_string(), DGModule::ring(r)), (format!("Σ^-{} R", rd.n), DGModule::ring(r).shift(-rd.n)), ("k".to_string(), DGModule::residue_field(r))];
        for (mn, m) in &ms {
            for (fname, f) in &fs {
                let rep = cm::verify_abf(m, f, BOUND).unwrap();
                let label = format!("{name}: M = {mn}, F = {fname}");
                match rep.verdict {
                    Verdict::Pass => {
                        passed += 1;
                        spans.insert((rd.n, rd.d));
                    }
                    Verdict::HypothesisRejected { .. } => {}
                    _ => bad.push(format!("{label}: {}", rep.verdict.label())),
                }
                ev.push(json!({ "label": label, "report": rep_json(&rep) }));
            }
        }
    }
    let amps: std::collections::BTreeSet<i64> = spans.iter().map(|s| s.0).collect();
    let dims: std::collections::BTreeSet<i64> = spans.iter().map(|s| s.1).collect();
    let pass = bad.is_empty() && passed >= 10 && amps.contains(&0) && amps.contains(&1) && (0..=2).all(|d| dims.contains(&d));
    let detail = if bad.is_empty() { format!("{passed} equalities, amp {amps:?}, d {dims:?}") } else { format!("failures: {}", bad.join("; ")) };
    outcome(pass, detail, Value::Array(ev))
}

fn mcm_construction() -> Outcome {
    let mut ev = Vec::new();
    let mut ok = true;
    for (name, r) in [("inst-a", inst_a()), ("inst-b", inst_b())] {
        let d = gorenstein_dualizing(&r).unwrap();
        let c = cm::construct_mcm(&r, Some(&d), BOUND).unwrap();
        let m = c.module.as_ref();
        let cert = m.map(|m| cm::is_mcm_dgcomplex(m, &r, BOUND).unwrap());
        let five = cert.as_ref().is_some_and(|c| c.passed() && c.conditions.len() == 5);
        let witnessed = cert.as_ref().is_some_and(|c| c.conditions.iter().any(|x| x.name.starts_with("H^n") && x.witness.is_some()));
        ok &= c.report.passed() && five && witnessed;
        ev.push(json!({ "ring": name, "construction": rep_json(&c.report), "certificate": cert.as_ref().map(rep_json) }));
    }
    let e = inst_e();
    let d = gorenstein_dualizing(&e).ok();
    let c = cm::construct_mcm(&e, d.as_ref(), BOUND).unwrap();
    let rejected = matches!(c.report.verdict, Verdict::HypothesisRejected { .. }) && c.module.is_none();
    ok &= rejected;
    ev.push(json!({ "ring": "inst-e", "construction": rep_json(&c.report) }));
    outcome(ok, "INST-A and INST-B outputs pass all five conditions; INST-E rejected", Value::Array(ev))
}

fn definition_equivalence() -> Outcome {
    let mut ev = Vec::new();
    let mut bad = Vec::new();
    let mut failing_both = 0;
    let mut compared = 0;
    for (name, r) in named_rings() {
        let Ok(d) = gorenstein_dualizing(&r) else { continue };
        let rd = cm::ring_data(&r).unwrap();
        let mut ms = vec![
            ("Σ^-n R".to_string(), DGModule::ring(&r).shift(-rd.n)),
            ("R".to_string(), DGModule::ring(&r)),
            ("k".to_string(), DGModule::residue_field(&r)),
            ("H0(R)".to_string(), DGModule::from_h0_module(&r, &r.h0_presentation())),
            ("Σ k".to_string(), DGModule::residue_field(&r).shift(1)),
        ];
        if let Some(m) = cm::construct_mcm(&r, Some(&d), BOUND).unwrap().module {
            ms.push(("construct-mcm".to_string(), m));
        }
        for (mn, m) in &ms {
            let a = cm::is_mcm_dgcomplex(m, &r, BOUND).unwrap();
            let b = cm::is_mcm_dgcomplex_dual(m, &r, &d, BOUND).unwrap();
            let label = format!("{name}: {mn}");
            let decided = matches!(a.verdict, Verdict::Pass | Verdict::Fail) && matches!(b.verdict, Verdict::Pass | Verdict::Fail);
            if !decided || a.passed() != b.passed() {
                bad.push(format!("{label}: {} vs {}", a.verdict.label(), b.verdict.label()));
            }
            if decided && !a.passed() && !b.passed() {
                failing_both += 1;
            }
            compared += 1;
            ev.push(json!({ "label": label, "direct": a.verdict.label(), "dual": b.verdict.label() }));
        }
    }
    let pass = bad.is_empty() && failing_both > 0;
    let detail = if bad.is_empty() { format!("{compared} modules, {failing_both} rejected by both") } else { format!("disagreements: {}", bad.join("; ")) };
    outcome(pass, detail, Value::Array(ev))
}

fn cm_characterization() -> Outcome {
    let mut ev = Vec::new();
    let mut bad = Vec::new();
    for (name, r) in named_rings() {
        let rd = cm::ring_data(&r).unwrap();
        let c = cm::classify_cm_ring(&r).unwrap();
        let m = cm::is_mcm_dgcomplex(&DGModule::ring(&r).shift(-rd.n), &r, BOUND).unwrap();
        if c.passed() != m.passed() {
            bad.push(name.to_string());
        }
        ev.push(json!({ "ring": name, "cm": c.passed(), "Σ^-n R mcm": m.passed() }));
    }
    let e_not_cm = ev.iter().any(|v| v["ring"] == "inst-e" && v["cm"] == false);
    let pass = bad.is_empty() && e_not_cm;
    let detail = if pass { "agree on all five fixtures, INST-E not CM".to_string() } else { format!("disagreements: {}", bad.join(", ")) };
    outcome(pass, detail, Value::Array(ev))
}

fn canonical_element() -> Outcome {
    let mut ev = Vec::new();
    let mut ok = true;
    for (name, r) in [("inst-d", inst_d()), ("inst-c", inst_c()), ("inst-a", inst_a())] {
        let rd = cm::ring_data(&r).unwrap();
        let d = gorenstein_dualizing(&r).unwrap();
        let n = local::h0_module(&d).unwrap();
        let dep = depth(&n, None, BOUND).unwrap().depth.unwrap();
        let top = xi_nonzero(rd.d, &n, &d, BOUND).unwrap();
        ok &= top.nonzero;
        let mut below = Vec::new();
        for i in 0..dep {
            let c = xi_nonzero(i, &n, &d, BOUND).unwrap();
            ok &= !c.nonzero;
            below.push(json!({ "index": i, "nonzero": c.nonzero }));
        }
        ev.push(json!({ "ring": name, "d": rd.d, "depth": dep, "xi^d": serde_json::to_value(&top).unwrap(), "below depth": below }));
    }
    outcome(ok, "ξ^d nonzero on INST-D, INST-C, INST-A; zero below depth", Value::Array(ev))
}

fn derived_init() -> Outcome {
    let mut ev = Vec::new();
    let mut bad = Vec::new();
    let mut accepted = 0;
    let mut g = rng(9);
    let mut tried = 0;
    while accepted < 20 && tried < 200 {
        tried += 1;
        let inst = random_init_instance(&mut g);
        let rep = cm::verify_init(&inst.ring, &inst.f, &inst.ideal, BOUND).unwrap();
        match &rep.verdict {
            Verdict::Pass => accepted += 1,
            Verdict::HypothesisRejected { .. } => {}
            v => bad.push(format!("{}: {}", inst.label, v.label())),
        }
        ev.push(json!({ "label": inst.label, "report": rep_json(&rep) }));
    }
    let t = inst_d();
    let a = t.base.clone();
    let f = DGModule::koszul_dg_module(&a.vars(), &DGModule::ring(&t));
    let sharp = cm::verify_init(&t, &f, &Ideal::maximal(a), BOUND).unwrap();
    let slack0 = sharp.passed() && sharp.int("slack") == Some(0);
    ev.push(json!({ "label": "inst-d, F = K(x, y), I = m", "report": rep_json(&sharp) }));
    let pass = bad.is_empty() && accepted >= 20 && slack0;
    let detail = if bad.is_empty() { format!("{accepted} of {tried} random instances satisfy the hypotheses, none violate; INST-D slack {}", sharp.int("slack").map_or("none".to_string(), |s| s.to_string())) } else { format!("violations: {}", bad.join("; ")) };
    outcome(pass, detail, Value::Array(ev))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    (1, "kernel oracle equivalence", Duration::from_secs(60), kernel_oracle),
    (2, "fixture cohomology", Duration::from_secs(5), fixture_cohomology),
    (3, "depth consistency", Duration::from_secs(120), depth_consistency),
    (4, "ABF equality", Duration::from_secs(180), abf_equality),
    (5, "MCM construction end-to-end", Duration::from_secs(120), mcm_construction),
    (6, "definition equivalence", Duration::from_secs(120), definition_equivalence),
    (7, "CM characterization", Duration::from_secs(60), cm_characterization),
    (8, "canonical element", Duration::from_secs(60), canonical_element),
    (9, "derived INIT", Duration::from_secs(300), derived_init),
];

/// One full pass: per-criterion (pass, detail, elapsed) and the evidence document.
fn suite() -> (Vec<(bool, String, Duration)>, String) {
    let mut rows = Vec::new();
    let mut doc = Vec::new();
    for (id, title, limit, f) in CRITERIA {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let pass = o.pass && el <= *limit;
        doc.push(json!({ "criterion": id, "title": title, "pass": o.pass, "detail": o.detail, "evidence": o.evidence }));
        rows.push((pass, o.detail, el));
    }
    let text = serde_json::to_string_pretty(&json!({ "schema": "dgcm-acceptance/1", "version": env!("CARGO_PKG_VERSION"), "criteria": doc })).unwrap();
    (rows, text)
}

fn main() {
    let _ = fixtures::FIXTURES;
    let (rows, first) = suite();
    let t = Instant::now();
    let (_, second) = suite();
    let rerun = t.elapsed();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance.json");
    let _ = std::fs::write(&path, &first);
    let mut all = true;
    for ((id, title, limit, _), (pass, detail, el)) in CRITERIA.iter().zip(&rows) {
        all &= *pass;
        println!("criterion {id:>2} {:<4} {title} ({:.2}s, limit {}s): {detail}", if *pass { "PASS" } else { "FAIL" }, el.as_secs_f64(), limit.as_secs());
    }
    let same = first == second;
    all &= same;
    println!("criterion 10 {:<4} determinism ({:.2}s rerun): {} bytes, {}", if same { "PASS" } else { "FAIL" }, rerun.as_secs_f64(), first.len(), if same { "byte-identical" } else { "documents differ" });
    println!("evidence: {}", path.display());
    if !all {
        std::process::exit(1);
    }
}
