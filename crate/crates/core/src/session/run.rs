//! Command dispatch and the run document.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::ideal::Ideal;
use crate::algebra::parse::parse_poly;
use crate::algebra::{BaseRing, Field, MonoOrder, Poly, PolyRing};
use crate::cm;
use crate::dg::dualizing::gorenstein_dualizing;
use crate::dg::{DGAlgebra, DGModule, DgError};
use crate::local::{self, TorsionProfile};
use crate::oracle::DenseOracle;
use crate::report::{CertReport, Verdict};

use super::{Command, DgCtor, FieldDecl, Format, IdealExpr, ModExpr, Session, StmtKind};

pub const SCHEMA: &str = "dgcm-report/1";
pub const DEFAULT_BOUND: i64 = 4;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Recorded in the document; usually the file stem.
    pub name: String,
    /// Overrides the session's `bound`.
    pub bound: Option<i64>,
    /// Cross-check against the dense oracle where the base is Artinian.
    pub oracle: bool,
    /// Overrides the session's `report` command.
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureId {
    pub name: String,
    /// SHA-256 of the canonical printed session.
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandResult {
    pub line: usize,
    pub command: String,
    pub report: CertReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub rejected: usize,
    pub exhausted: usize,
    pub error: usize,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDocument {
    pub schema: String,
    pub version: String,
    pub fixture: FixtureId,
    pub bound: i64,
    pub oracle: bool,
    #[serde(skip)]
    pub format: Format,
    pub results: Vec<CommandResult>,
    pub summary: Summary,
}

impl RunDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}  fixture {} ({})  bound {}{}", SCHEMA, self.version, self.fixture.name, &self.fixture.sha256[..12], self.bound, if self.oracle { "  oracle" } else { "" });
        for r in &self.results {
            let _ = writeln!(s, "\nline {}: {}", r.line, r.command);
            s.push_str(&r.report.table());
        }
        let m = &self.summary;
        let _ = writeln!(s, "\npass {}  fail {}  rejected {}  exhausted {}  error {}  exit {}", m.pass, m.fail, m.rejected, m.exhausted, m.error, m.exit_code);
        s
    }

    pub fn render(&self) -> String {
        match self.format {
            Format::Json => self.to_json(),
            Format::Table => self.to_table(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }
}

/// Exit status: internal error 4, any failed conclusion 1, exhausted bound 3, rejected hypothesis 2.
fn summarize(results: &[CommandResult]) -> Summary {
    let mut s = Summary::default();
    for r in results {
        match r.report.verdict {
            Verdict::Pass => s.pass += 1,
            Verdict::Fail => s.fail += 1,
            Verdict::HypothesisRejected { .. } => s.rejected += 1,
            Verdict::BoundExhausted { .. } => s.exhausted += 1,
            Verdict::Error { .. } => s.error += 1,
        }
    }
    s.exit_code = if s.error > 0 {
        4
    } else if s.fail > 0 {
        1
    } else if s.exhausted > 0 {
        3
    } else if s.rejected > 0 {
        2
    } else {
        0
    };
    s
}

/// A failure inside a command, before any report exists.
enum Halt {
    Dg(DgError),
    Unbound(String),
}

impl From<DgError> for Halt {
    fn from(e: DgError) -> Halt {
        Halt::Dg(e)
    }
}

impl From<crate::algebra::AlgebraError> for Halt {
    fn from(e: crate::algebra::AlgebraError) -> Halt {
        Halt::Dg(e.into())
    }
}

fn halted(predicate: &str, bound: i64, h: Halt) -> CertReport {
    let rep = CertReport::new(predicate);
    match h {
        Halt::Dg(DgError::BoundExhausted { bound, what }) => rep.exhausted(bound, what),
        Halt::Dg(DgError::NoDualizingConstructor) => rep.reject("R admits a dualizing DG-module"),
        Halt::Dg(e @ DgError::NotSystemOfParameters { .. }) => rep.reject(e.to_string()),
        Halt::Dg(e) => {
            let mut rep = rep;
            rep.bound("resolution", bound);
            rep.error(e.to_string())
        }
        Halt::Unbound(m) => rep.error(m),
    }
}

struct Env<'s> {
    base: Arc<BaseRing>,
    base_name: String,
    dg_decls: HashMap<&'s str, &'s DgCtor>,
    module_decls: HashMap<&'s str, &'s ModExpr>,
    ideal_decls: HashMap<&'s str, &'s IdealExpr>,
    /// Ring each module name lives over.
    module_ring: HashMap<String, String>,
    rings: HashMap<String, Arc<DGAlgebra>>,
    modules: HashMap<String, DGModule>,
    duals: HashMap<String, DGModule>,
    bound: i64,
    oracle: bool,
}

fn build_base(session: &Session) -> Option<(String, Arc<BaseRing>)> {
    let mut field = Field::Rational;
    let mut order = MonoOrder::default();
    for s in &session.stmts {
        match &s.kind {
            StmtKind::Field(FieldDecl::Rational) => field = Field::Rational,
            StmtKind::Field(FieldDecl::Prime(p)) => field = Field::Prime(*p),
            StmtKind::Order(o) => order = *o,
            StmtKind::Ring { name, vars, ideal } => {
                let pr = PolyRing::new(field, vars.clone(), order);
                let gens: Vec<Poly> = ideal.iter().map(|t| parse_poly(&pr, t).expect("parsed session")).collect();
                let base = if gens.is_empty() { BaseRing::polynomial(pr) } else { BaseRing::quotient(pr, gens).expect("parsed session") };
                return Some((name.clone(), base));
            }
            _ => {}
        }
    }
    None
}

impl<'s> Env<'s> {
    fn poly(&self, t: &str) -> Poly {
        self.base.parse(t).expect("parsed session")
    }

    fn ring(&mut self, name: &str) -> Result<Arc<DGAlgebra>, Halt> {
        if let Some(r) = self.rings.get(name) {
            return Ok(r.clone());
        }
        let r = if name == self.base_name {
            DGAlgebra::trivial(self.base.clone())
        } else {
            let ctor = *self.dg_decls.get(name).ok_or_else(|| Halt::Unbound(format!("unknown ring {name}")))?;
            match ctor {
                DgCtor::Koszul { elems, .. } => DGAlgebra::koszul(self.base.clone(), elems.iter().map(|t| self.poly(t)).collect())?,
                DgCtor::SqZero { module, shift, .. } => {
                    let m = self.module(module)?;
                    let b = m.cx.cohomology_bounds().map_err(DgError::from)?;
                    if b.inf().is_some_and(|i| i != 0) || b.sup().is_some_and(|i| i != 0) {
                        return Err(Halt::Dg(DgError::Invalid("the square-zero module must have cohomology only in degree 0".into())));
                    }
                    DGAlgebra::square_zero(self.base.clone(), local::cohomology_module(&m, 0)?, *shift)?
                }
            }
        };
        self.rings.insert(name.to_string(), r.clone());
        Ok(r)
    }

    fn ideal(&self, e: &IdealExpr) -> Result<Ideal, Halt> {
        Ok(match e {
            IdealExpr::Gens(g) => Ideal::new(self.base.clone(), g.iter().map(|t| self.poly(t)).collect())?,
            IdealExpr::Maximal => Ideal::maximal(self.base.clone()),
            IdealExpr::Name(n) => {
                let e = *self.ideal_decls.get(n.as_str()).ok_or_else(|| Halt::Unbound(format!("unknown ideal {n}")))?;
                self.ideal(e)?
            }
        })
    }

    fn ring_of(&self, e: &ModExpr) -> String {
        match e {
            ModExpr::Name(n) => self.module_ring[n].clone(),
            ModExpr::Ring(r) | ModExpr::Residue(r) | ModExpr::H0(r) | ModExpr::Quotient(r, _) | ModExpr::Dualizing(r) => r.clone(),
            ModExpr::Shift(m, _) | ModExpr::Koszul(m, _) | ModExpr::Truncate(m, _, _) => self.ring_of(m),
        }
    }

    fn dualizing(&mut self, ring: &str) -> Result<DGModule, Halt> {
        if let Some(d) = self.duals.get(ring) {
            return Ok(d.clone());
        }
        let r = self.ring(ring)?;
        let d = gorenstein_dualizing(&r)?;
        self.duals.insert(ring.to_string(), d.clone());
        Ok(d)
    }

    fn module(&mut self, e: &ModExpr) -> Result<DGModule, Halt> {
        Ok(match e {
            ModExpr::Name(n) => {
                if let Some(m) = self.modules.get(n) {
                    return Ok(m.clone());
                }
                let Some(&e) = self.module_decls.get(n.as_str()) else {
                    return Err(Halt::Unbound(format!("{n} was not constructed")));
                };
                let m = self.module(e)?;
                self.modules.insert(n.clone(), m.clone());
                m
            }
            ModExpr::Ring(r) => DGModule::ring(&self.ring(r)?),
            ModExpr::Residue(r) => DGModule::residue_field(&self.ring(r)?),
            ModExpr::H0(r) => {
                let r = self.ring(r)?;
                DGModule::from_h0_module(&r, &r.h0_presentation())
            }
            ModExpr::Quotient(r, i) => {
                let r = self.ring(r)?;
                DGModule::quotient_ring(&r, &self.ideal(i)?)
            }
            ModExpr::Dualizing(r) => self.dualizing(r)?,
            ModExpr::Shift(m, s) => self.module(m)?.shift(*s),
            ModExpr::Koszul(m, elems) => {
                let m = self.module(m)?;
                let ps: Vec<Poly> = elems.iter().map(|t| self.poly(t)).collect();
                DGModule::koszul_dg_module(&ps, &m)
            }
            ModExpr::Truncate(m, n, side) => self.module(m)?.truncate(*n, *side),
        })
    }

    fn module_and_ring(&mut self, e: &ModExpr) -> Result<(DGModule, Arc<DGAlgebra>), Halt> {
        let r = self.ring(&self.ring_of(e))?;
        Ok((self.module(e)?, r))
    }

    /// Adds the dense-oracle comparison when requested and the base is Artinian.
    fn oracle_check(&self, rep: &mut CertReport, m: &DGModule, p: Option<&TorsionProfile>) {
        if !self.oracle {
            return;
        }
        let Some(o) = DenseOracle::new(&m.cx) else {
            rep.invariant("oracle", "not applicable: base is not Artinian");
            return;
        };
        let dense = o.profile();
        let w = m.window();
        let dense: BTreeMap<i64, Vec<(i64, usize)>> = dense.into_iter().filter(|(i, _)| w.contains(*i)).collect();
        let ours: BTreeMap<i64, Vec<(i64, usize)>> = match p {
            Some(p) => p.entries.iter().filter(|(_, e)| e.nonzero).map(|(i, e)| (*i, e.hilbert.clone())).collect(),
            None => BTreeMap::new(),
        };
        let agree = p.is_some() && dense == ours;
        let witness = (!agree).then(|| format!("dense {:?} vs kernel {:?}", dense, ours));
        rep.condition("dense oracle agrees", agree, witness);
        rep.invariant("oracle depth", dense.keys().next().copied());
    }

    fn run(&mut self, c: &Command) -> Result<Option<CertReport>, Halt> {
        let b = self.bound;
        let rep = match c {
            Command::Report(_) => return Ok(None),
            Command::Depth { module, ideal } => {
                let m = self.module(module)?;
                let i = ideal.as_ref().map(|i| self.ideal(i)).transpose()?;
                let cert = local::depth(&m, i.as_ref(), b)?;
                let mut rep = CertReport::new("depth");
                rep.invariant("depth", cert.depth).invariant("inf RHom(k, M)", cert.via_ext);
                if let Some(v) = cert.via_profile {
                    rep.invariant("inf RΓ(M)", v);
                    rep.condition("Ext and local cohomology agree", v == cert.via_ext, None);
                }
                rep.bound("resolution", cert.bound);
                if i.is_none() {
                    let p = local::local_cohomology_profile(&m)?;
                    self.oracle_check(&mut rep, &m, Some(&p));
                }
                rep.conclude()
            }
            Command::Profile(e) => {
                let m = self.module(e)?;
                let p = local::local_cohomology_profile(&m)?;
                let mut rep = CertReport::new("profile");
                rep.invariant("inf RΓ(M)", p.inf).invariant("sup RΓ(M)", p.sup).invariant("amp RΓ(M)", p.amp).invariant("support RΓ(M)", p.support());
                for (i, en) in p.entries.iter().filter(|(_, e)| e.nonzero) {
                    let h: Vec<String> = en.hilbert.iter().map(|(t, d)| format!("{t}:{d}")).collect();
                    rep.invariant(&format!("H^{i} hilbert"), h.join(" "));
                }
                rep.invariant("window", p.window.to_string());
                rep.condition("window covers the support", p.complete, None);
                self.oracle_check(&mut rep, &m, Some(&p));
                rep.conclude()
            }
            Command::Classify(r) => {
                let r = self.ring(r)?;
                let ca = cm::has_constant_amplitude(&r)?;
                let mut rep = cm::classify_cm_ring(&r)?;
                rep.invariant("constant amplitude", ca.passed());
                let m = DGModule::ring(&r);
                if self.oracle {
                    let p = local::local_cohomology_profile(&m)?;
                    self.oracle_check(&mut rep, &m, Some(&p));
                }
                rep.conclude()
            }
            Command::McmCheck(e) => {
                let (m, r) = self.module_and_ring(e)?;
                let mut rep = cm::is_mcm_dgcomplex(&m, &r, b)?;
                if self.oracle {
                    let p = local::local_cohomology_profile(&m)?;
                    self.oracle_check(&mut rep, &m, Some(&p));
                }
                rep.conclude()
            }
            Command::McmDualCheck(e) => {
                let (m, r) = self.module_and_ring(e)?;
                let d = self.dualizing(&self.ring_of(e))?;
                cm::is_mcm_dgcomplex_dual(&m, &r, &d, b)?
            }
            Command::MaxDepth(e) => {
                let (m, r) = self.module_and_ring(e)?;
                cm::has_maximal_depth(&m, &r, b)?
            }
            Command::McmModule(e) => {
                let (m, r) = self.module_and_ring(e)?;
                cm::is_mcm_dgmodule(&m, &r)?
            }
            Command::ConstructMcm { ring, name } => {
                let r = self.ring(ring)?;
                let d = match self.dualizing(ring) {
                    Ok(d) => Some(d),
                    Err(Halt::Dg(DgError::NoDualizingConstructor)) => None,
                    Err(e) => return Err(e),
                };
                let out = cm::construct_mcm(&r, d.as_ref(), b)?;
                let mut rep = out.report;
                if let Some(m) = out.module {
                    if self.oracle {
                        let p = local::local_cohomology_profile(&m)?;
                        self.oracle_check(&mut rep, &m, Some(&p));
                    }
                    if let Some(n) = name {
                        self.modules.insert(n.clone(), m);
                    }
                }
                rep.conclude()
            }
            Command::VerifyAbf { module, f } => {
                let m = self.module(module)?;
                let f = self.module(f)?;
                cm::verify_abf(&m, &f, b)?
            }
            Command::VerifyInit { f, ideal } => {
                let (f, r) = self.module_and_ring(f)?;
                let i = self.ideal(ideal)?;
                cm::verify_init(&r, &f, &i, b)?
            }
            Command::Xi { module, index } => {
                let m = self.module(module)?;
                let d = self.dualizing(&self.ring_of(module))?;
                let x = local::xi_nonzero(*index, &m, &d, b)?;
                let mut rep = CertReport::new("xi");
                rep.invariant("index", x.index).invariant("witnesses", x.witnesses).invariant("Ext(k, M) nonzero", x.source_nonzero).invariant("route", x.route.clone());
                let rows: Vec<String> = x.matrix.iter().map(|r| format!("[{}]", r.join(", "))).collect();
                rep.invariant("matrix", rows.join(" "));
                rep.condition("ξ nonzero", x.nonzero, (x.witnesses > 0).then(|| format!("{} cohomology generators with nonzero image", x.witnesses)));
                rep.bound("resolution", x.bound);
                rep.conclude()
            }
        };
        Ok(Some(rep))
    }
}

fn predicate(c: &Command) -> &'static str {
    match c {
        Command::Depth { .. } => "depth",
        Command::Profile(_) => "profile",
        Command::Classify(_) => "cm-ring",
        Command::McmCheck(_) => "mcm-dg-complex",
        Command::McmDualCheck(_) => "mcm-dg-complex-dual",
        Command::MaxDepth(_) => "maximal-depth",
        Command::McmModule(_) => "mcm-dg-module",
        Command::ConstructMcm { .. } => "construct-mcm",
        Command::VerifyAbf { .. } => "abf",
        Command::VerifyInit { .. } => "init",
        Command::Xi { .. } => "xi",
        Command::Report(_) => "report",
    }
}

/// SHA-256 of the canonical printed session, in hex.
pub fn session_digest(session: &Session) -> String {
    hex::encode(Sha256::digest(session.to_string().as_bytes()))
}

/// Executes the commands in order. Failures inside a command become that command's report.
pub fn run_session(session: &Session, opts: &RunOptions) -> RunDocument {
    let bound = opts.bound.or(session.bound()).unwrap_or(DEFAULT_BOUND).max(1);
    let fixture = FixtureId { name: opts.name.clone(), sha256: session_digest(session) };
    let format = opts.format.or(session.format()).unwrap_or(Format::Table);
    let mut results = Vec::new();
    if let Some((base_name, base)) = build_base(session) {
        let mut env = Env {
            base,
            base_name,
            dg_decls: HashMap::new(),
            module_decls: HashMap::new(),
            ideal_decls: HashMap::new(),
            module_ring: HashMap::new(),
            rings: HashMap::new(),
            modules: HashMap::new(),
            duals: HashMap::new(),
            bound,
            oracle: opts.oracle,
        };
        for s in &session.stmts {
            match &s.kind {
                StmtKind::Dg { name, ctor } => {
                    env.dg_decls.insert(name, ctor);
                }
                StmtKind::Ideal { name, expr } => {
                    env.ideal_decls.insert(name, expr);
                }
                StmtKind::Module { name, expr } => {
                    env.module_decls.insert(name, expr);
                    let r = env.ring_of(expr);
                    env.module_ring.insert(name.clone(), r);
                }
                StmtKind::Command(c) => {
                    if let Command::ConstructMcm { ring, name: Some(n) } = c {
                        env.module_ring.insert(n.clone(), ring.clone());
                    }
                    let rep = match env.run(c) {
                        Ok(None) => continue,
                        Ok(Some(r)) => r,
                        Err(h) => halted(predicate(c), bound, h),
                    };
                    results.push(CommandResult { line: s.span.line, command: c.to_string(), report: rep });
                }
                _ => {}
            }
        }
    }
    let summary = summarize(&results);
    RunDocument { schema: SCHEMA.into(), version: env!("CARGO_PKG_VERSION").into(), fixture, bound, oracle: opts.oracle, format, results, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::parse_session;

    fn run(text: &str) -> RunDocument {
        run_session(&parse_session(text).unwrap(), &RunOptions { name: "t".into(), ..Default::default() })
    }

    #[test]
    fn construct_then_check() {
        let doc = run("ring A = poly(x:1, y:1)\ndg R = koszul(A; x, x)\nconstruct-mcm R as C\nmcm-check C\nclassify R\nreport json\n");
        assert_eq!(doc.results.len(), 3);
        assert!(doc.results.iter().all(|r| r.report.passed()), "{}", doc.to_table());
        assert_eq!(doc.exit_code(), 0);
        assert_eq!(doc.format, Format::Json);
        assert_eq!(doc.to_json(), run("ring A = poly(x:1, y:1)\ndg R = koszul(A; x, x)\nconstruct-mcm R as C\nmcm-check C\nclassify R\nreport json\n").to_json());
    }

    #[test]
    fn rejections_and_errors_are_reports() {
        let doc = run("ring A = poly(x:1, y:1)\ndg R = sqzero(A; quotient(A; (x)), 1)\nconstruct-mcm R as C\nmcm-check C\n");
        assert_eq!(doc.results[0].report.verdict.label(), "hypothesis-rejected");
        assert_eq!(doc.results[1].report.verdict.label(), "error");
        assert_eq!(doc.exit_code(), 4);
        let doc = run("ring A = poly(x:1, y:1)\ndg R = sqzero(A; quotient(A; (x)), 1)\nmcm-dual-check ring(R)\n");
        assert_eq!(doc.exit_code(), 2, "{}", doc.to_table());
    }
}
