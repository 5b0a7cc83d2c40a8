//! Session files: a small line-oriented language declaring a base ring, DG-rings, modules
//! and ideals, followed by commands that each produce a [`CertReport`](crate::report::CertReport).
//!
//! ```text
//! field Q
//! order grevlex
//! ring A = poly(x:1, y:1)
//! dg R = koszul(A; x, x)
//! module M = shift(ring(R), -1)
//! bound 4
//! mcm-check M
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::MonoOrder;
use crate::complexes::Side;

mod parse;
mod run;

pub use parse::parse_session;
pub use run::{run_session, session_digest, CommandResult, FixtureId, RunDocument, RunOptions, Summary, DEFAULT_BOUND, SCHEMA};

/// Source position, ignored by equality so that printing and re-parsing compare equal.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldDecl {
    Rational,
    Prime(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    #[default]
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealExpr {
    Gens(Vec<String>),
    Maximal,
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModExpr {
    Name(String),
    /// `ring(R)`: a DG-ring over itself, or the free base module of rank one.
    Ring(String),
    Residue(String),
    H0(String),
    Quotient(String, IdealExpr),
    Dualizing(String),
    Shift(Box<ModExpr>, i64),
    Koszul(Box<ModExpr>, Vec<String>),
    Truncate(Box<ModExpr>, i64, Side),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DgCtor {
    Koszul { ring: String, elems: Vec<String> },
    SqZero { ring: String, module: ModExpr, shift: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Depth { module: ModExpr, ideal: Option<IdealExpr> },
    Profile(ModExpr),
    Classify(String),
    McmCheck(ModExpr),
    McmDualCheck(ModExpr),
    MaxDepth(ModExpr),
    McmModule(ModExpr),
    ConstructMcm { ring: String, name: Option<String> },
    VerifyAbf { module: ModExpr, f: ModExpr },
    VerifyInit { f: ModExpr, ideal: IdealExpr },
    Xi { module: ModExpr, index: i64 },
    Report(Format),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Field(FieldDecl),
    Order(MonoOrder),
    Ring { name: String, vars: Vec<(String, u32)>, ideal: Vec<String> },
    Dg { name: String, ctor: DgCtor },
    Module { name: String, expr: ModExpr },
    Ideal { name: String, expr: IdealExpr },
    Bound(i64),
    Command(Command),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    pub stmts: Vec<Stmt>,
}

impl Session {
    pub fn commands(&self) -> impl Iterator<Item = (&Span, &Command)> {
        self.stmts.iter().filter_map(|s| match &s.kind {
            StmtKind::Command(c) => Some((&s.span, c)),
            _ => None,
        })
    }

    pub fn bound(&self) -> Option<i64> {
        self.stmts.iter().find_map(|s| match s.kind {
            StmtKind::Bound(b) => Some(b),
            _ => None,
        })
    }

    /// Last `report` command, if any.
    pub fn format(&self) -> Option<Format> {
        self.commands().filter_map(|(_, c)| if let Command::Report(f) = c { Some(*f) } else { None }).last()
    }
}

fn list(xs: &[String]) -> String {
    xs.join(", ")
}

impl fmt::Display for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealExpr::Gens(g) => write!(f, "({})", list(g)),
            IdealExpr::Maximal => write!(f, "maximal"),
            IdealExpr::Name(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for ModExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModExpr::Name(n) => write!(f, "{n}"),
            ModExpr::Ring(r) => write!(f, "ring({r})"),
            ModExpr::Residue(r) => write!(f, "residue({r})"),
            ModExpr::H0(r) => write!(f, "h0({r})"),
            ModExpr::Quotient(r, i) => write!(f, "quotient({r}; {i})"),
            ModExpr::Dualizing(r) => write!(f, "dualizing({r})"),
            ModExpr::Shift(m, s) => write!(f, "shift({m}, {s})"),
            ModExpr::Koszul(m, e) => write!(f, "koszul({m}; {})", list(e)),
            ModExpr::Truncate(m, n, side) => {
                let s = match side {
                    Side::AtMost => "<=",
                    Side::Above => ">",
                };
                write!(f, "truncate({m}, {n}, {s})")
            }
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Depth { module, ideal: None } => write!(f, "depth {module}"),
            Command::Depth { module, ideal: Some(i) } => write!(f, "depth {module} {i}"),
            Command::Profile(m) => write!(f, "profile {m}"),
            Command::Classify(r) => write!(f, "classify {r}"),
            Command::McmCheck(m) => write!(f, "mcm-check {m}"),
            Command::McmDualCheck(m) => write!(f, "mcm-dual-check {m}"),
            Command::MaxDepth(m) => write!(f, "max-depth {m}"),
            Command::McmModule(m) => write!(f, "mcm-module {m}"),
            Command::ConstructMcm { ring, name: None } => write!(f, "construct-mcm {ring}"),
            Command::ConstructMcm { ring, name: Some(n) } => write!(f, "construct-mcm {ring} as {n}"),
            Command::VerifyAbf { module, f: g } => write!(f, "verify abf {module} {g}"),
            Command::VerifyInit { f: g, ideal } => write!(f, "verify init {g} {ideal}"),
            Command::Xi { module, index } => write!(f, "xi {module} {index}"),
            Command::Report(Format::Json) => write!(f, "report json"),
            Command::Report(Format::Table) => write!(f, "report table"),
        }
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Field(FieldDecl::Rational) => write!(f, "field Q"),
            StmtKind::Field(FieldDecl::Prime(p)) => write!(f, "field Fp {p}"),
            StmtKind::Order(o) => write!(f, "order {o}"),
            StmtKind::Ring { name, vars, ideal } => {
                let vs: Vec<String> = vars.iter().map(|(v, w)| format!("{v}:{w}")).collect();
                write!(f, "ring {name} = poly({})", vs.join(", "))?;
                if !ideal.is_empty() {
                    write!(f, " / ({})", list(ideal))?;
                }
                Ok(())
            }
            StmtKind::Dg { name, ctor: DgCtor::Koszul { ring, elems } } if elems.is_empty() => write!(f, "dg {name} = koszul({ring})"),
            StmtKind::Dg { name, ctor: DgCtor::Koszul { ring, elems } } => write!(f, "dg {name} = koszul({ring}; {})", list(elems)),
            StmtKind::Dg { name, ctor: DgCtor::SqZero { ring, module, shift } } => write!(f, "dg {name} = sqzero({ring}; {module}, {shift})"),
            StmtKind::Module { name, expr } => write!(f, "module {name} = {expr}"),
            StmtKind::Ideal { name, expr } => write!(f, "ideal {name} = {expr}"),
            StmtKind::Bound(b) => write!(f, "bound {b}"),
            StmtKind::Command(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}
