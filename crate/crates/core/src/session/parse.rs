//! Line-oriented parser. Names are resolved while parsing, so a parsed session is closed.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{AlgebraError, BaseRing, Field, MonoOrder, PolyRing};
use crate::complexes::Side;

use super::{Command, DgCtor, FieldDecl, Format, IdealExpr, ModExpr, ParseError, Session, Span, Stmt, StmtKind};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Base,
    Dg,
    /// A module over the named ring.
    Module(String),
    Ideal,
}

impl Kind {
    fn noun(&self) -> &'static str {
        match self {
            Kind::Base => "the base ring",
            Kind::Dg => "a DG-ring",
            Kind::Module(_) => "a module",
            Kind::Ideal => "an ideal",
        }
    }
}

#[derive(Default)]
struct Ctx {
    field: Option<FieldDecl>,
    order: Option<MonoOrder>,
    base: Option<Arc<BaseRing>>,
    names: HashMap<String, (Kind, usize)>,
    bound: bool,
}

struct Line<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    ctx: &'a mut Ctx,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Line<'a> {
    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err_at(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col, msg: msg.into() }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        self.err_at(self.col(), msg)
    }

    fn ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    /// Statement keyword: identifier characters and hyphens.
    fn word(&mut self) -> Result<(String, usize), ParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (is_ident(self.chars[self.pos]) || self.chars[self.pos] == '-') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a keyword"));
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        self.ws();
        let start = self.pos;
        if !self.chars.get(self.pos).is_some_and(|&c| is_ident_start(c)) {
            return Err(self.err("expected an identifier"));
        }
        while self.pos < self.chars.len() && is_ident(self.chars[self.pos]) {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err_at(start + 1, "expected an integer"))
    }

    fn peek_call(&mut self, kw: &str) -> bool {
        self.ws();
        let n = kw.chars().count();
        let end = self.pos + n;
        if end > self.chars.len() || self.chars[self.pos..end].iter().collect::<String>() != kw {
            return false;
        }
        let mut k = end;
        if self.chars.get(k).is_some_and(|&c| is_ident(c)) {
            return false;
        }
        while self.chars.get(k).is_some_and(|c| c.is_whitespace()) {
            k += 1;
        }
        self.chars.get(k) == Some(&'(')
    }

    /// Comma-separated raw texts up to (not including) the closing `)` at depth zero.
    fn raw_list(&mut self) -> Result<Vec<(String, usize)>, ParseError> {
        self.ws();
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut start = self.pos;
        loop {
            let Some(&c) = self.chars.get(self.pos) else {
                return Err(self.err("expected ')'"));
            };
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => break,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    out.push(self.item(start, self.pos)?);
                    start = self.pos + 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
        let tail: String = self.chars[start..self.pos].iter().collect();
        if !(out.is_empty() && tail.trim().is_empty()) {
            out.push(self.item(start, self.pos)?);
        }
        Ok(out)
    }

    fn item(&self, start: usize, end: usize) -> Result<(String, usize), ParseError> {
        let mut s = start;
        while s < end && self.chars[s].is_whitespace() {
            s += 1;
        }
        let text: String = self.chars[s..end].iter().collect();
        let text = text.trim_end().to_string();
        if text.is_empty() {
            return Err(self.err_at(s + 1, "empty element"));
        }
        Ok((text, s + 1))
    }

    fn base(&self, col: usize) -> Result<Arc<BaseRing>, ParseError> {
        self.ctx.base.clone().ok_or_else(|| self.err_at(col, "no ring has been declared"))
    }

    /// A homogeneous element of the base ring in canonical text.
    fn poly(&self, text: &str, col: usize) -> Result<String, ParseError> {
        let base = self.base(col)?;
        let p = base.parse(text).map_err(|e| match e {
            AlgebraError::Parse { pos, msg } => {
                let at = col + text[..pos.min(text.len())].chars().count();
                let msg = match msg.strip_prefix("unknown variable ") {
                    Some(name) => format!("unbound identifier {name}"),
                    None => format!("malformed polynomial: {msg}"),
                };
                self.err_at(at, msg)
            }
            other => self.err_at(col, other.to_string()),
        })?;
        if !p.is_zero() && !p.is_homogeneous() {
            return Err(self.err_at(col, format!("element {p} is not homogeneous")));
        }
        Ok(p.to_string())
    }

    fn polys(&mut self) -> Result<Vec<String>, ParseError> {
        let items = self.raw_list()?;
        items.iter().map(|(t, c)| self.poly(t, *c)).collect()
    }

    fn lookup(&self, name: &str, col: usize) -> Result<Kind, ParseError> {
        self.ctx.names.get(name).map(|(k, _)| k.clone()).ok_or_else(|| self.err_at(col, format!("unbound identifier '{name}'")))
    }

    fn bind(&mut self, name: &str, col: usize, kind: Kind) -> Result<(), ParseError> {
        if let Some((_, line)) = self.ctx.names.get(name) {
            return Err(self.err_at(col, format!("duplicate binding '{name}' (first bound on line {line})")));
        }
        self.ctx.names.insert(name.to_string(), (kind, self.line));
        Ok(())
    }

    /// A ring usable as a DG-ring: the base ring (concentrated in degree 0) or a `dg` binding.
    fn ring_name(&mut self) -> Result<String, ParseError> {
        let (name, col) = self.ident()?;
        match self.lookup(&name, col)? {
            Kind::Base | Kind::Dg => Ok(name),
            k => Err(self.err_at(col, format!("'{name}' is {}, expected a ring", k.noun()))),
        }
    }

    fn base_name(&mut self) -> Result<String, ParseError> {
        let (name, col) = self.ident()?;
        match self.lookup(&name, col)? {
            Kind::Base => Ok(name),
            k => Err(self.err_at(col, format!("'{name}' is {}, expected the base ring", k.noun()))),
        }
    }

    fn ideal(&mut self) -> Result<IdealExpr, ParseError> {
        if self.eat('(') {
            let g = self.polys()?;
            self.expect(')')?;
            return Ok(IdealExpr::Gens(g));
        }
        let (name, col) = self.ident()?;
        if name == "maximal" && !self.ctx.names.contains_key("maximal") {
            return Ok(IdealExpr::Maximal);
        }
        match self.lookup(&name, col)? {
            Kind::Ideal => Ok(IdealExpr::Name(name)),
            k => Err(self.err_at(col, format!("'{name}' is {}, expected an ideal", k.noun()))),
        }
    }

    /// Module expression and the ring it lives over.
    fn module(&mut self) -> Result<(ModExpr, String), ParseError> {
        for kw in ["ring", "residue", "h0", "dualizing"] {
            if self.peek_call(kw) {
                self.word()?;
                self.expect('(')?;
                let r = self.ring_name()?;
                self.expect(')')?;
                let e = match kw {
                    "ring" => ModExpr::Ring(r.clone()),
                    "residue" => ModExpr::Residue(r.clone()),
                    "h0" => ModExpr::H0(r.clone()),
                    _ => ModExpr::Dualizing(r.clone()),
                };
                return Ok((e, r));
            }
        }
        if self.peek_call("quotient") {
            self.word()?;
            self.expect('(')?;
            let r = self.ring_name()?;
            self.expect(';')?;
            let i = self.ideal()?;
            self.expect(')')?;
            return Ok((ModExpr::Quotient(r.clone(), i), r));
        }
        if self.peek_call("shift") {
            self.word()?;
            self.expect('(')?;
            let (m, r) = self.module()?;
            self.expect(',')?;
            let s = self.int()?;
            self.expect(')')?;
            return Ok((ModExpr::Shift(Box::new(m), s), r));
        }
        if self.peek_call("koszul") {
            self.word()?;
            self.expect('(')?;
            let (m, r) = self.module()?;
            self.expect(';')?;
            let e = self.polys()?;
            self.expect(')')?;
            return Ok((ModExpr::Koszul(Box::new(m), e), r));
        }
        if self.peek_call("truncate") {
            self.word()?;
            self.expect('(')?;
            let (m, r) = self.module()?;
            self.expect(',')?;
            let n = self.int()?;
            self.expect(',')?;
            let side = if self.eat('>') {
                Side::Above
            } else if self.eat('<') {
                self.expect('=')?;
                Side::AtMost
            } else {
                return Err(self.err("expected '<=' or '>'"));
            };
            self.expect(')')?;
            return Ok((ModExpr::Truncate(Box::new(m), n, side), r));
        }
        let (name, col) = self.ident()?;
        match self.lookup(&name, col)? {
            Kind::Module(r) => Ok((ModExpr::Name(name), r)),
            k => Err(self.err_at(col, format!("'{name}' is {}, expected a module", k.noun()))),
        }
    }

    fn field(&mut self) -> Result<StmtKind, ParseError> {
        let col = self.col();
        if self.ctx.base.is_some() {
            return Err(self.err_at(col, "the field must be declared before the ring"));
        }
        if self.ctx.field.is_some() {
            return Err(self.err_at(col, "field declared twice"));
        }
        let (w, wc) = self.word()?;
        let f = match w.as_str() {
            "Q" => FieldDecl::Rational,
            "Fp" => {
                let c = self.col();
                let p = self.int()?;
                if p < 0 || Field::prime(p as u64).is_err() {
                    return Err(self.err_at(c, format!("{p} is not a prime")));
                }
                FieldDecl::Prime(p as u64)
            }
            _ => return Err(self.err_at(wc, "expected 'Q' or 'Fp <p>'")),
        };
        self.ctx.field = Some(f);
        Ok(StmtKind::Field(f))
    }

    fn order(&mut self) -> Result<StmtKind, ParseError> {
        let col = self.col();
        if self.ctx.base.is_some() {
            return Err(self.err_at(col, "the monomial order must be declared before the ring"));
        }
        if self.ctx.order.is_some() {
            return Err(self.err_at(col, "monomial order declared twice"));
        }
        let (w, wc) = self.word()?;
        let o = match w.as_str() {
            "grevlex" => MonoOrder::GRevLex,
            "deglex" => MonoOrder::DegLex,
            "lex" => MonoOrder::Lex,
            _ => return Err(self.err_at(wc, "expected grevlex, deglex or lex")),
        };
        self.ctx.order = Some(o);
        Ok(StmtKind::Order(o))
    }

    fn ring(&mut self, kw_col: usize) -> Result<StmtKind, ParseError> {
        if self.ctx.base.is_some() {
            return Err(self.err_at(kw_col, "a session has a single base ring"));
        }
        let (name, col) = self.ident()?;
        self.expect('=')?;
        let (w, wc) = self.word()?;
        if w != "poly" {
            return Err(self.err_at(wc, "expected 'poly'"));
        }
        self.expect('(')?;
        let mut vars: Vec<(String, u32)> = Vec::new();
        if !self.eat(')') {
            loop {
                let (v, vc) = self.ident()?;
                if vars.iter().any(|(x, _)| *x == v) {
                    return Err(self.err_at(vc, format!("duplicate variable '{v}'")));
                }
                self.expect(':')?;
                let c = self.col();
                let w = self.int()?;
                if w < 1 || w > u16::MAX as i64 {
                    return Err(self.err_at(c, "variable degrees must be positive"));
                }
                vars.push((v, w as u32));
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        let field = match self.ctx.field.unwrap_or(FieldDecl::Rational) {
            FieldDecl::Rational => Field::Rational,
            FieldDecl::Prime(p) => Field::Prime(p),
        };
        let pr = PolyRing::new(field, vars.clone(), self.ctx.order.unwrap_or_default());
        let mut ideal = Vec::new();
        let slash = self.col();
        if self.eat('/') {
            self.expect('(')?;
            let items = self.raw_list()?;
            self.expect(')')?;
            self.ctx.base = Some(BaseRing::polynomial(pr.clone()));
            for (t, c) in &items {
                ideal.push(self.poly(t, *c)?);
            }
            let gens = ideal.iter().map(|t| crate::algebra::parse::parse_poly(&pr, t).expect("canonical text reparses")).collect();
            match BaseRing::quotient(pr, gens) {
                Ok(b) => self.ctx.base = Some(b),
                Err(e) => {
                    self.ctx.base = None;
                    return Err(self.err_at(slash, e.to_string()));
                }
            }
        } else {
            self.ctx.base = Some(BaseRing::polynomial(pr));
        }
        self.bind(&name, col, Kind::Base)?;
        Ok(StmtKind::Ring { name, vars, ideal })
    }

    fn dg(&mut self) -> Result<StmtKind, ParseError> {
        let (name, col) = self.ident()?;
        self.expect('=')?;
        let (w, wc) = self.word()?;
        self.expect('(')?;
        let ring = self.base_name()?;
        let ctor = match w.as_str() {
            "koszul" => {
                let elems = if self.eat(';') { self.polys()? } else { Vec::new() };
                DgCtor::Koszul { ring, elems }
            }
            "sqzero" => {
                self.expect(';')?;
                let mc = self.col();
                let (module, over) = self.module()?;
                if over != ring {
                    return Err(self.err_at(mc, format!("the module must live over the base ring {ring}")));
                }
                self.expect(',')?;
                let sc = self.col();
                let shift = self.int()?;
                if shift < 1 {
                    return Err(self.err_at(sc, "square-zero extension needs a positive shift"));
                }
                DgCtor::SqZero { ring, module, shift }
            }
            _ => return Err(self.err_at(wc, "expected 'koszul' or 'sqzero'")),
        };
        self.expect(')')?;
        self.bind(&name, col, Kind::Dg)?;
        Ok(StmtKind::Dg { name, ctor })
    }

    fn same_ring(&self, a: &str, b: &str, col: usize) -> Result<(), ParseError> {
        if a != b {
            return Err(self.err_at(col, format!("modules live over different rings ({a} and {b})")));
        }
        Ok(())
    }

    fn command(&mut self, kw: &str, kw_col: usize) -> Result<StmtKind, ParseError> {
        let c = match kw {
            "depth" => {
                let (module, _) = self.module()?;
                let ideal = if self.at_end() { None } else { Some(self.ideal()?) };
                Command::Depth { module, ideal }
            }
            "profile" => Command::Profile(self.module()?.0),
            "classify" => Command::Classify(self.ring_name()?),
            "mcm-check" => Command::McmCheck(self.module()?.0),
            "mcm-dual-check" => Command::McmDualCheck(self.module()?.0),
            "max-depth" => Command::MaxDepth(self.module()?.0),
            "mcm-module" => Command::McmModule(self.module()?.0),
            "construct-mcm" => {
                let ring = self.ring_name()?;
                let name = if self.at_end() {
                    None
                } else {
                    let (w, wc) = self.word()?;
                    if w != "as" {
                        return Err(self.err_at(wc, "expected 'as'"));
                    }
                    let (n, nc) = self.ident()?;
                    self.bind(&n, nc, Kind::Module(ring.clone()))?;
                    Some(n)
                };
                Command::ConstructMcm { ring, name }
            }
            "verify" => {
                let (w, wc) = self.word()?;
                match w.as_str() {
                    "abf" => {
                        let (module, r1) = self.module()?;
                        let fc = self.col();
                        let (f, r2) = self.module()?;
                        self.same_ring(&r1, &r2, fc)?;
                        Command::VerifyAbf { module, f }
                    }
                    "init" => {
                        let (f, _) = self.module()?;
                        let ideal = self.ideal()?;
                        Command::VerifyInit { f, ideal }
                    }
                    _ => return Err(self.err_at(wc, "expected 'abf' or 'init'")),
                }
            }
            "xi" => {
                let (module, _) = self.module()?;
                let index = self.int()?;
                Command::Xi { module, index }
            }
            "report" => {
                let (w, wc) = self.word()?;
                match w.as_str() {
                    "json" => Command::Report(Format::Json),
                    "table" => Command::Report(Format::Table),
                    _ => return Err(self.err_at(wc, "expected 'json' or 'table'")),
                }
            }
            _ => return Err(self.err_at(kw_col, format!("unknown statement '{kw}'"))),
        };
        Ok(StmtKind::Command(c))
    }

    fn statement(&mut self) -> Result<StmtKind, ParseError> {
        let (kw, kw_col) = self.word()?;
        let kind = match kw.as_str() {
            "field" => self.field()?,
            "order" => self.order()?,
            "ring" => self.ring(kw_col)?,
            "dg" => self.dg()?,
            "module" => {
                let (name, col) = self.ident()?;
                self.expect('=')?;
                let (expr, r) = self.module()?;
                self.bind(&name, col, Kind::Module(r))?;
                StmtKind::Module { name, expr }
            }
            "ideal" => {
                let (name, col) = self.ident()?;
                self.expect('=')?;
                let expr = self.ideal()?;
                self.bind(&name, col, Kind::Ideal)?;
                StmtKind::Ideal { name, expr }
            }
            "bound" => {
                if self.ctx.bound {
                    return Err(self.err_at(kw_col, "bound declared twice"));
                }
                let c = self.col();
                let b = self.int()?;
                if b < 1 {
                    return Err(self.err_at(c, "bound must be at least 1"));
                }
                self.ctx.bound = true;
                StmtKind::Bound(b)
            }
            _ => self.command(&kw, kw_col)?,
        };
        if !self.at_end() {
            return Err(self.err("unexpected input"));
        }
        Ok(kind)
    }
}

/// Parses a session; `#` starts a comment running to the end of the line.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let mut ctx = Ctx::default();
    let mut stmts = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut l = Line { chars: body.chars().collect(), pos: 0, line: k + 1, ctx: &mut ctx };
        l.ws();
        let span = Span { line: k + 1, col: l.col() };
        let kind = l.statement()?;
        stmts.push(Stmt { span, kind });
    }
    Ok(Session { stmts })
}
