//! Buchberger's algorithm for submodules of graded free modules `P^r`.
//!
//! Vectors are sparse lists of `(component, monomial, coefficient)` terms kept sorted
//! descending in a module order: term-over-position by twisted degree (TOP) or
//! position-over-term (POT). Lower component indices are larger.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use super::poly::{mono_div, mono_divides, mono_lcm, mono_mul, Mono, Poly, PolyRing};
use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub comp: usize,
    pub mono: Mono,
    pub coef: Scalar,
}

/// Ambient free module: ring, component twists and module order.
#[derive(Debug, PartialEq, Eq)]
pub struct ModCtx {
    pub ring: Arc<PolyRing>,
    pub twists: Vec<i64>,
    pub pot: bool,
}

impl ModCtx {
    pub fn new(ring: Arc<PolyRing>, twists: Vec<i64>, pot: bool) -> Arc<ModCtx> {
        Arc::new(ModCtx { ring, twists, pot })
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn term_degree(&self, comp: usize, m: &Mono) -> i64 {
        self.ring.mono_degree(m) + self.twists[comp]
    }

    pub fn cmp(&self, c1: usize, m1: &Mono, c2: usize, m2: &Mono) -> Ordering {
        let by_term = || {
            self.term_degree(c1, m1)
                .cmp(&self.term_degree(c2, m2))
                .then_with(|| self.ring.cmp_mono(m1, m2))
        };
        if self.pot {
            c2.cmp(&c1).then_with(by_term)
        } else {
            by_term().then_with(|| c2.cmp(&c1))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModVec {
    pub terms: Vec<Term>,
}

impl ModVec {
    pub fn zero() -> ModVec {
        ModVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn from_poly(ctx: &ModCtx, comp: usize, p: &Poly) -> ModVec {
        Self::from_polys(ctx, &[(comp, p.clone())])
    }

    /// Build from `(component, polynomial)` pairs; duplicate components are summed.
    pub fn from_polys(ctx: &ModCtx, parts: &[(usize, Poly)]) -> ModVec {
        let mut terms: Vec<Term> = Vec::new();
        for (c, p) in parts {
            for (m, k) in p.terms() {
                terms.push(Term { comp: *c, mono: m.clone(), coef: k.clone() });
            }
        }
        Self::normalize(ctx, terms)
    }

    pub fn from_dense(ctx: &ModCtx, v: &[Poly]) -> ModVec {
        let parts: Vec<(usize, Poly)> = v.iter().cloned().enumerate().filter(|(_, p)| !p.is_zero()).collect();
        Self::from_polys(ctx, &parts)
    }

    fn normalize(ctx: &ModCtx, mut terms: Vec<Term>) -> ModVec {
        terms.sort_by(|a, b| ctx.cmp(b.comp, &b.mono, a.comp, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.comp == t.comp && l.mono == t.mono => l.coef = l.coef.add(&t.coef),
                _ => out.push(t),
            }
            if out.last().map(|l| l.coef.is_zero()).unwrap_or(false) {
                out.pop();
            }
        }
        out.retain(|t| !t.coef.is_zero());
        ModVec { terms: out }
    }

    /// Component `comp` as a polynomial.
    pub fn to_poly(&self, ring: &Arc<PolyRing>, comp: usize) -> Poly {
        Poly::from_terms(
            ring,
            self.terms.iter().filter(|t| t.comp == comp).map(|t| (t.mono.clone(), t.coef.clone())).collect(),
        )
    }

    pub fn to_dense(&self, ring: &Arc<PolyRing>, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Mono, Scalar)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.comp].push((t.mono.clone(), t.coef.clone()));
        }
        buckets.into_iter().map(|b| Poly::from_terms(ring, b)).collect()
    }

    /// Twisted degree if homogeneous.
    pub fn degree(&self, ctx: &ModCtx) -> Option<i64> {
        let mut it = self.terms.iter().map(|t| ctx.term_degree(t.comp, &t.mono));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn merge(&self, ctx: &ModCtx, other: &ModVec, negate: bool) -> ModVec {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match ctx.cmp(a[i].comp, &a[i].mono, b[j].comp, &b[j].mono) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let t = &b[j];
                    out.push(Term { comp: t.comp, mono: t.mono.clone(), coef: t.coef.signed(negate) });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].coef.sub(&b[j].coef) } else { a[i].coef.add(&b[j].coef) };
                    if !c.is_zero() {
                        out.push(Term { comp: a[i].comp, mono: a[i].mono.clone(), coef: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|t| Term { comp: t.comp, mono: t.mono.clone(), coef: t.coef.signed(negate) }));
        ModVec { terms: out }
    }

    pub fn add(&self, ctx: &ModCtx, o: &ModVec) -> ModVec {
        self.merge(ctx, o, false)
    }

    pub fn sub(&self, ctx: &ModCtx, o: &ModVec) -> ModVec {
        self.merge(ctx, o, true)
    }

    pub fn scale(&self, c: &Scalar) -> ModVec {
        if c.is_zero() {
            return ModVec::zero();
        }
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| Term { comp: t.comp, mono: t.mono.clone(), coef: t.coef.mul(c) })
                .collect(),
        }
    }

    /// Multiply by `c * m`; both module orders are compatible with monomial multiplication.
    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> ModVec {
        if c.is_zero() {
            return ModVec::zero();
        }
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| Term { comp: t.comp, mono: mono_mul(&t.mono, m), coef: t.coef.mul(c) })
                .collect(),
        }
    }

    pub fn mul_poly(&self, ctx: &ModCtx, p: &Poly) -> ModVec {
        let mut acc = ModVec::zero();
        for (m, c) in p.terms() {
            acc = acc.add(ctx, &self.mul_term(m, c));
        }
        acc
    }

    pub fn monic(&self) -> ModVec {
        match self.lead() {
            Some(t) if !t.coef.is_one() => self.scale(&t.coef.inv()),
            _ => self.clone(),
        }
    }

    /// Re-sort under another context with the same ring; components are renumbered by `map`.
    pub fn remap(&self, ctx: &ModCtx, map: impl Fn(usize) -> usize) -> ModVec {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { comp: map(t.comp), mono: t.mono.clone(), coef: t.coef.clone() })
            .collect();
        Self::normalize(ctx, terms)
    }
}

/// A reduced Gröbner basis of a submodule, kept sorted by leading term.
#[derive(Clone, Debug)]
pub struct Groebner {
    ctx: Arc<ModCtx>,
    basis: Vec<ModVec>,
}

impl Groebner {
    pub fn new(ctx: Arc<ModCtx>, gens: Vec<ModVec>) -> Groebner {
        let mut g = Groebner { ctx, basis: Vec::new() };
        g.extend(gens);
        g
    }

    pub fn ctx(&self) -> &Arc<ModCtx> {
        &self.ctx
    }

    pub fn basis(&self) -> &[ModVec] {
        &self.basis
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.ctx.rank() == 1
            && self.basis.iter().any(|g| g.terms.len() == 1 && g.terms[0].mono.iter().all(|&e| e == 0))
    }

    fn find_reducer(&self, basis: &[ModVec], t: &Term) -> Option<usize> {
        basis.iter().position(|g| {
            let l = g.lead().unwrap();
            l.comp == t.comp && mono_divides(&l.mono, &t.mono)
        })
    }

    fn reduce_against(&self, basis: &[ModVec], v: &ModVec, full: bool) -> ModVec {
        let ctx = &*self.ctx;
        let mut p = v.clone();
        let mut rest: Vec<Term> = Vec::new();
        while let Some(t) = p.lead().cloned() {
            match self.find_reducer(basis, &t) {
                Some(k) => {
                    let g = &basis[k];
                    let l = g.lead().unwrap();
                    let q = mono_div(&t.mono, &l.mono);
                    p = p.sub(ctx, &g.mul_term(&q, &t.coef.div(&l.coef)));
                }
                None => {
                    if !full {
                        let mut terms = vec![t];
                        terms.extend_from_slice(&p.terms[1..]);
                        return ModVec { terms };
                    }
                    rest.push(t);
                    p.terms.remove(0);
                }
            }
        }
        ModVec { terms: rest }
    }

    /// Full normal form: no term of the result is divisible by a leading term.
    pub fn reduce(&self, v: &ModVec) -> ModVec {
        self.reduce_against(&self.basis, v, true)
    }

    pub fn contains(&self, v: &ModVec) -> bool {
        self.reduce_against(&self.basis, v, false).is_zero()
    }

    /// Add generators and complete to a reduced basis again.
    pub fn extend(&mut self, gens: Vec<ModVec>) {
        let ctx = self.ctx.clone();
        let mut basis = std::mem::take(&mut self.basis);
        let old = basis.len();
        let mut pairs: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        let push = |basis: &mut Vec<ModVec>,
                    pairs: &mut BTreeSet<(i64, usize, usize)>,
                    pending: &mut HashSet<(usize, usize)>,
                    g: ModVec| {
            let j = basis.len();
            let lj = g.lead().unwrap().clone();
            for (i, b) in basis.iter().enumerate() {
                let li = b.lead().unwrap();
                if li.comp == lj.comp {
                    let l = mono_lcm(&li.mono, &lj.mono);
                    pairs.insert((ctx.term_degree(lj.comp, &l), i, j));
                    pending.insert((i, j));
                }
            }
            basis.push(g);
        };
        let mut fresh: Vec<ModVec> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        fresh.sort_by(|a, b| {
            let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
            ctx.term_degree(x.comp, &x.mono).cmp(&ctx.term_degree(y.comp, &y.mono))
        });
        for g in fresh {
            let r = self.reduce_against(&basis, &g, true);
            if !r.is_zero() {
                push(&mut basis, &mut pairs, &mut pending, r.monic());
            }
        }
        if basis.len() == old {
            self.basis = basis;
            return;
        }
        while let Some(&pair) = pairs.iter().next() {
            pairs.remove(&pair);
            let (_, i, j) = pair;
            pending.remove(&(i, j));
            let (li, lj) = (basis[i].lead().unwrap().clone(), basis[j].lead().unwrap().clone());
            let l = mono_lcm(&li.mono, &lj.mono);
            // chain criterion
            let skip = (0..basis.len()).any(|k| {
                if k == i || k == j {
                    return false;
                }
                let lk = basis[k].lead().unwrap();
                lk.comp == li.comp
                    && mono_divides(&lk.mono, &l)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if skip {
                continue;
            }
            let s = basis[i]
                .mul_term(&mono_div(&l, &li.mono), &li.coef.inv())
                .sub(&ctx, &basis[j].mul_term(&mono_div(&l, &lj.mono), &lj.coef.inv()));
            let r = self.reduce_against(&basis, &s, true);
            if !r.is_zero() {
                push(&mut basis, &mut pairs, &mut pending, r.monic());
            }
        }
        self.basis = Self::interreduce(&ctx, basis, self);
    }

    fn interreduce(ctx: &ModCtx, basis: Vec<ModVec>, this: &Groebner) -> Vec<ModVec> {
        let mut keep: Vec<ModVec> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let l = g.lead().unwrap();
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                let m = h.lead().unwrap();
                j != i
                    && m.comp == l.comp
                    && mono_divides(&m.mono, &l.mono)
                    && (m.mono != l.mono || j < i)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        let mut out = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let g = &keep[i];
            let head = ModVec { terms: vec![g.terms[0].clone()] };
            let tail = ModVec { terms: g.terms[1..].to_vec() };
            let others: Vec<ModVec> =
                keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h.clone()).collect();
            let red = this.reduce_against(&others, &tail, true);
            out.push(head.add(ctx, &red));
        }
        out.sort_by(|a, b| {
            let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
            ctx.cmp(y.comp, &y.mono, x.comp, &x.mono)
        });
        out
    }
}

/// Extended basis of `[col_j ; e_j]` under POT, giving syzygies and lifts of a column matrix.
///
/// `cols` live in a free module of rank `r`; `extra` are additional generators of the
/// same ambient (relations, defining-ideal multiples) whose coefficients are discarded.
pub struct LiftSolver {
    r: usize,
    m: usize,
    ctx: Arc<ModCtx>,
    gb: Groebner,
}

impl LiftSolver {
    pub fn new(ambient: &ModCtx, cols: &[ModVec], extra: &[ModVec], col_degrees: &[i64]) -> LiftSolver {
        let r = ambient.rank();
        let m = cols.len();
        let mut twists = ambient.twists.clone();
        twists.extend_from_slice(col_degrees);
        let ctx = ModCtx::new(ambient.ring.clone(), twists, true);
        let mut gens = Vec::with_capacity(m + extra.len());
        for (j, c) in cols.iter().enumerate() {
            let mut v = c.remap(&ctx, |k| k);
            v = v.add(&ctx, &ModVec { terms: vec![Term { comp: r + j, mono: ambient.ring.one_mono(), coef: ambient.ring.field.one() }] });
            gens.push(v);
        }
        for e in extra {
            gens.push(e.remap(&ctx, |k| k));
        }
        let gb = Groebner::new(ctx.clone(), gens);
        LiftSolver { r, m, ctx, gb }
    }

    /// Generators of all `a` with `sum a_j col_j` in the span of `extra`, as dense vectors.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        self.gb
            .basis()
            .iter()
            .filter(|g| g.lead().unwrap().comp >= self.r)
            .map(|g| g.to_dense(&self.ctx.ring, self.r + self.m).split_off(self.r))
            .collect()
    }

    /// Coefficients `a` with `v = sum a_j col_j` modulo `extra`, if any.
    pub fn lift(&self, v: &ModVec) -> Option<Vec<Poly>> {
        let nf = self.gb.reduce(&v.remap(&self.ctx, |k| k));
        if nf.terms.iter().any(|t| t.comp < self.r) {
            return None;
        }
        let dense = nf.to_dense(&self.ctx.ring, self.r + self.m);
        Some(dense[self.r..].iter().map(|p| p.neg()).collect())
    }
}
