//! Bounded cohomological complexes of finite graded modules over the base ring.
//!
//! Each term is a free module `P^r` with internal twists, optionally modulo a relation
//! submodule; relations form a subcomplex. Truly free complexes have no relations.
//! Differentials are stored by columns: `d(i)[c]` is the image of basis element `c` of `C^i`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::module::{is_zero_vec, kernel, span_basis, subquotient, vec_degree, zero_vec, Subquotient, Vector};
use crate::algebra::{AlgebraError, BaseRing, ModVec, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("d^{degree} after d^{prev} is nonzero: {witness}", prev = degree - 1)]
    SquareNonzero { degree: i64, witness: String },
    #[error("degree {degree}, column {col}: {msg}")]
    Shape { degree: i64, col: usize, msg: String },
    #[error("entry in degree {degree}, column {col} is inhomogeneous or has the wrong twist")]
    Twist { degree: i64, col: usize },
    #[error("relations in degree {degree} are not carried into relations")]
    RelationsNotSubcomplex { degree: i64 },
    #[error("map does not commute with differentials in degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("operation needs a complex without relations")]
    NotFree,
    #[error("degree {degree} lies outside the certified window {window}")]
    Uncertified { degree: i64, window: Window },
    #[error("free model: {0}")]
    Resolution(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Degrees in which a finite model has the cohomology of the object it stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub struct Window {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Window {
    pub const FULL: Window = Window { lo: None, hi: None };

    pub fn is_full(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo.is_none_or(|l| i >= l) && self.hi.is_none_or(|h| i <= h)
    }

    pub fn shift(&self, s: i64) -> Window {
        Window { lo: self.lo.map(|l| l - s), hi: self.hi.map(|h| h - s) }
    }

    pub fn meet(&self, o: &Window) -> Window {
        let lo = match (self.lo, o.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, o.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Window { lo, hi }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.map_or("-inf".to_string(), |l| l.to_string());
        let hi = self.hi.map_or("+inf".to_string(), |h| h.to_string());
        write!(f, "[{lo}, {hi}]")
    }
}

/// One term: basis twists and relation generators.
#[derive(Clone, Debug, Default)]
pub struct Slot {
    pub twists: Vec<i64>,
    pub rels: Vec<Vector>,
}

#[derive(Clone, Debug)]
pub struct FreeComplex {
    base: Arc<BaseRing>,
    lo: i64,
    slots: Vec<Slot>,
    diffs: Vec<Vec<Vector>>,
    pub window: Window,
}

/// Structured verdict of `cohomology_bounds`: exactness is not encoded as `inf > sup`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CohomBounds {
    Exact,
    Range { inf: i64, sup: i64 },
}

impl CohomBounds {
    pub fn inf(&self) -> Option<i64> {
        match self {
            CohomBounds::Exact => None,
            CohomBounds::Range { inf, .. } => Some(*inf),
        }
    }

    pub fn sup(&self) -> Option<i64> {
        match self {
            CohomBounds::Exact => None,
            CohomBounds::Range { sup, .. } => Some(*sup),
        }
    }

    pub fn amp(&self) -> Option<i64> {
        match self {
            CohomBounds::Exact => None,
            CohomBounds::Range { inf, sup } => Some(sup - inf),
        }
    }
}

/// `sum_c v[c] * cols[c]`, a vector of length `rank`.
pub fn apply(base: &BaseRing, cols: &[Vector], rank: usize, v: &[Poly]) -> Vector {
    let mut out = zero_vec(base, rank);
    for (c, coef) in v.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        for (k, e) in cols[c].iter().enumerate() {
            if !e.is_zero() {
                out[k] = out[k].add(&e.mul(coef));
            }
        }
    }
    out
}

pub fn neg_vec(v: &[Poly]) -> Vector {
    v.iter().map(|p| p.neg()).collect()
}

fn signed_vec(v: &[Poly], negative: bool) -> Vector {
    if negative {
        neg_vec(v)
    } else {
        v.to_vec()
    }
}

fn odd(i: i64) -> bool {
    i.rem_euclid(2) == 1
}

impl FreeComplex {
    /// Validated constructor: shapes, homogeneity, `d^2` into relations, relations a subcomplex.
    pub fn new(base: Arc<BaseRing>, lo: i64, slots: Vec<Slot>, diffs: Vec<Vec<Vector>>) -> Result<FreeComplex, ComplexError> {
        let c = Self::from_parts(base, lo, slots, diffs, Window::FULL);
        c.validate()?;
        Ok(c)
    }

    /// Unvalidated constructor for internal operations whose output is correct by construction.
    pub fn from_parts(base: Arc<BaseRing>, lo: i64, slots: Vec<Slot>, mut diffs: Vec<Vec<Vector>>, window: Window) -> FreeComplex {
        diffs.resize(slots.len(), Vec::new());
        for (k, s) in slots.iter().enumerate() {
            if diffs[k].is_empty() && !s.twists.is_empty() {
                let next = slots.get(k + 1).map_or(0, |t| t.twists.len());
                diffs[k] = vec![zero_vec(&base, next); s.twists.len()];
            }
        }
        let mut c = FreeComplex { base, lo, slots, diffs, window };
        c.trim();
        c
    }

    pub fn zero(base: Arc<BaseRing>) -> FreeComplex {
        FreeComplex { base, lo: 0, slots: Vec::new(), diffs: Vec::new(), window: Window::FULL }
    }

    /// The base ring as a complex concentrated in degree 0.
    pub fn ring(base: Arc<BaseRing>) -> FreeComplex {
        let s = Slot { twists: vec![0], rels: Vec::new() };
        Self::from_parts(base, 0, vec![s], Vec::new(), Window::FULL)
    }

    fn trim(&mut self) {
        while self.slots.last().is_some_and(|s| s.twists.is_empty()) {
            self.slots.pop();
            self.diffs.pop();
        }
        while self.slots.first().is_some_and(|s| s.twists.is_empty()) {
            self.slots.remove(0);
            self.diffs.remove(0);
            self.lo += 1;
        }
        if self.slots.is_empty() {
            self.lo = 0;
        }
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        for i in self.lo..=self.hi() {
            let tw = self.twists(i);
            let next = self.twists(i + 1);
            for (c, col) in self.d(i).iter().enumerate() {
                if col.len() != next.len() {
                    return Err(ComplexError::Shape { degree: i, col: c, msg: format!("expected {} entries, found {}", next.len(), col.len()) });
                }
                match vec_degree(next, col) {
                    Ok(None) => {}
                    Ok(Some(d)) if d == tw[c] => {}
                    _ => return Err(ComplexError::Twist { degree: i, col: c }),
                }
            }
            for (c, r) in self.rels(i).iter().enumerate() {
                if r.len() != tw.len() || vec_degree(tw, r).is_err() {
                    return Err(ComplexError::Shape { degree: i, col: c, msg: "malformed relation".into() });
                }
            }
            let target = span_basis(&self.base, self.twists(i + 2), self.rels(i + 2));
            for (c, col) in self.d(i).iter().enumerate() {
                let dd = self.apply_d(i + 1, col);
                if !target.contains(&ModVec::from_dense(target.ctx(), &dd)) {
                    let witness = dd.iter().enumerate().find(|(_, p)| !p.is_zero()).map(|(k, p)| format!("column {c}, row {k}: {p}")).unwrap_or_default();
                    return Err(ComplexError::SquareNonzero { degree: i + 1, witness });
                }
            }
            let rel_next = span_basis(&self.base, next, self.rels(i + 1));
            for r in self.rels(i) {
                let dr = self.apply_d(i, r);
                if !rel_next.contains(&ModVec::from_dense(rel_next.ctx(), &dr)) {
                    return Err(ComplexError::RelationsNotSubcomplex { degree: i });
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<BaseRing> {
        &self.base
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top nonzero degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.slots.len() as i64 - 1
    }

    pub fn is_zero_complex(&self) -> bool {
        self.slots.is_empty()
    }

    fn slot(&self, i: i64) -> Option<&Slot> {
        if i < self.lo {
            return None;
        }
        self.slots.get((i - self.lo) as usize)
    }

    pub fn rank(&self, i: i64) -> usize {
        self.slot(i).map_or(0, |s| s.twists.len())
    }

    pub fn twists(&self, i: i64) -> &[i64] {
        self.slot(i).map_or(&[], |s| &s.twists)
    }

    pub fn rels(&self, i: i64) -> &[Vector] {
        self.slot(i).map_or(&[], |s| &s.rels)
    }

    pub fn d(&self, i: i64) -> &[Vector] {
        if i < self.lo {
            return &[];
        }
        self.diffs.get((i - self.lo) as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn has_relations(&self) -> bool {
        self.slots.iter().any(|s| !s.rels.is_empty())
    }

    pub fn total_rank(&self) -> usize {
        self.slots.iter().map(|s| s.twists.len()).sum()
    }

    /// `d^i(v)` for `v` in `C^i`.
    pub fn apply_d(&self, i: i64, v: &[Poly]) -> Vector {
        apply(&self.base, self.d(i), self.rank(i + 1), v)
    }

    pub fn with_window(mut self, w: Window) -> FreeComplex {
        self.window = w;
        self
    }

    /// `(Σ^s C)^i = C^{i+s}`, differential multiplied by `(-1)^s`, so `H^i(Σ^s C) = H^{i+s}(C)`.
    pub fn shift(&self, s: i64) -> FreeComplex {
        let diffs = self.diffs.iter().map(|cols| cols.iter().map(|c| signed_vec(c, odd(s))).collect()).collect();
        FreeComplex { base: self.base.clone(), lo: self.lo - s, slots: self.slots.clone(), diffs, window: self.window.shift(s) }
    }

    /// Direct sum, with the basis of `self` first in each degree.
    pub fn direct_sum(&self, o: &FreeComplex) -> FreeComplex {
        if self.is_zero_complex() {
            return o.clone();
        }
        if o.is_zero_complex() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        let mut slots = Vec::new();
        let mut diffs = Vec::new();
        for i in lo..=hi {
            let (a, b) = (self.rank(i), o.rank(i));
            let mut tw = self.twists(i).to_vec();
            tw.extend_from_slice(o.twists(i));
            let mut rels: Vec<Vector> = self.rels(i).iter().map(|r| pad(&self.base, r, 0, a + b)).collect();
            rels.extend(o.rels(i).iter().map(|r| pad(&self.base, r, a, a + b)));
            slots.push(Slot { twists: tw, rels });
            let (a1, b1) = (self.rank(i + 1), o.rank(i + 1));
            let mut cols: Vec<Vector> = self.d(i).iter().map(|c| pad(&self.base, c, 0, a1 + b1)).collect();
            cols.extend(o.d(i).iter().map(|c| pad(&self.base, c, a1, a1 + b1)));
            diffs.push(cols);
        }
        Self::from_parts(self.base.clone(), lo, slots, diffs, self.window.meet(&o.window))
    }

    /// Total complex of `C ⊗_P D` with `d(c ⊗ e) = dc ⊗ e + (-1)^{|c|} c ⊗ de`.
    pub fn tensor(&self, o: &FreeComplex) -> FreeComplex {
        let base = &self.base;
        if self.is_zero_complex() || o.is_zero_complex() {
            return FreeComplex::zero(base.clone());
        }
        let lo = self.lo + o.lo;
        let hi = self.hi() + o.hi();
        // index of (i, c, e) inside degree n = i + j
        let offset = |n: i64, i: i64| -> usize { (self.lo..i).map(|k| self.rank(k) * o.rank(n - k)).sum() };
        let rank = |n: i64| -> usize { (self.lo..=self.hi()).map(|k| self.rank(k) * o.rank(n - k)).sum() };
        let mut slots = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let rn = rank(n);
            let rn1 = rank(n + 1);
            let mut tw = Vec::with_capacity(rn);
            let mut rels = Vec::new();
            let mut cols = Vec::with_capacity(rn);
            for i in self.lo..=self.hi() {
                let j = n - i;
                let (ri, rj) = (self.rank(i), o.rank(j));
                if ri == 0 || rj == 0 {
                    continue;
                }
                let off = offset(n, i);
                for c in 0..ri {
                    for e in 0..rj {
                        tw.push(self.twists(i)[c] + o.twists(j)[e]);
                    }
                }
                for r in self.rels(i) {
                    for e in 0..rj {
                        let mut v = zero_vec(base, rn);
                        for c in 0..ri {
                            v[off + c * rj + e] = r[c].clone();
                        }
                        rels.push(v);
                    }
                }
                for r in o.rels(j) {
                    for c in 0..ri {
                        let mut v = zero_vec(base, rn);
                        for e in 0..rj {
                            v[off + c * rj + e] = r[e].clone();
                        }
                        rels.push(v);
                    }
                }
                for c in 0..ri {
                    for e in 0..rj {
                        let mut v = zero_vec(base, rn1);
                        let dc = &self.d(i)[c];
                        let (ri1, off1) = (self.rank(i + 1), offset(n + 1, i + 1));
                        for c2 in 0..ri1 {
                            if !dc[c2].is_zero() {
                                let k = off1 + c2 * rj + e;
                                v[k] = v[k].add(&dc[c2]);
                            }
                        }
                        let de = &o.d(j)[e];
                        let (rj1, off2) = (o.rank(j + 1), offset(n + 1, i));
                        for e2 in 0..rj1 {
                            if !de[e2].is_zero() {
                                let k = off2 + c * rj1 + e2;
                                let t = if odd(i) { de[e2].neg() } else { de[e2].clone() };
                                v[k] = v[k].add(&t);
                            }
                        }
                        cols.push(v);
                    }
                }
            }
            slots.push(Slot { twists: tw, rels });
            diffs.push(cols);
        }
        Self::from_parts(base.clone(), lo, slots, diffs, Window::FULL)
    }

    /// `Hom_P(C, D)` with `d(f) = d∘f - (-1)^{|f|} f∘d`. `C` must have no relations.
    ///
    /// Basis of degree `n`: pairs `(c, e)` with `c` in `C^i`, `e` in `D^{i+n}`, ordered by `i`,
    /// then `c`, then `e`; the pair is the map `e_c ↦ e_e` of internal degree `tw(e) - tw(c)`.
    pub fn hom(&self, o: &FreeComplex) -> Result<FreeComplex, ComplexError> {
        if self.has_relations() {
            return Err(ComplexError::NotFree);
        }
        let base = &self.base;
        if self.is_zero_complex() || o.is_zero_complex() {
            return Ok(FreeComplex::zero(base.clone()));
        }
        let lo = o.lo - self.hi();
        let hi = o.hi() - self.lo;
        let offset = |n: i64, i: i64| -> usize { (self.lo..i).map(|k| self.rank(k) * o.rank(k + n)).sum() };
        let rank = |n: i64| -> usize { (self.lo..=self.hi()).map(|k| self.rank(k) * o.rank(k + n)).sum() };
        let mut slots = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let rn = rank(n);
            let rn1 = rank(n + 1);
            let mut tw = Vec::with_capacity(rn);
            let mut rels = Vec::new();
            let mut cols = Vec::with_capacity(rn);
            for i in self.lo..=self.hi() {
                let j = i + n;
                let (ri, rj) = (self.rank(i), o.rank(j));
                if ri == 0 || rj == 0 {
                    continue;
                }
                let off = offset(n, i);
                for c in 0..ri {
                    for e in 0..rj {
                        tw.push(o.twists(j)[e] - self.twists(i)[c]);
                    }
                    for r in o.rels(j) {
                        let mut v = zero_vec(base, rn);
                        for e in 0..rj {
                            v[off + c * rj + e] = r[e].clone();
                        }
                        rels.push(v);
                    }
                }
                for c in 0..ri {
                    for e in 0..rj {
                        let mut v = zero_vec(base, rn1);
                        // d_D ∘ φ: (c, e') with coefficient (d_D)_{e', e}
                        let de = &o.d(j)[e];
                        let (rj1, off1) = (o.rank(j + 1), offset(n + 1, i));
                        for e2 in 0..rj1 {
                            if !de[e2].is_zero() {
                                let k = off1 + c * rj1 + e2;
                                v[k] = v[k].add(&de[e2]);
                            }
                        }
                        // -(-1)^n φ ∘ d_C: (c'', e) with coefficient (d_C)_{c, c''}, c'' in C^{i-1}
                        let (ri0, off0) = (self.rank(i - 1), offset(n + 1, i - 1));
                        for c2 in 0..ri0 {
                            let coef = &self.d(i - 1)[c2][c];
                            if !coef.is_zero() {
                                let k = off0 + c2 * rj + e;
                                let t = if odd(n) { coef.clone() } else { coef.neg() };
                                v[k] = v[k].add(&t);
                            }
                        }
                        cols.push(v);
                    }
                }
            }
            slots.push(Slot { twists: tw, rels });
            diffs.push(cols);
        }
        Ok(Self::from_parts(base.clone(), lo, slots, diffs, Window::FULL))
    }

    /// `Hom_P(C, P)`.
    pub fn dual(&self) -> Result<FreeComplex, ComplexError> {
        self.hom(&FreeComplex::ring(self.base.clone()))
    }

    /// Cycles of degree `i` (generators, as vectors of `C^i`), modulo relations.
    pub fn cycles(&self, i: i64) -> Vec<Vector> {
        let tw = self.twists(i);
        if tw.is_empty() {
            return Vec::new();
        }
        let next = self.twists(i + 1);
        if next.is_empty() {
            return (0..tw.len()).map(|c| crate::algebra::module::unit_vec(&self.base, tw.len(), c)).collect();
        }
        kernel(&self.base, next, self.d(i), tw, self.rels(i + 1))
    }

    /// Boundaries of degree `i` plus relations.
    pub fn boundaries(&self, i: i64) -> Vec<Vector> {
        let mut b: Vec<Vector> = self.d(i - 1).iter().filter(|v| !is_zero_vec(v)).cloned().collect();
        b.extend(self.rels(i).iter().cloned());
        b
    }

    /// Presentation of `H^i` with cycle representatives.
    pub fn cohomology_at(&self, i: i64) -> Result<Subquotient, ComplexError> {
        self.certify(i)?;
        self.cohomology_unchecked(i)
    }

    pub fn cohomology_unchecked(&self, i: i64) -> Result<Subquotient, ComplexError> {
        let z = self.cycles(i);
        let b: Vec<Vector> = self.d(i - 1).iter().filter(|v| !is_zero_vec(v)).cloned().collect();
        Ok(subquotient(&self.base, self.twists(i), &z, &b, self.rels(i))?)
    }

    /// Exact vanishing test for `H^i`.
    pub fn cohomology_vanishes(&self, i: i64) -> Result<bool, ComplexError> {
        if self.rank(i) == 0 {
            return Ok(true);
        }
        let z = self.cycles(i);
        if z.is_empty() {
            return Ok(true);
        }
        let gb = span_basis(&self.base, self.twists(i), &self.boundaries(i));
        Ok(z.iter().all(|v| gb.contains(&ModVec::from_dense(gb.ctx(), v))))
    }

    pub fn certify(&self, i: i64) -> Result<(), ComplexError> {
        if self.window.contains(i) {
            Ok(())
        } else {
            Err(ComplexError::Uncertified { degree: i, window: self.window })
        }
    }

    /// Degrees in `[lo, hi]` with nonzero cohomology, ascending.
    pub fn support(&self) -> Result<Vec<i64>, ComplexError> {
        let mut out = Vec::new();
        for i in self.lo..=self.hi() {
            if !self.cohomology_vanishes(i)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `(inf, sup)` of cohomology, or `Exact`. Needs a full window.
    pub fn cohomology_bounds(&self) -> Result<CohomBounds, ComplexError> {
        if let Some(lo) = self.window.lo {
            if lo > self.lo {
                return Err(ComplexError::Uncertified { degree: self.lo, window: self.window });
            }
        }
        if let Some(hi) = self.window.hi {
            if hi < self.hi() {
                return Err(ComplexError::Uncertified { degree: self.hi(), window: self.window });
            }
        }
        let s = self.support()?;
        Ok(match (s.first(), s.last()) {
            (Some(&inf), Some(&sup)) => CohomBounds::Range { inf, sup },
            _ => CohomBounds::Exact,
        })
    }

    /// Graded pieces `dim H^i_t` for `t` in `ts`.
    pub fn cohomology_hilbert(&self, i: i64, ts: std::ops::RangeInclusive<i64>) -> Result<Vec<usize>, ComplexError> {
        let h = self.cohomology_at(i)?;
        let gb = h.module.basis();
        Ok(ts.map(|t| crate::algebra::module::quotient_dimension(&gb, t)).collect())
    }

    /// Human-readable dump used in reports and serialization.
    pub fn describe(&self) -> Vec<(i64, Vec<i64>, Vec<Vec<String>>)> {
        (self.lo..=self.hi())
            .map(|i| {
                let cols = self.d(i).iter().map(|c| c.iter().map(|p| p.to_string()).collect()).collect();
                (i, self.twists(i).to_vec(), cols)
            })
            .collect()
    }

    /// `C^{>n}`: the terms above `n`, with `d^n(C^n)` added to the relations in degree `n + 1`.
    pub fn quotient_above(&self, n: i64) -> FreeComplex {
        if self.is_zero_complex() || n < self.lo {
            return self.clone();
        }
        if n >= self.hi() {
            return FreeComplex::zero(self.base.clone()).with_window(self.window);
        }
        let k = (n + 1 - self.lo) as usize;
        let mut slots = self.slots[k..].to_vec();
        slots[0].rels.extend(self.d(n).iter().filter(|c| !is_zero_vec(c)).cloned());
        let diffs = self.diffs[k..].to_vec();
        FreeComplex::from_parts(self.base.clone(), n + 1, slots, diffs, self.window)
    }

    /// The projection `C → C^{>n}`.
    pub fn projection_above(&self, n: i64) -> ComplexMap {
        let t = self.quotient_above(n);
        let maps = (self.lo..=self.hi())
            .map(|i| {
                let r = self.rank(i);
                if i > n {
                    (0..r).map(|c| crate::algebra::module::unit_vec(&self.base, r, c)).collect()
                } else {
                    vec![Vec::new(); r]
                }
            })
            .collect();
        ComplexMap::from_parts(self.clone(), t, maps)
    }

    /// The truncation as a complex with relations. `C^{≤n}` is modelled by the
    /// desuspended cone of `C → C^{>n}`.
    pub fn truncate_presented(&self, n: i64, side: Side) -> FreeComplex {
        match side {
            Side::Above => self.quotient_above(n),
            Side::AtMost if self.is_zero_complex() || n >= self.hi() => self.clone(),
            Side::AtMost if n < self.lo => FreeComplex::zero(self.base.clone()).with_window(self.window),
            Side::AtMost => self.projection_above(n).cone().shift(-1),
        }
    }
}

/// Which half a smart truncation keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    AtMost,
    Above,
}

/// `C^{≤n}` or `C^{>n}` as a free model over the base.
/// Over an Artinian base the model is cut `extra` degrees below the lowest term.
pub fn smart_truncate(c: &FreeComplex, n: i64, side: Side, extra: i64) -> Result<FreeComplex, ComplexError> {
    let p = c.truncate_presented(n, side);
    if !p.has_relations() {
        return Ok(p);
    }
    match crate::dg::resolve::base_resolution(&p, extra) {
        Ok((model, _)) => Ok(model),
        Err(crate::dg::DgError::Complex(e)) => Err(e),
        Err(e) => Err(ComplexError::Resolution(e.to_string())),
    }
}

/// Embed `v` at `offset` inside a zero vector of length `len`.
pub fn pad(base: &BaseRing, v: &[Poly], offset: usize, len: usize) -> Vector {
    let mut out = zero_vec(base, len);
    out[offset..offset + v.len()].clone_from_slice(v);
    out
}

/// Degreewise matrices `f^i: C^i → D^i` (columns), commuting with differentials.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    pub source: FreeComplex,
    pub target: FreeComplex,
    maps: Vec<Vec<Vector>>,
}

impl ComplexMap {
    /// `maps[k]` is the component in degree `source.lo() + k`.
    pub fn new(source: FreeComplex, target: FreeComplex, maps: Vec<Vec<Vector>>) -> Result<ComplexMap, ComplexError> {
        let f = ComplexMap { source, target, maps };
        f.validate()?;
        Ok(f)
    }

    pub fn from_parts(source: FreeComplex, target: FreeComplex, maps: Vec<Vec<Vector>>) -> ComplexMap {
        ComplexMap { source, target, maps }
    }

    pub fn identity(c: &FreeComplex) -> ComplexMap {
        let maps = (c.lo()..=c.hi())
            .map(|i| (0..c.rank(i)).map(|k| crate::algebra::module::unit_vec(c.base(), c.rank(i), k)).collect())
            .collect();
        ComplexMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> ComplexMap {
        let maps = (source.lo()..=source.hi())
            .map(|i| vec![zero_vec(source.base(), target.rank(i)); source.rank(i)])
            .collect();
        ComplexMap { source: source.clone(), target: target.clone(), maps }
    }

    pub fn at(&self, i: i64) -> &[Vector] {
        if i < self.source.lo() {
            return &[];
        }
        self.maps.get((i - self.source.lo()) as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn apply(&self, i: i64, v: &[Poly]) -> Vector {
        apply(self.source.base(), self.at(i), self.target.rank(i), v)
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        let (s, t) = (&self.source, &self.target);
        for i in s.lo()..=s.hi() {
            if self.at(i).len() != s.rank(i) {
                return Err(ComplexError::Shape { degree: i, col: 0, msg: "map has the wrong number of columns".into() });
            }
            let gb = span_basis(t.base(), t.twists(i + 1), t.rels(i + 1));
            for c in 0..s.rank(i) {
                let e = crate::algebra::module::unit_vec(s.base(), s.rank(i), c);
                let lhs = t.apply_d(i, &self.apply(i, &e));
                let rhs = self.apply(i + 1, &s.apply_d(i, &e));
                let diff: Vector = lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect();
                if !gb.contains(&ModVec::from_dense(gb.ctx(), &diff)) {
                    return Err(ComplexError::NotChainMap { degree: i });
                }
            }
            let gr = span_basis(t.base(), t.twists(i), t.rels(i));
            for r in s.rels(i) {
                if !gr.contains(&ModVec::from_dense(gr.ctx(), &self.apply(i, r))) {
                    return Err(ComplexError::NotChainMap { degree: i });
                }
            }
        }
        Ok(())
    }

    /// `Cone(f)^i = D^i ⊕ C^{i+1}`, `d(y, x) = (d y + f x, -d x)`.
    pub fn cone(&self) -> FreeComplex {
        let (s, t) = (&self.source, &self.target);
        let base = s.base();
        if s.is_zero_complex() {
            return t.clone();
        }
        let lo = if t.is_zero_complex() { s.lo() - 1 } else { t.lo().min(s.lo() - 1) };
        let hi = if t.is_zero_complex() { s.hi() - 1 } else { t.hi().max(s.hi() - 1) };
        let mut slots = Vec::new();
        let mut diffs = Vec::new();
        for i in lo..=hi {
            let (a, b) = (t.rank(i), s.rank(i + 1));
            let (a1, b1) = (t.rank(i + 1), s.rank(i + 2));
            let mut tw = t.twists(i).to_vec();
            tw.extend_from_slice(s.twists(i + 1));
            let mut rels: Vec<Vector> = t.rels(i).iter().map(|r| pad(base, r, 0, a + b)).collect();
            rels.extend(s.rels(i + 1).iter().map(|r| pad(base, r, a, a + b)));
            let mut cols: Vec<Vector> = t.d(i).iter().map(|c| pad(base, c, 0, a1 + b1)).collect();
            for c in 0..b {
                let fx = &self.at(i + 1)[c];
                let dx = &s.d(i + 1)[c];
                let mut v = pad(base, fx, 0, a1 + b1);
                for (k, p) in dx.iter().enumerate() {
                    v[a1 + k] = p.neg();
                }
                cols.push(v);
            }
            slots.push(Slot { twists: tw, rels });
            diffs.push(cols);
        }
        FreeComplex::from_parts(base.clone(), lo, slots, diffs, t.window.meet(&s.window.shift(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, MonoOrder, PolyRing};

    fn base(vars: &[&str]) -> Arc<BaseRing> {
        BaseRing::polynomial(PolyRing::new(Field::Rational, vars.iter().map(|v| (v.to_string(), 1)).collect(), MonoOrder::GRevLex))
    }

    /// `A --x--> A` in degrees -1, 0.
    fn koszul_x(b: &Arc<BaseRing>) -> FreeComplex {
        let x = b.var(0);
        FreeComplex::new(
            b.clone(),
            -1,
            vec![Slot { twists: vec![1], rels: vec![] }, Slot { twists: vec![0], rels: vec![] }],
            vec![vec![vec![x]], vec![vec![]]],
        )
        .unwrap()
    }

    #[test]
    fn build_rejects_bad_data() {
        let b = base(&["x", "y"]);
        let (x, y) = (b.var(0), b.var(1));
        let slot = |t: i64| Slot { twists: vec![t], rels: vec![] };
        let bad = FreeComplex::new(b.clone(), -1, vec![slot(2), slot(1), slot(0)], vec![vec![vec![x.clone()]], vec![vec![y.clone()]], vec![]]);
        assert!(matches!(bad, Err(ComplexError::SquareNonzero { degree: 0, .. })));
        let inhom = FreeComplex::new(b.clone(), -1, vec![slot(1), slot(0)], vec![vec![vec![x.add(&b.one())]], vec![]]);
        assert!(matches!(inhom, Err(ComplexError::Twist { .. })));
    }

    #[test]
    fn koszul_cohomology_and_bounds() {
        let b = base(&["x"]);
        let k = koszul_x(&b);
        assert!(k.cohomology_vanishes(-1).unwrap());
        let h0 = k.cohomology_at(0).unwrap().module;
        assert_eq!(h0.rank(), 1);
        assert_eq!(h0.hilbert_function(0), 1);
        assert_eq!(h0.hilbert_function(1), 0);
        assert_eq!(k.cohomology_bounds().unwrap(), CohomBounds::Range { inf: 0, sup: 0 });
        assert_eq!(k.shift(1).cohomology_bounds().unwrap(), CohomBounds::Range { inf: -1, sup: -1 });
        let cone = ComplexMap::identity(&k).cone();
        assert_eq!(cone.cohomology_bounds().unwrap(), CohomBounds::Exact);
    }

    #[test]
    fn hom_into_ring() {
        let b = base(&["x"]);
        let k = koszul_x(&b);
        let h = k.dual().unwrap();
        assert!(h.cohomology_vanishes(0).unwrap());
        let h1 = h.cohomology_at(1).unwrap().module;
        assert_eq!(h1.hilbert_function(-1), 1);
        assert_eq!(h1.hilbert_function(0), 0);
        let bidual = h.dual().unwrap();
        assert_eq!(bidual.cohomology_bounds().unwrap(), CohomBounds::Range { inf: 0, sup: 0 });
    }

    #[test]
    fn tensor_of_koszul_is_koszul_on_two() {
        let b = base(&["x", "y"]);
        let k = koszul_x(&b);
        let kk = k.tensor(&k);
        kk.validate().unwrap();
        assert_eq!((kk.rank(-2), kk.rank(-1), kk.rank(0)), (1, 2, 1));
        let s = kk.support().unwrap();
        assert_eq!(s, vec![-1, 0]);
    }
}
