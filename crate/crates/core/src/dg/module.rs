//! DG-modules: an underlying complex of base modules plus an action table.

use std::sync::Arc;

use crate::algebra::module::{span_basis, unit_vec, zero_vec, Vector};
use crate::algebra::{ModVec, Poly, PresentedModule};
use crate::algebra::ideal::Ideal;
use crate::complexes::{apply, pad, ComplexMap, FreeComplex, Side, Slot, Window};

use super::algebra::DGAlgebra;
use super::DgError;

#[derive(Clone, Debug)]
pub struct DGModule {
    pub alg: Arc<DGAlgebra>,
    pub cx: FreeComplex,
    /// `act[a][i - lo][m]`: image of basis element `m` of `M^i` under algebra basis element `a`.
    act: Vec<Vec<Vec<Vector>>>,
}

fn odd(i: i64) -> bool {
    i.rem_euclid(2) == 1
}

impl DGModule {
    pub fn new(alg: Arc<DGAlgebra>, cx: FreeComplex, act: Vec<Vec<Vec<Vector>>>) -> Result<DGModule, DgError> {
        let m = Self::from_parts(alg, cx, act);
        m.validate()?;
        Ok(m)
    }

    pub fn from_parts(alg: Arc<DGAlgebra>, cx: FreeComplex, act: Vec<Vec<Vec<Vector>>>) -> DGModule {
        DGModule { alg, cx, act }
    }

    /// Builds the table from a closure giving `a * e_m` for `m` in `M^i`.
    pub fn from_action(alg: Arc<DGAlgebra>, cx: FreeComplex, f: impl Fn(usize, i64, usize) -> Vector) -> DGModule {
        let mut act = Vec::with_capacity(alg.dim());
        for a in 0..alg.dim() {
            let mut per = Vec::new();
            if a > 0 {
                for i in cx.lo()..=cx.hi() {
                    per.push((0..cx.rank(i)).map(|m| f(a, i, m)).collect());
                }
            }
            act.push(per);
        }
        DGModule { alg, cx, act }
    }

    /// `R` as a module over itself.
    pub fn ring(alg: &Arc<DGAlgebra>) -> DGModule {
        let cx = alg.complex();
        let a2 = alg.clone();
        DGModule::from_action(alg.clone(), cx, move |a, i, m| {
            let b = a2.in_degree(i)[m];
            let target = a2.in_degree(i + a2.deg(a));
            let mut v = zero_vec(&a2.base, target.len());
            for (c, p) in a2.mul(a, b) {
                v[a2.pos(*c)] = p.clone();
            }
            v
        })
    }

    /// An `H^0(R)`-module in degree 0; the negative part of `R` acts by zero.
    pub fn from_h0_module(alg: &Arc<DGAlgebra>, m: &PresentedModule) -> DGModule {
        let g = m.rank();
        let mut rels: Vec<Vector> = m.relations.clone();
        for f in &alg.h0_ideal().gens {
            for c in 0..g {
                let mut v = zero_vec(&alg.base, g);
                v[c] = f.clone();
                rels.push(v);
            }
        }
        let cx = FreeComplex::from_parts(alg.base.clone(), 0, vec![Slot { twists: m.gen_degrees.clone(), rels }], Vec::new(), Window::FULL);
        let a2 = alg.clone();
        DGModule::from_action(alg.clone(), cx, move |a, _, _| zero_vec(&a2.base, if a2.deg(a) == 0 { g } else { 0 }))
    }

    /// `H^0(R) / I`.
    pub fn quotient_ring(alg: &Arc<DGAlgebra>, i: &Ideal) -> DGModule {
        Self::from_h0_module(alg, &PresentedModule::cyclic(alg.base.clone(), &i.gens))
    }

    /// The residue field `k = H^0(R)/m`.
    pub fn residue_field(alg: &Arc<DGAlgebra>) -> DGModule {
        Self::quotient_ring(alg, &Ideal::maximal(alg.base.clone()))
    }

    pub fn base(&self) -> &Arc<crate::algebra::BaseRing> {
        &self.alg.base
    }

    pub fn window(&self) -> Window {
        self.cx.window
    }

    pub fn with_window(mut self, w: Window) -> DGModule {
        self.cx.window = w;
        self
    }

    /// `a * e_m` for basis element `m` of `M^i`.
    pub fn act_basis(&self, a: usize, i: i64, m: usize) -> Vector {
        if a == 0 {
            return unit_vec(self.base(), self.cx.rank(i), m);
        }
        let t = self.cx.rank(i + self.alg.deg(a));
        if i < self.cx.lo() || i > self.cx.hi() {
            return zero_vec(self.base(), t);
        }
        self.act[a][(i - self.cx.lo()) as usize][m].clone()
    }

    /// `a * v` for `v` in `M^i`.
    pub fn act(&self, a: usize, i: i64, v: &[Poly]) -> Vector {
        if a == 0 {
            return v.to_vec();
        }
        let t = self.cx.rank(i + self.alg.deg(a));
        if i < self.cx.lo() || i > self.cx.hi() {
            return zero_vec(self.base(), t);
        }
        apply(self.base(), &self.act[a][(i - self.cx.lo()) as usize], t, v)
    }

    /// `(Σ^s M)^i = M^{i+s}`; `a · σm = (-1)^{s|a|} σ(a m)`.
    pub fn shift(&self, s: i64) -> DGModule {
        let cx = self.cx.shift(s);
        let act = self
            .act
            .iter()
            .enumerate()
            .map(|(a, per)| {
                let flip = a > 0 && odd(s * self.alg.deg(a));
                per.iter().map(|cols| cols.iter().map(|c| if flip { c.iter().map(|p| p.neg()).collect() } else { c.clone() }).collect()).collect()
            })
            .collect();
        DGModule { alg: self.alg.clone(), cx, act }
    }

    pub fn direct_sum(&self, o: &DGModule) -> DGModule {
        let cx = self.cx.direct_sum(&o.cx);
        let (s, t) = (self, o);
        DGModule::from_action(self.alg.clone(), cx.clone(), |a, i, m| {
            let j = i + s.alg.deg(a);
            let len = cx.rank(j);
            let ra = s.cx.rank(i);
            if m < ra {
                pad(s.base(), &s.act_basis(a, i, m), 0, len)
            } else {
                pad(s.base(), &t.act_basis(a, i, m - ra), s.cx.rank(j), len)
            }
        })
    }

    /// `K(r; M)`: the cone of multiplication by `r` in the base,
    /// `(y, x)` with `d(y, x) = (dy + r x, -dx)`, `a (y, x) = (a y, (-1)^{|a|} a x)`.
    pub fn koszul_on(&self, r: &Poly) -> DGModule {
        let base = self.base().clone();
        let rd = r.homogeneous_degree().unwrap_or(0);
        let (lo, hi) = (self.cx.lo() - 1, self.cx.hi());
        let mut slots = Vec::new();
        let mut diffs = Vec::new();
        for i in lo..=hi {
            let (a, b) = (self.cx.rank(i), self.cx.rank(i + 1));
            let (a1, b1) = (self.cx.rank(i + 1), self.cx.rank(i + 2));
            let mut tw = self.cx.twists(i).to_vec();
            tw.extend(self.cx.twists(i + 1).iter().map(|t| t + rd));
            let mut rels: Vec<Vector> = self.cx.rels(i).iter().map(|v| pad(&base, v, 0, a + b)).collect();
            rels.extend(self.cx.rels(i + 1).iter().map(|v| pad(&base, v, a, a + b)));
            let mut cols: Vec<Vector> = self.cx.d(i).iter().map(|c| pad(&base, c, 0, a1 + b1)).collect();
            for c in 0..b {
                let mut v = zero_vec(&base, a1 + b1);
                v[c] = r.clone();
                for (k, p) in self.cx.d(i + 1)[c].iter().enumerate() {
                    v[a1 + k] = p.neg();
                }
                cols.push(v);
            }
            slots.push(Slot { twists: tw, rels });
            diffs.push(cols);
        }
        let cx = FreeComplex::from_parts(base.clone(), lo, slots, diffs, self.cx.window.meet(&self.cx.window.shift(1)));
        let me = self.clone();
        DGModule::from_action(self.alg.clone(), cx.clone(), move |a, i, m| {
            let j = i + me.alg.deg(a);
            let len = cx.rank(j);
            let ra = me.cx.rank(i);
            if m < ra {
                pad(&base, &me.act_basis(a, i, m), 0, len)
            } else {
                let v = me.act_basis(a, i + 1, m - ra);
                let v: Vector = if odd(me.alg.deg(a)) { v.iter().map(|p| p.neg()).collect() } else { v };
                pad(&base, &v, me.cx.rank(j), len)
            }
        })
    }

    /// Cone of a DG-module map given by its chain map; `a (y, x) = (a y, (-1)^{|a|} a x)`.
    pub fn cone(f: &ComplexMap, source: &DGModule, target: &DGModule) -> DGModule {
        let cx = f.cone();
        let base = source.base().clone();
        let (s, t) = (source.clone(), target.clone());
        let c2 = cx.clone();
        DGModule::from_action(source.alg.clone(), cx, move |a, i, m| {
            let j = i + s.alg.deg(a);
            let len = c2.rank(j);
            let ra = t.cx.rank(i);
            if m < ra {
                pad(&base, &t.act_basis(a, i, m), 0, len)
            } else {
                let v = s.act_basis(a, i + 1, m - ra);
                let v: Vector = if odd(s.alg.deg(a)) { v.iter().map(|p| p.neg()).collect() } else { v };
                pad(&base, &v, t.cx.rank(j), len)
            }
        })
    }

    /// `M^{>n}`, a quotient DG-module.
    pub fn quotient_above(&self, n: i64) -> DGModule {
        let cx = self.cx.quotient_above(n);
        let me = self.clone();
        let c2 = cx.clone();
        DGModule::from_action(self.alg.clone(), cx, move |a, i, m| {
            if c2.rank(i + me.alg.deg(a)) == 0 {
                Vec::new()
            } else {
                me.act_basis(a, i, m)
            }
        })
    }

    /// Smart truncation. `M^{≤n}` is the desuspended cone of `M → M^{>n}`, which is
    /// quasi-isomorphic to the DG-submodule `... → M^{n-1} → Z^n`.
    pub fn truncate(&self, n: i64, side: Side) -> DGModule {
        match side {
            Side::Above => self.quotient_above(n),
            Side::AtMost if self.cx.is_zero_complex() || n >= self.cx.hi() => self.clone(),
            Side::AtMost if n < self.cx.lo() => DGModule::from_action(self.alg.clone(), FreeComplex::zero(self.base().clone()).with_window(self.window()), |_, _, _| Vec::new()),
            Side::AtMost => {
                let q = self.quotient_above(n);
                DGModule::cone(&self.cx.projection_above(n), self, &q).shift(-1)
            }
        }
    }

    /// Iterated Koszul construction on a list of base elements.
    pub fn koszul_dg_module(elems: &[Poly], m: &DGModule) -> DGModule {
        elems.iter().fold(m.clone(), |acc, r| acc.koszul_on(r))
    }

    /// Exact check of shapes, Leibniz, associativity and stability of relations.
    pub fn validate(&self) -> Result<(), DgError> {
        self.cx.validate()?;
        let alg = &self.alg;
        let base = self.base();
        for i in self.cx.lo()..=self.cx.hi() {
            for a in 1..alg.dim() {
                let j = i + alg.deg(a);
                let per = &self.act[a][(i - self.cx.lo()) as usize];
                if per.len() != self.cx.rank(i) || per.iter().any(|v| v.len() != self.cx.rank(j)) {
                    return Err(DgError::Invalid(format!("action table of {} has wrong shape in degree {i}", alg.basis[a].label)));
                }
            }
            for a in 0..alg.dim() {
                let da = alg.deg(a);
                let j = i + da;
                let gb_j = span_basis(base, self.cx.twists(j), self.cx.rels(j));
                let gb_j1 = span_basis(base, self.cx.twists(j + 1), self.cx.rels(j + 1));
                for r in self.cx.rels(i) {
                    if !gb_j.contains(&ModVec::from_dense(gb_j.ctx(), &self.act(a, i, r))) {
                        return Err(DgError::Invalid(format!("relations not stable under {}", alg.basis[a].label)));
                    }
                }
                for m in 0..self.cx.rank(i) {
                    let e = unit_vec(base, self.cx.rank(i), m);
                    // d(a m) = d(a) m + (-1)^{|a|} a d(m)
                    let lhs = self.cx.apply_d(j, &self.act(a, i, &e));
                    let mut rhs = zero_vec(base, self.cx.rank(j + 1));
                    for (b, p) in alg.d(a) {
                        let t = self.act(*b, i, &e);
                        for (k, q) in t.iter().enumerate() {
                            rhs[k] = rhs[k].add(&q.mul(p));
                        }
                    }
                    let t = self.act(a, i + 1, &self.cx.apply_d(i, &e));
                    for (k, q) in t.iter().enumerate() {
                        rhs[k] = if odd(da) { rhs[k].sub(q) } else { rhs[k].add(q) };
                    }
                    let diff: Vector = lhs.iter().zip(&rhs).map(|(x, y)| x.sub(y)).collect();
                    if !gb_j1.contains(&ModVec::from_dense(gb_j1.ctx(), &diff)) {
                        return Err(DgError::Leibniz(format!("action of {} on degree {i}", alg.basis[a].label)));
                    }
                    for b in 1..alg.dim() {
                        let k = j + alg.deg(b);
                        let gb_k = span_basis(base, self.cx.twists(k), self.cx.rels(k));
                        let lhs = self.act(b, j, &self.act(a, i, &e));
                        let mut rhs = zero_vec(base, self.cx.rank(k));
                        for (c, p) in alg.mul(b, a) {
                            let t = self.act(*c, i, &e);
                            for (q, v) in t.iter().enumerate() {
                                rhs[q] = rhs[q].add(&v.mul(p));
                            }
                        }
                        let diff: Vector = lhs.iter().zip(&rhs).map(|(x, y)| x.sub(y)).collect();
                        if !gb_k.contains(&ModVec::from_dense(gb_k.ctx(), &diff)) {
                            return Err(DgError::Invalid("action is not associative".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseRing, Field, MonoOrder, PolyRing};

    fn setup() -> (Arc<BaseRing>, Arc<DGAlgebra>) {
        let b = BaseRing::polynomial(PolyRing::new(Field::Rational, vec![("x".into(), 1), ("y".into(), 1)], MonoOrder::GRevLex));
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        (b, r)
    }

    #[test]
    fn ring_residue_and_shift_are_modules() {
        let (_, r) = setup();
        let m = DGModule::ring(&r);
        m.validate().unwrap();
        m.shift(1).validate().unwrap();
        m.shift(-3).validate().unwrap();
        let k = DGModule::residue_field(&r);
        k.validate().unwrap();
        assert_eq!(k.cx.support().unwrap(), vec![0]);
    }

    #[test]
    fn koszul_module_matches_koszul_ring() {
        let (b, r) = setup();
        let x = b.var(0);
        let base_ring = DGAlgebra::trivial(b.clone());
        let a = DGModule::ring(&base_ring);
        let kx = a.koszul_on(&x);
        kx.validate().unwrap();
        assert_eq!(kx.cx.support().unwrap(), vec![0]);
        let kxx = kx.koszul_on(&x);
        assert_eq!(kxx.cx.support().unwrap(), vec![-1, 0]);
        let kr = DGModule::ring(&r).koszul_on(&b.var(1));
        kr.validate().unwrap();
        assert_eq!(kr.cx.support().unwrap(), vec![-1, 0]);
    }

    #[test]
    fn smart_truncations_split_cohomology() {
        let (_, r) = setup();
        let m = DGModule::ring(&r);
        let le = m.truncate(-1, Side::AtMost);
        le.validate().unwrap();
        assert_eq!(le.cx.support().unwrap(), vec![-1]);
        assert_eq!(le.cx.cohomology_hilbert(-1, 0..=4).unwrap(), m.cx.cohomology_hilbert(-1, 0..=4).unwrap());
        let gt = m.truncate(-1, Side::Above);
        gt.validate().unwrap();
        assert_eq!(gt.cx.support().unwrap(), vec![0]);
        assert_eq!(gt.cx.cohomology_hilbert(0, 0..=4).unwrap(), m.cx.cohomology_hilbert(0, 0..=4).unwrap());
        assert_eq!(m.truncate(0, Side::AtMost).cx.support().unwrap(), vec![-1, 0]);
        let free = crate::complexes::smart_truncate(&m.cx, -1, Side::AtMost, 0).unwrap();
        assert!(!free.has_relations());
        assert_eq!(free.cohomology_hilbert(-1, 0..=4).unwrap(), vec![0, 1, 1, 1, 1]);
        assert!(free.cohomology_vanishes(0).unwrap());
    }
}
