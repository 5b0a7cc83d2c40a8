//! Dense degreewise linear algebra over an Artinian base, written without Gröbner bases.
//!
//! Every free term `A(-t_j)` is expanded in each internal degree into monomials of the
//! ambient ring, and the defining ideal and relations are spanned by monomial multiples.
//! Used to cross-check the sparse kernel on small instances.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::module::monomials_of_degree;
use crate::algebra::poly::{mono_mul, Mono};
use crate::algebra::{BaseRing, Field, Poly, Scalar};
use crate::complexes::FreeComplex;

/// Row echelon form kept incrementally; rows are reduced against earlier pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon { field, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Scalar]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a = a.sub(&c.mul(b));
                }
            }
        }
    }

    /// Adds a row; returns whether it was independent.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else { return false };
        let inv = v[p].inv();
        for c in v.iter_mut() {
            *c = c.mul(&inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    if !b.is_zero() {
                        *a = a.sub(&c.mul(b));
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|c| c.is_zero())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// Rank of a list of dense rows.
pub fn rank(field: &Field, rows: &[Vec<Scalar>]) -> usize {
    let mut e = Echelon::new(*field);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Monomial coordinates of `⊕_j S_{t - t_j}`.
struct Piece {
    offsets: Vec<usize>,
    index: Vec<HashMap<Mono, usize>>,
    monos: Vec<Vec<Mono>>,
    len: usize,
}

impl Piece {
    fn new(weights: &[u32], twists: &[i64], t: i64) -> Piece {
        let mut offsets = Vec::new();
        let mut index = Vec::new();
        let mut monos = Vec::new();
        let mut len = 0;
        for tw in twists {
            let ms = monomials_of_degree(weights, t - tw);
            offsets.push(len);
            len += ms.len();
            index.push(ms.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect());
            monos.push(ms);
        }
        Piece { offsets, index, monos, len }
    }

    /// Coordinates of `m · v`.
    fn embed(&self, field: &Field, m: &Mono, v: &[Poly]) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.len];
        for (j, p) in v.iter().enumerate() {
            for (mono, c) in p.terms() {
                let key = mono_mul(m, mono);
                if let Some(k) = self.index[j].get(&key) {
                    let slot = &mut out[self.offsets[j] + k];
                    *slot = slot.add(c);
                }
            }
        }
        out
    }
}

fn vector_degree(ring_weights: &[u32], v: &[Poly], twists: &[i64]) -> Option<i64> {
    v.iter().zip(twists).find(|(p, _)| !p.is_zero()).map(|(p, tw)| {
        let m = &p.terms()[0].0;
        m.iter().zip(ring_weights).map(|(e, w)| *e as i64 * *w as i64).sum::<i64>() + tw
    })
}

/// Dense model of a complex of graded modules over an Artinian base.
pub struct DenseOracle<'a> {
    c: &'a FreeComplex,
    base: &'a BaseRing,
    top: i64,
}

impl<'a> DenseOracle<'a> {
    pub fn new(c: &'a FreeComplex) -> Option<DenseOracle<'a>> {
        let base = c.base().as_ref();
        let top = artinian_top(base)?;
        Some(DenseOracle { c, base, top })
    }

    /// Largest internal degree with `A_t != 0`.
    pub fn top_degree(&self) -> i64 {
        self.top
    }

    fn weights(&self) -> &[u32] {
        &self.base.ring.weights
    }

    fn field(&self) -> Field {
        self.base.field()
    }

    /// Spanning rows of the submodule killed in `C^i_t`: ideal multiples and relations.
    fn killed(&self, i: i64, t: i64, piece: &Piece) -> Echelon {
        let field = self.field();
        let w = self.weights().to_vec();
        let tw = self.c.twists(i);
        let mut e = Echelon::new(field);
        for (j, twj) in tw.iter().enumerate() {
            for g in self.base.defining_ideal() {
                let gd = g.homogeneous_degree().unwrap_or(0);
                for m in monomials_of_degree(&w, t - twj - gd) {
                    let mut v = vec![Poly::zero(&self.base.ring); tw.len()];
                    v[j] = g.clone();
                    e.insert(&piece.embed(&field, &m, &v));
                }
            }
        }
        for r in self.c.rels(i) {
            if let Some(dg) = vector_degree(&w, r, tw) {
                for m in monomials_of_degree(&w, t - dg) {
                    e.insert(&piece.embed(&field, &m, r));
                }
            }
        }
        e
    }

    /// Internal degrees where `C^i` can be nonzero.
    fn degree_range(&self, i: i64) -> Option<(i64, i64)> {
        let tw = self.c.twists(i);
        let lo = *tw.iter().min()?;
        let hi = *tw.iter().max()?;
        Some((lo, hi + self.top))
    }

    /// `dim H^i(C)_t`.
    pub fn cohomology_dim(&self, i: i64, t: i64) -> usize {
        let field = self.field();
        let w = self.weights().to_vec();
        let p0 = Piece::new(&w, self.c.twists(i), t);
        if p0.len == 0 {
            return 0;
        }
        let k0 = self.killed(i, t, &p0);
        let quotient = p0.len - k0.rank();
        if quotient == 0 {
            return 0;
        }
        // rank of d^i on the quotient
        let p1 = Piece::new(&w, self.c.twists(i + 1), t);
        let out_rank = if p1.len == 0 {
            0
        } else {
            let mut k1 = self.killed(i + 1, t, &p1);
            let base_rank = k1.rank();
            let d = self.c.d(i);
            for (c, col) in d.iter().enumerate() {
                for m in &p0.monos[c] {
                    k1.insert(&p1.embed(&field, m, col));
                }
            }
            k1.rank() - base_rank
        };
        // rank of d^{i-1} into the quotient
        let pm = Piece::new(&w, self.c.twists(i - 1), t);
        let in_rank = if pm.len == 0 {
            0
        } else {
            let base_rank = k0.rank();
            let mut k = k0;
            for (c, col) in self.c.d(i - 1).iter().enumerate() {
                for m in &pm.monos[c] {
                    k.insert(&p0.embed(&field, m, col));
                }
            }
            k.rank() - base_rank
        };
        quotient - out_rank - in_rank
    }

    /// Nonzero `(t, dim H^i_t)`.
    pub fn hilbert(&self, i: i64) -> Vec<(i64, usize)> {
        let Some((lo, hi)) = self.degree_range(i) else { return Vec::new() };
        (lo..=hi).map(|t| (t, self.cohomology_dim(i, t))).filter(|(_, d)| *d > 0).collect()
    }

    /// Every nonzero cohomology degree with its Hilbert data.
    pub fn profile(&self) -> BTreeMap<i64, Vec<(i64, usize)>> {
        let mut out = BTreeMap::new();
        if self.c.is_zero_complex() {
            return out;
        }
        for i in self.c.lo()..=self.c.hi() {
            let h = self.hilbert(i);
            if !h.is_empty() {
                out.insert(i, h);
            }
        }
        out
    }

    /// Over an Artinian base every module is torsion, so depth is `inf H(C)`.
    pub fn depth(&self) -> Option<i64> {
        self.profile().keys().next().copied()
    }
}

/// `dim_k A_t` by dense elimination.
pub fn base_dimension(base: &BaseRing, t: i64) -> usize {
    let w = &base.ring.weights;
    let ms = monomials_of_degree(w, t);
    if ms.is_empty() {
        return 0;
    }
    let field = base.field();
    let piece = Piece::new(w, &[0], t);
    let mut e = Echelon::new(field);
    for g in base.defining_ideal() {
        let gd = g.homogeneous_degree().unwrap_or(0);
        for m in monomials_of_degree(w, t - gd) {
            e.insert(&piece.embed(&field, &m, std::slice::from_ref(g)));
        }
    }
    ms.len() - e.rank()
}

/// Largest `t` with `A_t != 0`, or `None` for a non-Artinian base.
pub fn artinian_top(base: &BaseRing) -> Option<i64> {
    if base.defining_ideal().is_empty() {
        return if base.nvars() == 0 { Some(0) } else { None };
    }
    let wmax = base.ring.weights.iter().copied().max().unwrap_or(1) as i64;
    let mut last = 0;
    let mut zeros = 0;
    let mut t = 0;
    // generated in degrees ≤ wmax: wmax consecutive zero pieces force all later ones to vanish
    while zeros < wmax {
        if base_dimension(base, t) == 0 {
            zeros += 1;
        } else {
            zeros = 0;
            last = t;
        }
        t += 1;
        if t > 10_000 {
            return None;
        }
    }
    Some(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MonoOrder, PolyRing};
    use crate::dg::algebra::DGAlgebra;

    #[test]
    fn echelon_rank() {
        let f = Field::Prime(5);
        let rows = vec![vec![f.from_i64(1), f.from_i64(2)], vec![f.from_i64(2), f.from_i64(4)], vec![f.from_i64(0), f.from_i64(3)]];
        assert_eq!(rank(&f, &rows), 2);
    }

    #[test]
    fn koszul_dims() {
        let ring = PolyRing::new(Field::Prime(5), vec![("x".into(), 1)], MonoOrder::GRevLex);
        let x = Poly::var(&ring, 0);
        let b = BaseRing::quotient(ring, vec![x.pow(3)]).unwrap();
        assert_eq!(artinian_top(&b), Some(2));
        let r = DGAlgebra::koszul(b.clone(), vec![b.var(0).pow(2)]).unwrap();
        let c = r.complex();
        let o = DenseOracle::new(&c).unwrap();
        let p = o.profile();
        assert_eq!(p[&0].iter().map(|x| x.1).sum::<usize>(), 2);
        assert_eq!(p[&-1].iter().map(|x| x.1).sum::<usize>(), 2);
        assert_eq!(o.depth(), Some(-1));
    }
}
