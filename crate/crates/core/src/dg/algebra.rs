//! Finite graded-commutative DG-algebras that are free over the base ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::ideal::Ideal;
use crate::algebra::module::{free_resolution, socle_dimension};
use crate::algebra::{BaseRing, Poly, PresentedModule};
use crate::complexes::{FreeComplex, Slot};

use super::DgError;

/// Sparse vector over the algebra basis (global indices).
pub type SVec = Vec<(usize, Poly)>;

#[derive(Clone, Debug)]
pub struct AlgBasis {
    pub deg: i64,
    pub twist: i64,
    pub label: String,
}

#[derive(Clone, Debug)]
pub enum Presentation {
    Base,
    Koszul(Vec<Poly>),
    SquareZero { module: PresentedModule, shift: i64 },
}

/// `R` with base-free basis, basis element `0` the unit, `R^0 = base * 1`.
#[derive(Clone, Debug)]
pub struct DGAlgebra {
    pub base: Arc<BaseRing>,
    pub basis: Vec<AlgBasis>,
    mult: Vec<Vec<SVec>>,
    diff: Vec<SVec>,
    pub presentation: Presentation,
    pub gorenstein: bool,
    by_degree: BTreeMap<i64, Vec<usize>>,
    pos: Vec<usize>,
}

pub fn sv_add(base: &BaseRing, acc: &mut SVec, k: usize, p: &Poly) {
    if p.is_zero() {
        return;
    }
    match acc.iter_mut().find(|(j, _)| *j == k) {
        Some((_, q)) => *q = base.reduce(&q.add(p)),
        None => acc.push((k, base.reduce(p))),
    }
    acc.retain(|(_, q)| !q.is_zero());
}

impl DGAlgebra {
    fn assemble(base: Arc<BaseRing>, basis: Vec<AlgBasis>, mult: Vec<Vec<SVec>>, diff: Vec<SVec>, presentation: Presentation, gorenstein: bool) -> DGAlgebra {
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut pos = vec![0; basis.len()];
        for (a, b) in basis.iter().enumerate() {
            let v = by_degree.entry(b.deg).or_default();
            pos[a] = v.len();
            v.push(a);
        }
        DGAlgebra { base, basis, mult, diff, presentation, gorenstein, by_degree, pos }
    }

    /// The base ring itself, concentrated in degree 0.
    pub fn trivial(base: Arc<BaseRing>) -> Arc<DGAlgebra> {
        let one = base.one();
        let basis = vec![AlgBasis { deg: 0, twist: 0, label: "1".into() }];
        let g = is_gorenstein_base(&base);
        Arc::new(Self::assemble(base, basis, vec![vec![vec![(0, one)]]], vec![Vec::new()], Presentation::Base, g))
    }

    /// Exterior algebra `K(A; f_1, ..., f_k)` with `d e_i = f_i`.
    pub fn koszul(base: Arc<BaseRing>, elems: Vec<Poly>) -> Result<Arc<DGAlgebra>, DgError> {
        let k = elems.len();
        if k > 12 {
            return Err(DgError::Invalid("too many Koszul elements".into()));
        }
        let mut twists = Vec::with_capacity(k);
        for (index, f) in elems.iter().enumerate() {
            let f = base.reduce(f);
            match f.homogeneous_degree() {
                Some(d) if d > 0 => twists.push(d),
                Some(_) => return Err(DgError::UnitElement { index }),
                None if f.is_zero() => twists.push(1),
                None => return Err(DgError::Invalid(format!("element {index} is not homogeneous"))),
            }
        }
        let elems: Vec<Poly> = elems.iter().map(|f| base.reduce(f)).collect();
        // basis: subsets ordered by size, then lexicographically by bitmask
        let mut subsets: Vec<u32> = (0..(1u32 << k)).collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        let index: BTreeMap<u32, usize> = subsets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let basis: Vec<AlgBasis> = subsets
            .iter()
            .map(|&s| {
                let members: Vec<usize> = (0..k).filter(|i| s & (1 << i) != 0).collect();
                let label = if members.is_empty() { "1".to_string() } else { members.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join("") };
                AlgBasis { deg: -(members.len() as i64), twist: members.iter().map(|&i| twists[i]).sum(), label }
            })
            .collect();
        let one = base.one();
        let n = subsets.len();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for (a, &s) in subsets.iter().enumerate() {
            for (b, &t) in subsets.iter().enumerate() {
                if s & t != 0 {
                    continue;
                }
                // sign: number of pairs (i in s, j in t) with i > j
                let mut inv = 0;
                for i in 0..k {
                    if s & (1 << i) != 0 {
                        inv += (t & ((1u32 << i) - 1)).count_ones();
                    }
                }
                let c = if inv % 2 == 1 { one.neg() } else { one.clone() };
                mult[a][b] = vec![(index[&(s | t)], c)];
            }
        }
        let mut diff = vec![Vec::new(); n];
        for (a, &s) in subsets.iter().enumerate() {
            let mut pos = 0;
            for i in 0..k {
                if s & (1 << i) != 0 {
                    let c = if pos % 2 == 1 { elems[i].neg() } else { elems[i].clone() };
                    sv_add(&base, &mut diff[a], index[&(s & !(1 << i))], &c);
                    pos += 1;
                }
            }
        }
        let gorenstein = is_gorenstein_base(&base);
        Ok(Arc::new(Self::assemble(base, basis, mult, diff, Presentation::Koszul(elems), gorenstein)))
    }

    /// `A ⋉ Σ^j M`: the module part is replaced by its minimal free resolution, placed in
    /// degrees `-j, -j-1, ...`, with all products of module elements zero.
    pub fn square_zero(base: Arc<BaseRing>, module: PresentedModule, j: i64) -> Result<Arc<DGAlgebra>, DgError> {
        if j <= 0 {
            return Err(DgError::ZeroShift);
        }
        let res = free_resolution(&module, 16)?;
        let one = base.one();
        let mut basis = vec![AlgBasis { deg: 0, twist: 0, label: "1".into() }];
        let mut offsets = Vec::new();
        for (p, (tw, _)) in res.iter().enumerate() {
            offsets.push(basis.len());
            for (c, &t) in tw.iter().enumerate() {
                basis.push(AlgBasis { deg: -j - p as i64, twist: t, label: format!("m{p}_{c}") });
            }
        }
        let n = basis.len();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            mult[0][a] = vec![(a, one.clone())];
            mult[a][0] = vec![(a, one.clone())];
        }
        let mut diff = vec![Vec::new(); n];
        for (p, (_, cols)) in res.iter().enumerate().skip(1) {
            for (c, col) in cols.iter().enumerate() {
                let a = offsets[p] + c;
                for (r, e) in col.iter().enumerate() {
                    sv_add(&base, &mut diff[a], offsets[p - 1] + r, e);
                }
            }
        }
        Ok(Arc::new(Self::assemble(base, basis, mult, diff, Presentation::SquareZero { module, shift: j }, false)))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn deg(&self, a: usize) -> i64 {
        self.basis[a].deg
    }

    pub fn mul(&self, a: usize, b: usize) -> &SVec {
        &self.mult[a][b]
    }

    pub fn d(&self, a: usize) -> &SVec {
        &self.diff[a]
    }

    /// Lowest degree with a basis element.
    pub fn bottom(&self) -> i64 {
        *self.by_degree.keys().next().unwrap()
    }

    pub fn in_degree(&self, i: i64) -> &[usize] {
        self.by_degree.get(&i).map_or(&[], |v| v.as_slice())
    }

    /// Index of basis element `a` within its degree.
    pub fn pos(&self, a: usize) -> usize {
        self.pos[a]
    }

    /// The underlying complex of base modules.
    pub fn complex(&self) -> FreeComplex {
        let lo = self.bottom();
        let mut slots = Vec::new();
        let mut diffs = Vec::new();
        for i in lo..=0 {
            let here = self.in_degree(i);
            let next_rank = self.in_degree(i + 1).len();
            slots.push(Slot { twists: here.iter().map(|&a| self.basis[a].twist).collect(), rels: Vec::new() });
            let cols = here
                .iter()
                .map(|&a| {
                    let mut v = vec![self.base.zero(); next_rank];
                    for (b, p) in &self.diff[a] {
                        v[self.pos[*b]] = p.clone();
                    }
                    v
                })
                .collect();
            diffs.push(cols);
        }
        FreeComplex::from_parts(self.base.clone(), lo, slots, diffs, Default::default())
    }

    /// The ideal `d(R^{-1})` of the base, so that `H^0(R) = base / it`.
    pub fn h0_ideal(&self) -> Ideal {
        let gens = self.in_degree(-1).iter().flat_map(|&a| self.diff[a].iter().map(|(_, p)| p.clone())).collect();
        Ideal::new(self.base.clone(), gens).expect("differential images are homogeneous")
    }

    /// `H^0(R)` as a cyclic module over the base.
    pub fn h0_presentation(&self) -> PresentedModule {
        PresentedModule::cyclic(self.base.clone(), &self.h0_ideal().gens)
    }

    /// Krull dimension of `H^0(R)`.
    pub fn dim_h0(&self) -> usize {
        self.h0_ideal().krull_dimension().unwrap_or(0)
    }

    /// Exact checks: unit, Leibniz, associativity, graded commutativity, `d^2 = 0`, `R^0 = base`.
    pub fn validate(&self) -> Result<(), DgError> {
        let base = &self.base;
        let n = self.dim();
        if self.in_degree(0) != [0] || self.basis[0].deg != 0 {
            return Err(DgError::Invalid("degree-0 part must be the base ring".into()));
        }
        if self.basis.iter().any(|b| b.deg > 0) {
            return Err(DgError::Invalid("positive degree basis element".into()));
        }
        let mul_sv = |x: &SVec, y: &SVec| -> SVec {
            let mut acc = Vec::new();
            for (a, p) in x {
                for (b, q) in y {
                    for (c, r) in &self.mult[*a][*b] {
                        sv_add(base, &mut acc, *c, &p.mul(q).mul(r));
                    }
                }
            }
            acc
        };
        let d_sv = |x: &SVec| -> SVec {
            let mut acc = Vec::new();
            for (a, p) in x {
                for (b, q) in &self.diff[*a] {
                    sv_add(base, &mut acc, *b, &p.mul(q));
                }
            }
            acc
        };
        let unit = |a: usize| -> SVec { vec![(a, base.one())] };
        let eq = |x: &SVec, y: &SVec| -> bool {
            let mut diff = x.clone();
            for (k, p) in y {
                sv_add(base, &mut diff, *k, &p.neg());
            }
            diff.is_empty()
        };
        for a in 0..n {
            if !d_sv(&self.diff[a]).is_empty() {
                return Err(DgError::Leibniz(format!("d^2 of {} is nonzero", self.basis[a].label)));
            }
            if !eq(&self.mult[0][a], &unit(a)) || !eq(&self.mult[a][0], &unit(a)) {
                return Err(DgError::Invalid("unit law fails".into()));
            }
            for b in 0..n {
                let (da, db) = (self.deg(a), self.deg(b));
                let ab = &self.mult[a][b];
                let mut ba: SVec = self.mult[b][a].clone();
                if (da * db).rem_euclid(2) == 1 {
                    ba = ba.into_iter().map(|(k, p)| (k, p.neg())).collect();
                }
                if !eq(ab, &ba) {
                    return Err(DgError::Invalid(format!("{} and {} do not graded-commute", self.basis[a].label, self.basis[b].label)));
                }
                if a == b && da.rem_euclid(2) == 1 && !ab.is_empty() {
                    return Err(DgError::Invalid(format!("odd square of {} is nonzero", self.basis[a].label)));
                }
                let lhs = d_sv(ab);
                let mut rhs = mul_sv(&self.diff[a], &unit(b));
                let t = mul_sv(&unit(a), &self.diff[b]);
                for (k, p) in t {
                    sv_add(base, &mut rhs, k, &if da.rem_euclid(2) == 1 { p.neg() } else { p });
                }
                if !eq(&lhs, &rhs) {
                    return Err(DgError::Leibniz(format!("on {} * {}", self.basis[a].label, self.basis[b].label)));
                }
                for c in 0..n {
                    let l = mul_sv(ab, &unit(c));
                    let r = mul_sv(&unit(a), &self.mult[b][c]);
                    if !eq(&l, &r) {
                        return Err(DgError::Invalid("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Polynomial bases are regular; an Artinian base is Gorenstein iff its socle is one-dimensional.
pub fn is_gorenstein_base(base: &Arc<BaseRing>) -> bool {
    !base.is_artinian() || socle_dimension(base) == 1
}
