//! Graded submodules and finitely presented modules over a base ring `P/J`.
//!
//! Module elements are dense vectors of polynomials indexed by the components of a
//! graded free module with the given twists; component `c` has generator degree `twists[c]`.
//! Every Gröbner computation appends `J * e_c` for all components.

use std::collections::HashMap;
use std::sync::Arc;

use super::groebner::{Groebner, LiftSolver, ModCtx, ModVec, Term};
use super::poly::{Mono, Poly};
use super::scalar::Scalar;
use super::{AlgebraError, BaseRing};

pub type Vector = Vec<Poly>;

/// Twisted degree of a homogeneous vector; `Ok(None)` for zero.
pub fn vec_degree(twists: &[i64], v: &[Poly]) -> Result<Option<i64>, AlgebraError> {
    let mut deg = None;
    for (c, p) in v.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = p
            .homogeneous_degree()
            .ok_or_else(|| AlgebraError::Inhomogeneous { index: c, poly: p.to_string() })?
            + twists[c];
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => return Err(AlgebraError::TwistMismatch { row: c, col: 0 }),
            _ => {}
        }
    }
    Ok(deg)
}

pub fn zero_vec(base: &BaseRing, n: usize) -> Vector {
    vec![base.zero(); n]
}

pub fn unit_vec(base: &BaseRing, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(base, n);
    v[i] = base.one();
    v
}

pub fn is_zero_vec(v: &[Poly]) -> bool {
    v.iter().all(|p| p.is_zero())
}

pub fn add_vec(a: &[Poly], b: &[Poly]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn scale_vec(p: &Poly, v: &[Poly]) -> Vector {
    v.iter().map(|x| x.mul(p)).collect()
}

pub fn reduce_vec(base: &BaseRing, v: &[Poly]) -> Vector {
    v.iter().map(|p| base.reduce(p)).collect()
}

/// The `J * e_c` generators of an ambient free module.
pub fn defining_multiples(base: &BaseRing, ctx: &ModCtx) -> Vec<ModVec> {
    let mut out = Vec::new();
    if !base.is_artinian() {
        return out;
    }
    for c in 0..ctx.rank() {
        for f in base.defining_ideal() {
            out.push(ModVec::from_poly(ctx, c, f));
        }
    }
    out
}

fn to_modvecs(ctx: &ModCtx, vs: &[Vector]) -> Vec<ModVec> {
    vs.iter().map(|v| ModVec::from_dense(ctx, v)).collect()
}

/// Gröbner basis (TOP order) of `span(gens) + J * P^r`.
pub fn span_basis(base: &BaseRing, twists: &[i64], gens: &[Vector]) -> Groebner {
    let ctx = ModCtx::new(base.ring.clone(), twists.to_vec(), false);
    let mut all = to_modvecs(&ctx, gens);
    all.extend(defining_multiples(base, &ctx));
    Groebner::new(ctx, all)
}

/// Generators of `{a : sum a_j cols_j in span(rels) + J}`, reduced modulo `J`.
pub fn kernel(base: &BaseRing, target_twists: &[i64], cols: &[Vector], col_degrees: &[i64], rels: &[Vector]) -> Vec<Vector> {
    if cols.is_empty() {
        return Vec::new();
    }
    let amb = ModCtx::new(base.ring.clone(), target_twists.to_vec(), false);
    let mc = to_modvecs(&amb, cols);
    let mut extra = to_modvecs(&amb, rels);
    extra.extend(defining_multiples(base, &amb));
    let solver = LiftSolver::new(&amb, &mc, &extra, col_degrees);
    solver
        .syzygies()
        .into_iter()
        .map(|v| reduce_vec(base, &v))
        .filter(|v| !is_zero_vec(v))
        .collect()
}

/// Solves `sum a_j cols_j = v` modulo `span(rels) + J`.
pub struct Lifter {
    amb: Arc<ModCtx>,
    solver: LiftSolver,
}

impl Lifter {
    pub fn new(base: &BaseRing, target_twists: &[i64], cols: &[Vector], col_degrees: &[i64], rels: &[Vector]) -> Lifter {
        let amb = ModCtx::new(base.ring.clone(), target_twists.to_vec(), false);
        let mc = to_modvecs(&amb, cols);
        let mut extra = to_modvecs(&amb, rels);
        extra.extend(defining_multiples(base, &amb));
        let solver = LiftSolver::new(&amb, &mc, &extra, col_degrees);
        Lifter { amb, solver }
    }

    pub fn lift(&self, v: &[Poly]) -> Option<Vector> {
        self.solver.lift(&ModVec::from_dense(&self.amb, v))
    }
}

/// Row-echelon accumulator for homogeneous vectors of a fixed degree over the field.
struct Echelon {
    ctx: Arc<ModCtx>,
    rows: HashMap<(usize, Mono), ModVec>,
}

impl Echelon {
    fn new(ctx: Arc<ModCtx>) -> Echelon {
        Echelon { ctx, rows: HashMap::new() }
    }

    /// Inserts `v`; returns false if it was already in the span.
    fn insert(&mut self, v: ModVec) -> bool {
        let mut v = v;
        loop {
            let Some(l) = v.lead().cloned() else { return false };
            match self.rows.get(&(l.comp, l.mono.clone())) {
                Some(r) => {
                    let c = l.coef.div(&r.lead().unwrap().coef);
                    v = v.sub(&self.ctx, &r.scale(&c));
                }
                None => {
                    self.rows.insert((l.comp, l.mono.clone()), v);
                    return true;
                }
            }
        }
    }
}

/// Indices of candidates forming a minimal generating set of `(span(cands) + span(modulo)) / span(modulo)`.
///
/// Works degree by degree: a candidate is kept when its normal form modulo the module
/// plus all kept lower-degree candidates is independent of those already kept in its degree.
pub fn select_minimal(base: &BaseRing, twists: &[i64], cands: &[Vector], modulo: &[Vector]) -> Result<Vec<usize>, AlgebraError> {
    let mut gb = span_basis(base, twists, modulo);
    let ctx = gb.ctx().clone();
    let mut by_degree: Vec<(i64, usize)> = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        if let Some(d) = vec_degree(twists, c)? {
            by_degree.push((d, i));
        }
    }
    by_degree.sort();
    let mut kept = Vec::new();
    let mut k = 0;
    while k < by_degree.len() {
        let d = by_degree[k].0;
        let mut ech = Echelon::new(ctx.clone());
        let mut new = Vec::new();
        while k < by_degree.len() && by_degree[k].0 == d {
            let i = by_degree[k].1;
            let nf = gb.reduce(&ModVec::from_dense(&ctx, &cands[i]));
            if ech.insert(nf) {
                kept.push(i);
                new.push(ModVec::from_dense(&ctx, &cands[i]));
            }
            k += 1;
        }
        gb.extend(new);
    }
    kept.sort();
    Ok(kept)
}

/// All monomials of the given weighted degree.
pub fn monomials_of_degree(weights: &[u32], deg: i64) -> Vec<Mono> {
    let mut out = Vec::new();
    if deg < 0 {
        return out;
    }
    let n = weights.len();
    let mut cur: Mono = smallvec::SmallVec::from_elem(0, n);
    fn rec(i: usize, left: i64, w: &[u32], cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == w.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let wi = w[i] as i64;
        let mut e = 0;
        while e * wi <= left {
            cur[i] = e as u16;
            rec(i + 1, left - e * wi, w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, deg, weights, &mut cur, &mut out);
    out
}

/// Dimension over the field of `(P^r / U)_t` where `gb` is a basis of `U` in TOP order.
pub fn quotient_dimension(gb: &Groebner, t: i64) -> usize {
    let ctx = gb.ctx();
    let mut count = 0;
    for (c, &tw) in ctx.twists.iter().enumerate() {
        for m in monomials_of_degree(&ctx.ring.weights, t - tw) {
            let divisible = gb.basis().iter().any(|g| {
                let l = g.lead().unwrap();
                l.comp == c && super::poly::mono_divides(&l.mono, &m)
            });
            if !divisible {
                count += 1;
            }
        }
    }
    count
}

/// Finitely presented graded module `P^g(-twists) / (relations + J)`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub base: Arc<BaseRing>,
    pub gen_degrees: Vec<i64>,
    pub relations: Vec<Vector>,
}

impl PresentedModule {
    pub fn new(base: Arc<BaseRing>, gen_degrees: Vec<i64>, relations: Vec<Vector>) -> Result<PresentedModule, AlgebraError> {
        for (j, r) in relations.iter().enumerate() {
            if r.len() != gen_degrees.len() {
                return Err(AlgebraError::Invalid(format!("relation {j} has wrong length")));
            }
            vec_degree(&gen_degrees, r).map_err(|_| AlgebraError::TwistMismatch { row: 0, col: j })?;
        }
        Ok(PresentedModule { base, gen_degrees, relations })
    }

    pub fn zero(base: Arc<BaseRing>) -> PresentedModule {
        PresentedModule { base, gen_degrees: Vec::new(), relations: Vec::new() }
    }

    /// Free module of rank one: the base ring itself.
    pub fn ring(base: Arc<BaseRing>) -> PresentedModule {
        PresentedModule { base, gen_degrees: vec![0], relations: Vec::new() }
    }

    /// Cyclic module `P/(ideal + J)`.
    pub fn cyclic(base: Arc<BaseRing>, ideal: &[Poly]) -> PresentedModule {
        let relations = ideal.iter().filter(|p| !p.is_zero()).map(|p| vec![p.clone()]).collect();
        PresentedModule { base, gen_degrees: vec![0], relations }
    }

    pub fn rank(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn basis(&self) -> Groebner {
        span_basis(&self.base, &self.gen_degrees, &self.relations)
    }

    pub fn is_zero(&self) -> bool {
        let gb = self.basis();
        (0..self.rank()).all(|i| gb.contains(&ModVec::from_dense(gb.ctx(), &unit_vec(&self.base, self.rank(), i))))
    }

    /// Presentation on a minimal set of generators, with the chosen generator indices.
    pub fn minimize(&self) -> Result<(PresentedModule, Vec<usize>), AlgebraError> {
        let g = self.rank();
        let units: Vec<Vector> = (0..g).map(|i| unit_vec(&self.base, g, i)).collect();
        let keep = select_minimal(&self.base, &self.gen_degrees, &units, &self.relations)?;
        let sq = subquotient(&self.base, &self.gen_degrees, &keep.iter().map(|&i| units[i].clone()).collect::<Vec<_>>(), &self.relations, &[])?;
        Ok((sq.module, keep))
    }

    pub fn minimal_generator_count(&self) -> Result<usize, AlgebraError> {
        Ok(self.minimize()?.1.len())
    }

    /// Dimension of the degree-`t` piece.
    pub fn hilbert_function(&self, t: i64) -> usize {
        quotient_dimension(&self.basis(), t)
    }

    /// Annihilator ideal, from the syzygies of the stacked column `(e_1; ...; e_g)`.
    pub fn annihilator(&self) -> Vec<Poly> {
        let g = self.rank();
        let base = &self.base;
        if g == 0 {
            return vec![base.one()];
        }
        let mut col = zero_vec(base, g * g);
        for i in 0..g {
            col[i * g + i] = base.one();
        }
        let mut rels = Vec::new();
        for blk in 0..g {
            for r in &self.relations {
                let mut v = zero_vec(base, g * g);
                v[blk * g..(blk + 1) * g].clone_from_slice(r);
                rels.push(v);
            }
        }
        // the stacked column has mixed twists, so solve in a shifted grading per block
        let shifted: Vec<i64> = (0..g).flat_map(|b| self.gen_degrees.iter().map(move |&d| d - self.gen_degrees[b])).collect();
        let ann: Vec<Poly> = kernel(base, &shifted, &[col], &[0], &rels).into_iter().map(|v| v[0].clone()).collect();
        super::ideal::minimal_ideal_gens(base, &ann)
    }

    /// Submodule quotient `(relations :_{P^g} f)` as generators in `P^g`.
    pub fn colon_element(&self, f: &Poly) -> Vec<Vector> {
        let g = self.rank();
        let fd = f.homogeneous_degree().unwrap_or(0);
        let cols: Vec<Vector> = (0..g).map(|i| scale_vec(f, &unit_vec(&self.base, g, i))).collect();
        let degs: Vec<i64> = self.gen_degrees.iter().map(|d| d + fd).collect();
        kernel(&self.base, &self.gen_degrees, &cols, &degs, &self.relations)
    }
}

/// Presentation of `cycles / (boundaries + ambient relations)`, with cycle representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: PresentedModule,
    /// Vectors in the ambient free module representing the generators of `module`.
    pub reps: Vec<Vector>,
}

/// `cycles`, `boundaries` and `ambient` live in a free module with `twists`.
/// Generators of the result are a minimal subset of `cycles` modulo the rest.
pub fn subquotient(base: &Arc<BaseRing>, twists: &[i64], cycles: &[Vector], boundaries: &[Vector], ambient: &[Vector]) -> Result<Subquotient, AlgebraError> {
    let zgb = {
        let mut all = cycles.to_vec();
        all.extend_from_slice(ambient);
        span_basis(base, twists, &all)
    };
    for (index, b) in boundaries.iter().enumerate() {
        if !zgb.contains(&ModVec::from_dense(zgb.ctx(), b)) {
            return Err(AlgebraError::NotContained { index });
        }
    }
    let mut modulo = boundaries.to_vec();
    modulo.extend_from_slice(ambient);
    let keep = select_minimal(base, twists, cycles, &modulo)?;
    let reps: Vec<Vector> = keep.iter().map(|&i| cycles[i].clone()).collect();
    let degs: Vec<i64> = reps.iter().map(|r| vec_degree(twists, r).unwrap().unwrap()).collect();
    let relations = if reps.is_empty() {
        Vec::new()
    } else {
        let syz = kernel(base, twists, &reps, &degs, &modulo);
        minimal_relations(base, &degs, syz)?
    };
    Ok(Subquotient { module: PresentedModule { base: base.clone(), gen_degrees: degs, relations }, reps })
}

/// Drops redundant relation vectors (keeps a minimal generating subset).
pub fn minimal_relations(base: &BaseRing, twists: &[i64], rels: Vec<Vector>) -> Result<Vec<Vector>, AlgebraError> {
    let keep = select_minimal(base, twists, &rels, &[])?;
    Ok(keep.into_iter().map(|i| rels[i].clone()).collect())
}

/// Inverse lookup for callers that need a term-level view of vectors.
pub fn vector_terms(base: &BaseRing, twists: &[i64], v: &[Poly]) -> Vec<Term> {
    let ctx = ModCtx::new(base.ring.clone(), twists.to_vec(), false);
    ModVec::from_dense(&ctx, v).terms
}

/// Coefficient of the constant monomial in each component.
pub fn constant_parts(v: &[Poly]) -> Vec<Scalar> {
    v.iter().map(|p| p.constant_term()).collect()
}

/// A submodule of a presented module, kept with its ambient.
#[derive(Clone, Debug)]
pub struct SubModule {
    pub ambient: PresentedModule,
    pub gens: Vec<Vector>,
}

impl SubModule {
    pub fn is_zero(&self) -> bool {
        let gb = self.ambient.basis();
        self.gens.iter().all(|g| gb.contains(&ModVec::from_dense(gb.ctx(), g)))
    }

    pub fn presentation(&self) -> Result<PresentedModule, AlgebraError> {
        Ok(subquotient(&self.ambient.base, &self.ambient.gen_degrees, &self.gens, &[], &self.ambient.relations)?.module)
    }

    /// Equality of submodules by two-way containment.
    pub fn same_as(&self, other: &SubModule) -> bool {
        let mut a = self.gens.clone();
        a.extend_from_slice(&self.ambient.relations);
        let mut b = other.gens.clone();
        b.extend_from_slice(&self.ambient.relations);
        let base = &self.ambient.base;
        let tw = &self.ambient.gen_degrees;
        let ga = span_basis(base, tw, &a);
        let gb = span_basis(base, tw, &b);
        b.iter().all(|v| ga.contains(&ModVec::from_dense(ga.ctx(), v)))
            && a.iter().all(|v| gb.contains(&ModVec::from_dense(gb.ctx(), v)))
    }
}

/// Minimal graded free resolution `0 <- M <- G_0 <- G_1 <- ...` of a presented module.
///
/// Entry `p` holds the twists of `G_p` and the columns of `G_p -> G_{p-1}` (empty for `p = 0`).
/// Over an Artinian base the resolution may be infinite; `max_len` caps it.
pub fn free_resolution(m: &PresentedModule, max_len: usize) -> Result<Vec<(Vec<i64>, Vec<Vector>)>, AlgebraError> {
    let (min, _) = m.minimize()?;
    let base = &m.base;
    let mut out = vec![(min.gen_degrees.clone(), Vec::new())];
    if min.rank() == 0 {
        return Ok(Vec::new());
    }
    let mut cols = minimal_relations(base, &min.gen_degrees, min.relations.iter().map(|r| reduce_vec(base, r)).filter(|r| !is_zero_vec(r)).collect())?;
    let mut twists = min.gen_degrees.clone();
    while !cols.is_empty() {
        if out.len() > max_len {
            return Err(AlgebraError::Invalid(format!("free resolution longer than {max_len}")));
        }
        let degs: Vec<i64> = cols.iter().map(|c| vec_degree(&twists, c).unwrap().unwrap()).collect();
        let next = kernel(base, &twists, &cols, &degs, &[]);
        out.push((degs.clone(), cols));
        twists = degs;
        cols = minimal_relations(base, &twists, next)?;
    }
    Ok(out)
}

/// Generators of the syzygies of the columns of `mat` (a matrix with row twists `rows`).
pub fn syzygy_module(base: &BaseRing, rows: &[i64], mat: &[Vector]) -> Result<Vec<Vector>, AlgebraError> {
    let mut degs = Vec::with_capacity(mat.len());
    for (j, c) in mat.iter().enumerate() {
        if c.len() != rows.len() {
            return Err(AlgebraError::Invalid(format!("column {j} has wrong length")));
        }
        match vec_degree(rows, c) {
            Ok(Some(d)) => degs.push(d),
            Ok(None) => degs.push(0),
            Err(_) => return Err(AlgebraError::TwistMismatch { row: 0, col: j }),
        }
    }
    let k = kernel(base, rows, mat, &degs, &[]);
    minimal_relations(base, &degs, k)
}

/// Dimension of the socle `(0 : m)` of an Artinian base ring.
pub fn socle_dimension(base: &Arc<BaseRing>) -> usize {
    let col: Vector = base.vars();
    let tw: Vec<i64> = base.ring.weights.iter().map(|&w| -(w as i64)).collect();
    let soc = kernel(base, &tw, &[col], &[0], &[]);
    select_minimal(base, &[0], &soc, &[]).map_or(0, |k| k.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, MonoOrder, PolyRing};

    fn base() -> Arc<BaseRing> {
        BaseRing::polynomial(PolyRing::new(Field::Rational, vec![("x".into(), 1), ("y".into(), 1)], MonoOrder::GRevLex))
    }

    #[test]
    fn minimal_generators_examples() {
        let b = base();
        let (x, y) = (b.var(0), b.var(1));
        let m = PresentedModule::new(b.clone(), vec![0, 0], vec![vec![x.clone(), b.zero()], vec![b.zero(), x.clone()], vec![b.zero(), y.clone()]]).unwrap();
        assert_eq!(m.minimal_generator_count().unwrap(), 2);
        let sq = PresentedModule::cyclic(b.clone(), &[x.mul(&x), x.mul(&y), y.mul(&y)]);
        assert_eq!(sq.minimal_generator_count().unwrap(), 1);
        // coker [[x, y], [0, x]]: columns (x, 0) and (y, x)
        let c = PresentedModule::new(b.clone(), vec![0, 0], vec![vec![x.clone(), b.zero()], vec![y.clone(), x.clone()]]).unwrap();
        assert_eq!(c.minimal_generator_count().unwrap(), 2);
    }

    #[test]
    fn annihilators() {
        let b = base();
        let x = b.var(0);
        let m = PresentedModule::cyclic(b.clone(), std::slice::from_ref(&x));
        assert_eq!(m.annihilator(), vec![x.clone()]);
        let s = PresentedModule::new(b.clone(), vec![0, 0], vec![vec![b.zero(), x.clone()]]).unwrap();
        assert!(s.annihilator().is_empty());
    }

    #[test]
    fn hilbert_of_quotient() {
        let b = base();
        let (x, y) = (b.var(0), b.var(1));
        let m = PresentedModule::cyclic(b.clone(), std::slice::from_ref(&x));
        assert_eq!((0..4).map(|t| m.hilbert_function(t)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        let k = PresentedModule::cyclic(b.clone(), &[x, y]);
        assert_eq!(k.hilbert_function(0), 1);
        assert_eq!(k.hilbert_function(1), 0);
    }
}
