//! Homogeneous ideals of the base ring: Gröbner bases, normal forms, dimension, radicals.

use std::sync::Arc;

use super::groebner::{Groebner, ModCtx, ModVec};
use super::module::{kernel, select_minimal};
use super::poly::{Mono, MonoOrder, Poly};
use super::{AlgebraError, BaseRing};

/// Reduced Gröbner basis of an ideal, tagged with the order it was computed for.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub order: MonoOrder,
    gb: Groebner,
}

impl IdealBasis {
    pub fn polys(&self) -> Vec<Poly> {
        let ring = &self.gb.ctx().ring;
        self.gb.basis().iter().map(|v| v.to_poly(ring, 0)).collect()
    }

    pub fn groebner(&self) -> &Groebner {
        &self.gb
    }
}

/// Reduced basis of `(gens)` in the ring's own monomial order. Rejects inhomogeneous input.
pub fn groebner_basis(gens: &[Poly], order: MonoOrder) -> Result<IdealBasis, AlgebraError> {
    let Some(first) = gens.first() else {
        return Err(AlgebraError::Invalid("empty generator list".into()));
    };
    let ring = first.ring().clone();
    if ring.order != order {
        return Err(AlgebraError::OrderMismatch);
    }
    for (index, g) in gens.iter().enumerate() {
        if !g.is_homogeneous() {
            return Err(AlgebraError::Inhomogeneous { index, poly: g.to_string() });
        }
    }
    let ctx = ModCtx::new(ring, vec![0], false);
    let vs = gens.iter().map(|g| ModVec::from_poly(&ctx, 0, g)).collect();
    Ok(IdealBasis { order, gb: Groebner::new(ctx, vs) })
}

/// Remainder of `f` on division by a Gröbner basis, plus the quotient `f - remainder`.
pub fn normal_form(f: &Poly, basis: &IdealBasis) -> Result<Poly, AlgebraError> {
    if f.ring().order != basis.order || basis.gb.ctx().ring.order != basis.order {
        return Err(AlgebraError::OrderMismatch);
    }
    let ctx = basis.gb.ctx();
    Ok(basis.gb.reduce(&ModVec::from_poly(ctx, 0, f)).to_poly(&ctx.ring, 0))
}

/// A homogeneous ideal of `P/J`.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub base: Arc<BaseRing>,
    pub gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(base: Arc<BaseRing>, gens: Vec<Poly>) -> Result<Ideal, AlgebraError> {
        let gens: Vec<Poly> = gens.into_iter().map(|g| base.reduce(&g)).filter(|g| !g.is_zero()).collect();
        for (index, g) in gens.iter().enumerate() {
            if !g.is_homogeneous() {
                return Err(AlgebraError::Inhomogeneous { index, poly: g.to_string() });
            }
        }
        Ok(Ideal { base, gens })
    }

    pub fn zero(base: Arc<BaseRing>) -> Ideal {
        Ideal { base, gens: Vec::new() }
    }

    /// The irrelevant maximal ideal.
    pub fn maximal(base: Arc<BaseRing>) -> Ideal {
        let gens = base.vars();
        Ideal { base, gens }
    }

    /// Basis of `I + J` in `P`.
    pub fn groebner(&self) -> Groebner {
        let ctx = ModCtx::new(self.base.ring.clone(), vec![0], false);
        let mut vs: Vec<ModVec> = self.gens.iter().map(|g| ModVec::from_poly(&ctx, 0, g)).collect();
        vs.extend(self.base.defining_ideal().iter().map(|g| ModVec::from_poly(&ctx, 0, g)));
        Groebner::new(ctx, vs)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        let gb = self.groebner();
        gb.contains(&ModVec::from_poly(gb.ctx(), 0, f))
    }

    pub fn contains_ideal(&self, o: &Ideal) -> bool {
        let gb = self.groebner();
        o.gens.iter().all(|f| gb.contains(&ModVec::from_poly(gb.ctx(), 0, f)))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Krull dimension of `P/(I + J)`; `None` for the unit ideal.
    pub fn krull_dimension(&self) -> Option<usize> {
        let gb = self.groebner();
        if gb.is_unit_ideal() {
            return None;
        }
        let leads: Vec<Mono> = gb.basis().iter().map(|g| g.lead().unwrap().mono.clone()).collect();
        Some(max_independent_set(self.base.nvars(), &leads))
    }

    /// `f` in the radical of `I + J`, via `1 in (I, J, 1 - t f)` in one extra variable.
    pub fn radical_contains(&self, f: &Poly) -> bool {
        if f.is_zero() {
            return true;
        }
        let ring = &self.base.ring;
        let big = ring.with_extra_var("_t", 1);
        let t = Poly::var(&big, ring.nvars());
        let ctx = ModCtx::new(big.clone(), vec![0], false);
        let mut vs: Vec<ModVec> = self
            .gens
            .iter()
            .chain(self.base.defining_ideal())
            .map(|g| ModVec::from_poly(&ctx, 0, &g.embed(&big)))
            .collect();
        vs.push(ModVec::from_poly(&ctx, 0, &Poly::one(&big).sub(&t.mul(&f.embed(&big)))));
        Groebner::new(ctx, vs).is_unit_ideal()
    }

    /// `(I : f) = {g : g f in I + J}`.
    pub fn quotient(&self, f: &Poly) -> Ideal {
        let deg = f.homogeneous_degree().unwrap_or(0);
        let gens: Vec<Poly> = kernel(&self.base, &[0], &[vec![f.clone()]], &[deg], &self.gens.iter().map(|g| vec![g.clone()]).collect::<Vec<_>>())
            .into_iter()
            .map(|v| v[0].clone())
            .collect();
        Ideal { base: self.base.clone(), gens: minimal_ideal_gens(&self.base, &gens) }
    }

    /// `(I : f^inf)`, iterating quotients until they stabilize.
    pub fn saturation(&self, f: &Poly) -> Ideal {
        let mut cur = self.clone();
        loop {
            let next = cur.quotient(f);
            if cur.contains_ideal(&next) {
                return cur;
            }
            cur = next;
        }
    }

    pub fn intersect(&self, o: &Ideal) -> Ideal {
        let base = &self.base;
        let col = vec![base.one(), base.one()];
        let mut rels = Vec::new();
        for g in &self.gens {
            rels.push(vec![g.clone(), base.zero()]);
        }
        for g in &o.gens {
            rels.push(vec![base.zero(), g.clone()]);
        }
        let gens: Vec<Poly> = kernel(base, &[0, 0], &[col], &[0], &rels).into_iter().map(|v| v[0].clone()).collect();
        Ideal { base: base.clone(), gens: minimal_ideal_gens(base, &gens) }
    }

    pub fn sum(&self, o: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(o.gens.iter().cloned());
        Ideal { base: self.base.clone(), gens: minimal_ideal_gens(&self.base, &gens) }
    }
}

/// Decides `f in rad(I)` for an ideal of `P/J`.
pub fn radical_membership(f: &Poly, i: &Ideal) -> bool {
    i.radical_contains(f)
}

/// A minimal homogeneous generating subset, reduced modulo the defining ideal.
pub fn minimal_ideal_gens(base: &BaseRing, gens: &[Poly]) -> Vec<Poly> {
    let vs: Vec<Vec<Poly>> = gens.iter().map(|g| vec![base.reduce(g)]).collect();
    match select_minimal(base, &[0], &vs, &[]) {
        Ok(keep) => keep.into_iter().map(|i| vs[i][0].clone()).collect(),
        Err(_) => gens.to_vec(),
    }
}

/// Largest set of variables containing the support of no leading monomial.
fn max_independent_set(n: usize, leads: &[Mono]) -> usize {
    let supports: Vec<u64> = leads
        .iter()
        .map(|m| m.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (i, _)| acc | (1 << i)))
        .collect();
    let mut best = 0;
    for s in 0u64..(1u64 << n) {
        let size = s.count_ones() as usize;
        if size > best && supports.iter().all(|&sup| sup & !s != 0) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, PolyRing};

    fn base(vars: &[&str]) -> Arc<BaseRing> {
        BaseRing::polynomial(PolyRing::new(Field::Rational, vars.iter().map(|v| (v.to_string(), 1)).collect(), MonoOrder::GRevLex))
    }

    fn ideal(b: &Arc<BaseRing>, gens: &[&str]) -> Ideal {
        Ideal::new(b.clone(), gens.iter().map(|g| b.parse(g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn dimensions() {
        let b = base(&["x", "y"]);
        assert_eq!(ideal(&b, &["x"]).krull_dimension(), Some(1));
        assert_eq!(ideal(&b, &["x", "y"]).krull_dimension(), Some(0));
        assert_eq!(ideal(&b, &["1"]).krull_dimension(), None);
        let c = base(&["x", "y", "z"]);
        assert_eq!(ideal(&c, &["x*y", "x*z"]).krull_dimension(), Some(2));
    }

    #[test]
    fn radicals() {
        let b = base(&["x", "y"]);
        assert!(radical_membership(&b.parse("x").unwrap(), &ideal(&b, &["x^2"])));
        assert!(!radical_membership(&b.parse("y").unwrap(), &ideal(&b, &["x"])));
        assert!(radical_membership(&b.parse("x+y").unwrap(), &ideal(&b, &["x^2", "y^2"])));
    }

    #[test]
    fn basis_and_normal_form() {
        let b = base(&["x", "y"]);
        let gens: Vec<Poly> = ["x^2+y^2", "x*y"].iter().map(|s| b.parse(s).unwrap()).collect();
        let gb = groebner_basis(&gens, MonoOrder::GRevLex).unwrap();
        let mut ps: Vec<String> = gb.polys().iter().map(|p| p.to_string()).collect();
        ps.sort();
        assert_eq!(ps, vec!["x*y", "x^2 + y^2", "y^3"]);
        assert_eq!(normal_form(&b.parse("x*y+y^2").unwrap(), &gb).unwrap().to_string(), "y^2");
        assert!(groebner_basis(&[b.parse("x+1").unwrap()], MonoOrder::GRevLex).is_err());
        assert!(matches!(groebner_basis(&gens, MonoOrder::Lex), Err(AlgebraError::OrderMismatch)));
    }

    #[test]
    fn quotients_and_saturation() {
        let b = base(&["x", "y"]);
        let i = ideal(&b, &["x*y"]);
        let s = i.saturation(&b.parse("x").unwrap());
        assert!(s.contains(&b.parse("y").unwrap()));
        assert!(!s.contains(&b.parse("x").unwrap()));
        let m = ideal(&b, &["x"]).intersect(&ideal(&b, &["y"]));
        assert_eq!(m.gens.len(), 1);
        assert!(m.contains(&b.parse("x*y").unwrap()));
    }
}
