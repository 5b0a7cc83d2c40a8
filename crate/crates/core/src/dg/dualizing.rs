//! Dualizing DG-modules for Gorenstein presentations, homothety and biduality.

use std::sync::Arc;

use crate::algebra::module::{zero_vec, Vector};
use crate::complexes::{CohomBounds, ComplexMap, Window};
use crate::report::CertReport;

use super::algebra::DGAlgebra;
use super::derived::hom_from;
use super::module::DGModule;
use super::resolve::{semifree_resolution, Resolution};
use super::DgError;

/// `D = Σ^{inf R} R`, right-normalized so that `inf D = 0`.
pub fn gorenstein_dualizing(r: &Arc<DGAlgebra>) -> Result<DGModule, DgError> {
    if !r.gorenstein {
        return Err(DgError::NoDualizingConstructor);
    }
    let inf = match r.complex().cohomology_bounds()? {
        CohomBounds::Range { inf, .. } => inf,
        CohomBounds::Exact => return Err(DgError::Invalid("the DG-ring has no cohomology".into())),
    };
    Ok(DGModule::ring(r).shift(inf))
}

/// The `R`-linear map `R → N` sending `1` to the degree-0 element `eta`.
pub fn map_from_ring(n: &DGModule, eta: &[crate::algebra::Poly]) -> ComplexMap {
    let alg = &n.alg;
    let src = alg.complex();
    let maps = (src.lo()..=src.hi()).map(|i| alg.in_degree(i).iter().map(|&a| n.act(a, 0, eta)).collect()).collect();
    ComplexMap::from_parts(src, n.cx.clone(), maps)
}

/// The comparison `F → M` of a resolution as an element of `Hom^0_R(F, M)`.
pub fn comparison_cycle(res: &Resolution) -> Vector {
    res.phi.iter().flatten().cloned().collect()
}

/// Degrees `i` in which a map's cone is checked acyclic, and the verdict.
fn cone_acyclic(map: &ComplexMap, w: Window) -> Result<(Vec<i64>, Option<i64>), DgError> {
    let cone = map.cone();
    if cone.is_zero_complex() {
        return Ok((Vec::new(), None));
    }
    let lo = w.lo.map_or(cone.lo(), |l| l.max(cone.lo()));
    let hi = w.hi.map_or(cone.hi(), |h| (h - 1).min(cone.hi()));
    let mut checked = Vec::new();
    for i in lo..=hi {
        checked.push(i);
        if !cone.cohomology_vanishes(i)? {
            return Ok((checked, Some(i)));
        }
    }
    Ok((checked, None))
}

/// Homothety `R → RHom_R(D, D)` is a quasi-isomorphism, checked through its cone.
pub fn homothety_check(r: &Arc<DGAlgebra>, d: &DGModule, bound: i64) -> Result<CertReport, DgError> {
    let mut rep = CertReport::new("homothety");
    let res = semifree_resolution(d, bound)?;
    let h = hom_from(&res.f, d);
    let eta = comparison_cycle(&res);
    let map = map_from_ring(&h, &eta);
    let chain = map.validate().is_ok();
    rep.condition("chain map", chain, None);
    let (checked, bad) = cone_acyclic(&map, h.window())?;
    rep.condition("cone acyclic", bad.is_none(), bad.map(|i| format!("H^{i}(cone) != 0")));
    rep.invariant("checked degrees", checked.len());
    rep.invariant("generators", res.f.rank());
    rep.bound("resolution", bound);
    rep.invariant("ring basis", r.dim());
    Ok(rep.conclude())
}

/// `M† = RHom_R(M, D)`, with the resolution of `M` used.
pub fn dagger(m: &DGModule, d: &DGModule, bound: i64) -> Result<(DGModule, Resolution), DgError> {
    let res = semifree_resolution(m, bound)?;
    Ok((hom_from(&res.f, d), res))
}

/// Builds the biduality morphism `M → M††` on the resolution of `M` and certifies it.
pub fn biduality_check(m: &DGModule, d: &DGModule, bound: i64) -> Result<CertReport, DgError> {
    let mut rep = CertReport::new("biduality");
    rep.bound("resolution", bound);
    let (md, rm) = dagger(m, d, bound)?;
    let rd = semifree_resolution(&md, bound)?;
    let mdd = hom_from(&rd.f, d);
    let fm = rm.f.complex();
    let base = d.base().clone();
    // v ↦ (u ↦ (-1)^{|u||v|} φ†(u)(v))
    let image_of_gen = |v: usize| -> Vector {
        let vd = rm.f.gens[v].deg;
        let mut out: Vector = Vec::new();
        for (u, g) in rd.f.gens.iter().enumerate() {
            let comps = super::derived::hom_components(&rm.f, d, g.deg, &rd.phi[u]);
            let x = &comps[v];
            let neg = (g.deg * vd).rem_euclid(2) == 1;
            out.extend(x.iter().map(|p| if neg { p.neg() } else { p.clone() }));
        }
        out
    };
    let images: Vec<Vector> = (0..rm.f.rank()).map(image_of_gen).collect();
    let maps: Vec<Vec<Vector>> = (fm.lo()..=fm.hi())
        .map(|n| {
            let l = rm.f.layer(n);
            l.basis
                .iter()
                .map(|&(v, b)| {
                    let y = mdd.act(b, rm.f.gens[v].deg, &images[v]);
                    if y.len() == mdd.cx.rank(n) {
                        y
                    } else {
                        zero_vec(&base, mdd.cx.rank(n))
                    }
                })
                .collect()
        })
        .collect();
    let map = ComplexMap::from_parts(fm.with_window(rm.cert.window), mdd.cx.clone(), maps);
    let chain = map.validate();
    rep.condition("chain map", chain.is_ok(), chain.err().map(|e| e.to_string()));
    // M† is exact only up to its window; errors above it reach M†† below sup D - hi + 1
    let sup_d = d.cx.cohomology_bounds()?.sup().unwrap_or(0);
    let mut w = mdd.window().meet(&rm.cert.window);
    if let Some(h) = md.window().hi {
        let l = sup_d - h + 1;
        w.lo = Some(w.lo.map_or(l, |x| x.max(l)));
    }
    let (checked, bad) = cone_acyclic(&map, Window { lo: w.lo.map(|l| l - 1), hi: w.hi })?;
    rep.condition("cone acyclic", bad.is_none(), bad.map(|i| format!("H^{i}(cone) != 0")));
    rep.invariant("window", w.to_string());
    rep.invariant("checked degrees", checked.len());
    if checked.is_empty() && !map.cone().is_zero_complex() {
        return Ok(rep.exhausted(bound, "no degree of M†† is certified"));
    }
    Ok(rep.conclude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseRing, Field, MonoOrder, Poly, PolyRing};

    fn poly_base(n: usize) -> Arc<BaseRing> {
        let vars = ["x", "y", "z"][..n].iter().map(|v| (v.to_string(), 1)).collect();
        BaseRing::polynomial(PolyRing::new(Field::Rational, vars, MonoOrder::GRevLex))
    }

    #[test]
    fn dualizing_of_koszul_ring() {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        let d = gorenstein_dualizing(&r).unwrap();
        assert_eq!(d.cx.support().unwrap(), vec![0, 1]);
        assert!(homothety_check(&r, &d, 4).unwrap().passed());
    }

    #[test]
    fn no_constructor_without_flag() {
        let b = poly_base(2);
        let m = crate::algebra::PresentedModule::cyclic(b.clone(), &[b.var(0)]);
        let r = DGAlgebra::square_zero(b, m, 1).unwrap();
        assert_eq!(gorenstein_dualizing(&r).unwrap_err(), DgError::NoDualizingConstructor);
    }

    #[test]
    fn artinian_gorenstein() {
        let ring = PolyRing::new(Field::Prime(5), vec![("x".into(), 1)], MonoOrder::GRevLex);
        let x = Poly::var(&ring, 0);
        let b = BaseRing::quotient(ring, vec![x.pow(3)]).unwrap();
        let r = DGAlgebra::koszul(b.clone(), vec![b.var(0).pow(2)]).unwrap();
        let d = gorenstein_dualizing(&r).unwrap();
        assert_eq!(d.cx.cohomology_bounds().unwrap().inf(), Some(0));
        assert!(homothety_check(&r, &d, 4).unwrap().passed());
    }

    #[test]
    fn biduality_of_residue_field() {
        let b = poly_base(1);
        let t = DGAlgebra::trivial(b.clone());
        let d = gorenstein_dualizing(&t).unwrap();
        let k = DGModule::residue_field(&t);
        let rep = biduality_check(&k, &d, 3).unwrap();
        assert!(rep.passed(), "{}", rep.table());
        let b2 = poly_base(2);
        let x = b2.var(0);
        let r = DGAlgebra::koszul(b2.clone(), vec![x.clone(), x]).unwrap();
        let d = gorenstein_dualizing(&r).unwrap();
        let h0 = DGModule::from_h0_module(&r, &r.h0_presentation());
        let rep = biduality_check(&h0, &d, 4).unwrap();
        assert!(rep.passed(), "{}", rep.table());
        assert!(rep.int("checked degrees").unwrap() >= 2, "{}", rep.table());
    }
}
