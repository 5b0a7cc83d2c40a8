//! Local cohomology at the maximal ideal, depth, torsion and the canonical element map.
//!
//! Torsion invariants go through graded local duality over the ambient polynomial ring:
//! `H^i_m(M)_t` is dual to `Ext^{n-i}_P(M, P)_{-t-σ}` with `σ` the sum of variable weights.
//! Over an Artinian base every module is torsion and `RΓ_m` is the identity.

use std::collections::BTreeMap;
use serde::Serialize;

use crate::algebra::ideal::Ideal;
use crate::algebra::module::{kernel, quotient_dimension, span_basis, unit_vec, Lifter, SubModule, Vector};
use crate::algebra::{ModVec, Poly, PresentedModule};
use crate::complexes::{FreeComplex, Window};
use crate::dg::derived::{derived_hom, hom_from};
use crate::dg::module::DGModule;
use crate::dg::resolve::{base_resolution, semifree_resolution, Resolution};
use crate::dg::DgError;

/// Largest bound the depth computation escalates to.
pub const BOUND_CAP: i64 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub nonzero: bool,
    /// `(t, dim H^i_m(M)_t)` over a finite range of internal degrees.
    pub hilbert: Vec<(i64, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionProfile {
    pub entries: BTreeMap<i64, ProfileEntry>,
    pub inf: Option<i64>,
    pub sup: Option<i64>,
    pub amp: Option<i64>,
    pub window: Window,
    /// The window covers every degree where `H_m` can be nonzero.
    pub complete: bool,
}

impl TorsionProfile {
    pub fn support(&self) -> Vec<i64> {
        self.entries.iter().filter(|(_, e)| e.nonzero).map(|(i, _)| *i).collect()
    }

    fn summarize(entries: BTreeMap<i64, ProfileEntry>, window: Window, complete: bool) -> TorsionProfile {
        let s: Vec<i64> = entries.iter().filter(|(_, e)| e.nonzero).map(|(i, _)| *i).collect();
        let (inf, sup) = (s.first().copied(), s.last().copied());
        let amp = inf.zip(sup).map(|(a, b)| b - a);
        TorsionProfile { entries, inf, sup, amp, window, complete }
    }
}

fn hilbert_rows(m: &PresentedModule, ts: impl Iterator<Item = i64>, flip: impl Fn(i64) -> i64) -> Vec<(i64, usize)> {
    let gb = m.basis();
    ts.map(|t| (t, quotient_dimension(&gb, flip(t)))).collect()
}

/// A free model over a polynomial base.
fn free_model(c: &FreeComplex) -> Result<FreeComplex, DgError> {
    if c.has_relations() {
        Ok(base_resolution(c, 0)?.0.with_window(c.window))
    } else {
        Ok(c.clone())
    }
}

/// Profile of `RΓ_m` of a complex of base modules.
pub fn complex_profile(c: &FreeComplex) -> Result<TorsionProfile, DgError> {
    let base = c.base().clone();
    let mut entries = BTreeMap::new();
    if c.is_zero_complex() {
        return Ok(TorsionProfile::summarize(entries, c.window, true));
    }
    if base.is_artinian() {
        let top = base.top_degree().unwrap_or(0);
        let (lo, hi) = (c.window.lo.unwrap_or(c.lo()).max(c.lo()), c.window.hi.unwrap_or(c.hi()).min(c.hi()));
        for i in lo..=hi {
            let nonzero = !c.cohomology_vanishes(i)?;
            let hilbert = if nonzero {
                let h = c.cohomology_unchecked(i)?.module;
                let gmin = h.gen_degrees.iter().copied().min().unwrap_or(0);
                let gmax = h.gen_degrees.iter().copied().max().unwrap_or(0);
                hilbert_rows(&h, gmin..=gmax + top, |t| t).into_iter().filter(|(_, d)| *d > 0).collect()
            } else {
                Vec::new()
            };
            entries.insert(i, ProfileEntry { nonzero, hilbert });
        }
        let complete = c.window.lo.is_none_or(|l| l <= c.lo()) && c.window.hi.is_none_or(|h| h >= c.hi());
        return Ok(TorsionProfile::summarize(entries, c.window, complete));
    }
    let n = base.nvars() as i64;
    let sigma = base.canonical_twist();
    let g = free_model(c)?;
    let gd = g.dual()?;
    let window = Window { lo: c.window.lo.map(|l| l + n), hi: c.window.hi };
    let (lo, hi) = (c.lo(), c.hi() + n);
    for i in lo..=hi {
        if !window.contains(i) {
            continue;
        }
        let j = n - i;
        let nonzero = gd.rank(j) > 0 && !gd.cohomology_vanishes(j)?;
        let hilbert = if nonzero {
            let e = gd.cohomology_unchecked(j)?.module;
            let gmin = e.gen_degrees.iter().copied().min().unwrap_or(0);
            let tmax = -gmin - sigma;
            hilbert_rows(&e, tmax - 3..=tmax, |t| -t - sigma)
        } else {
            Vec::new()
        };
        entries.insert(i, ProfileEntry { nonzero, hilbert });
    }
    let complete = window.lo.is_none_or(|l| l <= lo) && window.hi.is_none_or(|h| h >= hi);
    Ok(TorsionProfile::summarize(entries, window, complete))
}

/// `RΓ_m(M)` computed over the base: torsion at the maximal ideal does not see the DG structure.
pub fn local_cohomology_profile(m: &DGModule) -> Result<TorsionProfile, DgError> {
    complex_profile(&m.cx)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthCert {
    /// `None` is `+∞` (exact `M`).
    pub depth: Option<i64>,
    pub via_ext: Option<i64>,
    /// Only computed for the maximal ideal.
    pub via_profile: Option<Option<i64>>,
    pub bound: i64,
}

/// `inf RHom_R(H^0(R)/I, M)`; for `I = m` cross-checked against `inf RΓ_m(M)`.
pub fn depth(m: &DGModule, ideal: Option<&Ideal>, bound: i64) -> Result<DepthCert, DgError> {
    let alg = &m.alg;
    let max = Ideal::maximal(alg.base.clone());
    let i = ideal.unwrap_or(&max);
    let is_max = i.contains_ideal(&max);
    let q = DGModule::quotient_ring(alg, i);
    if m.cx.cohomology_bounds()?.inf().is_none() {
        let via_profile = is_max.then_some(None);
        return Ok(DepthCert { depth: None, via_ext: None, via_profile, bound });
    }
    let mut b = bound.max(1);
    let via_ext = loop {
        let (x, prov) = derived_hom(&q, m, b)?;
        let top = prov.window.hi.unwrap_or(i64::MAX).min(x.cx.hi());
        let mut found = None;
        for j in x.cx.lo()..=top {
            if x.cx.rank(j) > 0 && !x.cx.cohomology_vanishes(j)? {
                found = Some(j);
                break;
            }
        }
        if let Some(j) = found {
            break Some(j);
        }
        if top >= x.cx.hi() {
            break None;
        }
        if b >= BOUND_CAP {
            return Err(DgError::BoundExhausted { bound: b, what: "depth: no nonzero Ext within the certified range".into() });
        }
        b = (b + 4).min(BOUND_CAP);
    };
    let via_profile = if is_max {
        let p = local_cohomology_profile(m)?;
        if !p.complete {
            return Err(DgError::Invalid("profile of an uncertified module".into()));
        }
        if p.inf != via_ext {
            return Err(DgError::Inconsistent(format!("depth formulas disagree: Ext gives {:?}, local cohomology gives {:?}", via_ext, p.inf)));
        }
        Some(p.inf)
    } else {
        None
    };
    Ok(DepthCert { depth: via_ext, via_ext, via_profile, bound: b })
}

/// `Γ_I(N) = ∪_t (0 :_N I^t)`, stopping when two consecutive terms agree.
pub fn torsion_saturation(i: &Ideal, n: &PresentedModule) -> SubModule {
    let base = &n.base;
    let g = n.rank();
    let tw = &n.gen_degrees;
    if g == 0 {
        return SubModule { ambient: n.clone(), gens: Vec::new() };
    }
    let mut power: Vec<Poly> = vec![base.one()];
    let mut prev: Option<Vec<Vector>> = None;
    loop {
        power = crate::algebra::ideal::minimal_ideal_gens(base, &power.iter().flat_map(|p| i.gens.iter().map(move |q| base.reduce(&p.mul(q)))).filter(|p| !p.is_zero()).collect::<Vec<_>>());
        let gens = if power.is_empty() {
            (0..g).map(|c| unit_vec(base, g, c)).collect()
        } else {
            // n ↦ (p_1 n, ..., p_k n) into N^k with shifted twists
            let k = power.len();
            let mut target_tw = Vec::with_capacity(g * k);
            for p in &power {
                let d = p.homogeneous_degree().unwrap_or(0);
                target_tw.extend(tw.iter().map(|t| t + d));
            }
            let cols: Vec<Vector> = (0..g)
                .map(|c| {
                    let mut v = vec![base.zero(); g * k];
                    for (b, p) in power.iter().enumerate() {
                        v[b * g + c] = p.clone();
                    }
                    v
                })
                .collect();
            let mut rels = Vec::new();
            for b in 0..k {
                for r in &n.relations {
                    let mut v = vec![base.zero(); g * k];
                    v[b * g..(b + 1) * g].clone_from_slice(r);
                    rels.push(v);
                }
            }
            kernel(base, &target_tw, &cols, tw, &rels)
        };
        let sub = SubModule { ambient: n.clone(), gens: gens.clone() };
        if let Some(p) = &prev {
            if sub.same_as(&SubModule { ambient: n.clone(), gens: p.clone() }) {
                return sub;
            }
        }
        if power.is_empty() {
            return sub;
        }
        prev = Some(gens);
    }
}

/// `inf K(sop; M) + |sop|`, after checking that `sop` is a system of parameters of `H^0(R)`.
pub fn koszul_depth(m: &DGModule, sop: &[Poly]) -> Result<Option<i64>, DgError> {
    let alg = &m.alg;
    let h0 = alg.h0_ideal();
    let d = h0.krull_dimension().unwrap_or(0);
    if sop.len() != d {
        return Err(DgError::NotSystemOfParameters { dimension: d, len: sop.len() });
    }
    let q = h0.sum(&Ideal::new(alg.base.clone(), sop.to_vec())?);
    let rest = q.krull_dimension().unwrap_or(0);
    if rest != 0 {
        return Err(DgError::NotSystemOfParameters { dimension: rest, len: sop.len() });
    }
    let k = DGModule::koszul_dg_module(sop, m);
    Ok(k.cx.cohomology_bounds()?.inf().map(|i| i + sop.len() as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiCertificate {
    pub index: i64,
    pub nonzero: bool,
    /// `Ext^i_R(k, N) != 0`.
    pub source_nonzero: bool,
    /// The chain-level matrix whose induced map is tested (rows: target basis, as text).
    pub matrix: Vec<Vec<String>>,
    /// Number of cohomology generators with nonzero image.
    pub witnesses: usize,
    pub bound: i64,
    pub route: String,
}

fn matrix_text(cols: &[Vector], rows: usize) -> Vec<Vec<String>> {
    (0..rows).map(|r| cols.iter().map(|c| c[r].to_string()).collect()).collect()
}

/// `ξ^i_N: Ext^i_R(k, N) → H^i_m(N)`, induced by `R → k`; decided through base duality.
pub fn xi_nonzero(i: i64, n: &DGModule, d: &DGModule, bound: i64) -> Result<XiCertificate, DgError> {
    if d.cx.cohomology_bounds()?.inf() != Some(0) {
        return Err(DgError::Invalid("dualizing module is not right-normalized".into()));
    }
    let alg = &n.alg;
    let base = alg.base.clone();
    let k = DGModule::residue_field(alg);
    let b = bound.max(i + 2 - n.cx.lo()).max(1);
    let rk = semifree_resolution(&k, b)?;
    let x = hom_from(&rk.f, n);
    if x.window().hi.is_some_and(|h| h < i + 1) {
        return Err(DgError::BoundExhausted { bound: b, what: "Ext(k, N) not certified in the needed degree".into() });
    }
    let source_nonzero = x.cx.rank(i) > 0 && !x.cx.cohomology_vanishes(i)?;
    // ε: X → N is the projection onto the block of the degree-0 generator
    let eps = |j: i64, v: &[Poly]| -> Vector { v[..n.cx.rank(j)].to_vec() };
    debug_assert!(rk.f.gens.first().is_some_and(|g| g.deg == 0));
    if base.is_artinian() {
        let z = if x.cx.rank(i) == 0 { Vec::new() } else { x.cx.cycles(i) };
        let gb = span_basis(&base, n.cx.twists(i), &n.cx.boundaries(i));
        let witnesses = z.iter().filter(|v| !gb.contains(&ModVec::from_dense(gb.ctx(), &eps(i, v)))).count();
        let cols: Vec<Vector> = (0..x.cx.rank(i)).map(|c| eps(i, &unit_vec(&base, x.cx.rank(i), c))).collect();
        return Ok(XiCertificate { index: i, nonzero: witnesses > 0, source_nonzero, matrix: matrix_text(&cols, n.cx.rank(i)), witnesses, bound: b, route: "artinian".into() });
    }
    let (gn, rn) = base_resolution(&n.cx, 0)?;
    let (gx, rx) = base_resolution(&x.cx, 0)?;
    let psi = lift_through(&rx, &rn, &x, n, eps)?;
    let nv = base.nvars() as i64;
    let jd = nv - i;
    let gnd = gn.dual()?;
    let gxd = gx.dual()?;
    // ψ^{-jd}: G_X^{-jd} → G_N^{-jd}, by columns
    let p = -jd;
    let cols: Vec<Vector> = (0..rx.f.rank()).filter(|&g| rx.f.gens[g].deg == p).map(|g| psi[g].clone()).collect();
    let z = if gnd.rank(jd) == 0 { Vec::new() } else { gnd.cycles(jd) };
    let gb = span_basis(&base, gxd.twists(jd), &gxd.boundaries(jd));
    let mut witnesses = 0;
    for lam in &z {
        let img: Vector = cols.iter().map(|c| c.iter().zip(lam).fold(base.zero(), |acc, (a, l)| acc.add(&a.mul(l)))).map(|q| base.reduce(&q)).collect();
        if img.is_empty() {
            continue;
        }
        if !gb.contains(&ModVec::from_dense(gb.ctx(), &img)) {
            witnesses += 1;
        }
    }
    Ok(XiCertificate { index: i, nonzero: witnesses > 0, source_nonzero, matrix: matrix_text(&cols, gn.rank(p)), witnesses, bound: b, route: "polynomial-duality".into() })
}

/// Lifts `ε: X → N` to `ψ: G_X → G_N` between base resolutions, generator by generator,
/// with a homotopy `h` so that `φ_N ψ - ε φ_X = d h + h d`.
fn lift_through(rx: &Resolution, rn: &Resolution, x: &DGModule, n: &DGModule, eps: impl Fn(i64, &[Poly]) -> Vector) -> Result<Vec<Vector>, DgError> {
    let base = x.alg.base.clone();
    let mut psi: Vec<Vector> = Vec::with_capacity(rx.f.rank());
    let mut h: Vec<Vector> = Vec::with_capacity(rx.f.rank());
    let mut lifters: BTreeMap<i64, (Lifter, usize)> = BTreeMap::new();
    for (g, gen) in rx.f.gens.iter().enumerate() {
        let p = gen.deg;
        let (np, gp1) = (n.cx.rank(p), rn.f.layer(p + 1).len());
        let mut t1 = eps(p, &rx.phi[g]);
        let mut t2 = vec![base.zero(); gp1];
        for (_, w, c) in &rx.f.dgen[g] {
            for (k, q) in h[*w].iter().enumerate() {
                t1[k] = t1[k].add(&q.mul(c));
            }
            for (k, q) in psi[*w].iter().enumerate() {
                t2[k] = t2[k].sub(&q.mul(c));
            }
        }
        let mut target = t1;
        target.extend(t2);
        lifters.entry(p).or_insert_with(|| {
            // columns of d on C^{p-1} = N^{p-1} ⊕ G_N^p into C^p = N^p ⊕ G_N^{p+1}
            let lp = rn.f.layer(p);
            let lp1 = rn.f.layer(p + 1);
            let nm1 = n.cx.rank(p - 1);
            let mut cols = Vec::new();
            for c in 0..nm1 {
                let mut v = n.cx.apply_d(p - 1, &unit_vec(&base, nm1, c));
                v.extend(vec![base.zero(); gp1]);
                cols.push(v);
            }
            for &(v, b) in &lp.basis {
                let mut col = rn.phi_elem(v, b);
                col.extend(rn.f.d_elem(v, b, &lp1).iter().map(|q| q.neg()));
                cols.push(col);
            }
            let mut tw = n.cx.twists(p).to_vec();
            tw.extend_from_slice(&lp1.twists);
            let mut cdeg = n.cx.twists(p - 1).to_vec();
            cdeg.extend_from_slice(&lp.twists);
            let rels: Vec<Vector> = n.cx.rels(p).iter().map(|r| crate::complexes::pad(&base, r, 0, np + gp1)).collect();
            (Lifter::new(&base, &tw, &cols, &cdeg, &rels), nm1)
        });
        let (lifter, nm1) = &lifters[&p];
        let sol = lifter.lift(&target).ok_or_else(|| DgError::Invalid(format!("could not lift the comparison map at degree {p}")))?;
        h.push(sol[..*nm1].iter().map(|q| q.neg()).collect());
        psi.push(sol[*nm1..].to_vec());
    }
    Ok(psi)
}

/// `H^0` of a module as an `H^0(R)`-module in degree 0.
pub fn h0_module(m: &DGModule) -> Result<DGModule, DgError> {
    let h = m.cx.cohomology_at(0)?.module;
    Ok(DGModule::from_h0_module(&m.alg, &h))
}

/// Minimal presentation of `H^i` of a module.
pub fn cohomology_module(m: &DGModule, i: i64) -> Result<PresentedModule, DgError> {
    Ok(m.cx.cohomology_at(i)?.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use crate::algebra::BaseRing;
    use crate::algebra::{Field, MonoOrder, PolyRing};
    use crate::dg::algebra::DGAlgebra;
    use crate::dg::dualizing::gorenstein_dualizing;

    fn poly_base(n: usize) -> Arc<BaseRing> {
        let vars = ["x", "y", "z"][..n].iter().map(|v| (v.to_string(), 1)).collect();
        BaseRing::polynomial(PolyRing::new(Field::Rational, vars, MonoOrder::GRevLex))
    }

    fn inst_a() -> (Arc<BaseRing>, Arc<DGAlgebra>) {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        (b, r)
    }

    #[test]
    fn profiles() {
        let b = poly_base(2);
        let t = DGAlgebra::trivial(b.clone());
        let p = local_cohomology_profile(&DGModule::ring(&t)).unwrap();
        assert_eq!(p.support(), vec![2]);
        assert_eq!(p.entries[&2].hilbert.last(), Some(&(-2, 1)));
        let (_, r) = inst_a();
        let p = local_cohomology_profile(&DGModule::ring(&r)).unwrap();
        assert_eq!(p.support(), vec![0, 1]);
        assert_eq!(p.amp, Some(1));
        let ring = PolyRing::new(Field::Prime(5), vec![("x".into(), 1)], MonoOrder::GRevLex);
        let art = BaseRing::quotient(ring.clone(), vec![Poly::var(&ring, 0).pow(3)]).unwrap();
        let p = local_cohomology_profile(&DGModule::ring(&DGAlgebra::trivial(art))).unwrap();
        assert_eq!(p.support(), vec![0]);
        assert_eq!(p.entries[&0].hilbert, vec![(0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn depths_agree() {
        let b = poly_base(2);
        let t = DGAlgebra::trivial(b.clone());
        assert_eq!(depth(&DGModule::ring(&t), None, 3).unwrap().depth, Some(2));
        assert_eq!(depth(&DGModule::residue_field(&t), None, 3).unwrap().depth, Some(0));
        let (_, r) = inst_a();
        let c = depth(&DGModule::ring(&r), None, 3).unwrap();
        assert_eq!(c.depth, Some(0));
        assert_eq!(c.via_profile, Some(Some(0)));
        let i = Ideal::new(b.clone(), vec![b.var(1)]).unwrap();
        assert_eq!(depth(&DGModule::ring(&t), Some(&i), 3).unwrap().depth, Some(1));
    }

    #[test]
    fn saturations() {
        let b = poly_base(2);
        let (x, y) = (b.var(0), b.var(1));
        let m = Ideal::maximal(b.clone());
        assert!(torsion_saturation(&m, &PresentedModule::ring(b.clone())).is_zero());
        let ix = Ideal::new(b.clone(), vec![x.clone()]).unwrap();
        let n = PresentedModule::cyclic(b.clone(), &[x.mul(&x)]);
        let s = torsion_saturation(&ix, &n);
        assert!(s.same_as(&SubModule { ambient: n.clone(), gens: vec![vec![b.one()]] }));
        let n = PresentedModule::cyclic(b.clone(), &[x.mul(&y)]);
        let s = torsion_saturation(&ix, &n);
        assert!(s.same_as(&SubModule { ambient: n.clone(), gens: vec![vec![y.clone()]] }));
    }

    #[test]
    fn koszul_depths() {
        let b = poly_base(2);
        let t = DGAlgebra::trivial(b.clone());
        assert_eq!(koszul_depth(&DGModule::ring(&t), &b.vars()).unwrap(), Some(2));
        assert!(matches!(koszul_depth(&DGModule::ring(&t), &[b.var(0), b.var(0)]), Err(DgError::NotSystemOfParameters { .. })));
        let (_, r) = inst_a();
        assert_eq!(koszul_depth(&DGModule::ring(&r), &[b.var(1)]).unwrap(), Some(0));
    }

    #[test]
    fn canonical_element_map() {
        let b = poly_base(2);
        let t = DGAlgebra::trivial(b.clone());
        let d = gorenstein_dualizing(&t).unwrap();
        let n = h0_module(&d).unwrap();
        let c = xi_nonzero(2, &n, &d, 3).unwrap();
        assert!(c.nonzero && c.source_nonzero);
        let c = xi_nonzero(1, &n, &d, 3).unwrap();
        assert!(!c.nonzero && !c.source_nonzero);
        let (_, r) = inst_a();
        let d = gorenstein_dualizing(&r).unwrap();
        let n = h0_module(&d).unwrap();
        let c = xi_nonzero(1, &n, &d, 3).unwrap();
        assert!(c.nonzero, "{c:?}");
        assert!(!xi_nonzero(0, &n, &d, 3).unwrap().nonzero);
    }
}
