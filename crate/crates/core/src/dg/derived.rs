//! Derived tensor and Hom over a DG-ring through semi-free resolutions.

use serde::Serialize;

use crate::algebra::module::{zero_vec, Vector};
use crate::complexes::{pad, CohomBounds, FreeComplex, Slot, Window};

use super::module::DGModule;
use super::resolve::{semifree_resolution, Resolution, SemiFree};
use super::DgError;

fn odd(i: i64) -> bool {
    i.rem_euclid(2) == 1
}

/// Where a derived-functor complex came from and which degrees it can be trusted in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub bound: i64,
    /// Degrees lost to the truncation of the resolution, relative to `-bound`.
    pub slack: i64,
    pub window: Window,
    pub generators: usize,
    pub complete: bool,
}

/// Index of `(v, m)` pairs in one degree: `offsets[v]` is the start of generator `v`'s block.
struct Blocks {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    total: usize,
}

impl Blocks {
    fn new(sizes: Vec<usize>) -> Blocks {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0;
        for s in &sizes {
            offsets.push(total);
            total += s;
        }
        Blocks { offsets, sizes, total }
    }
}

/// `F ⊗_R N`: degree `n` is `⊕_v N^{n-|v|}`; `d(v ⊗ m) = Σ c (-1)^{|b||w|} w ⊗ b m + (-1)^{|v|} v ⊗ dm`.
pub fn tensor_over(f: &SemiFree, n: &DGModule) -> DGModule {
    let alg = f.alg.clone();
    let base = alg.base.clone();
    if f.gens.is_empty() || n.cx.is_zero_complex() {
        return DGModule::from_action(alg, FreeComplex::zero(base), |_, _, _| Vec::new());
    }
    let (nlo, nhi) = (n.cx.lo(), n.cx.hi());
    let lo = f.bottom_generator().unwrap() + nlo;
    let hi = f.top().unwrap() + nhi;
    let blocks: Vec<Blocks> = (lo..=hi + 1).map(|d| Blocks::new(f.gens.iter().map(|g| n.cx.rank(d - g.deg)).collect())).collect();
    let blk = |d: i64| &blocks[(d - lo) as usize];
    let mut slots = Vec::new();
    let mut diffs = Vec::new();
    for d in lo..=hi {
        let (here, next) = (blk(d), blk(d + 1));
        let mut twists = Vec::with_capacity(here.total);
        let mut rels = Vec::new();
        let mut cols = Vec::with_capacity(here.total);
        for (v, g) in f.gens.iter().enumerate() {
            let i = d - g.deg;
            twists.extend(n.cx.twists(i).iter().map(|t| t + g.twist));
            rels.extend(n.cx.rels(i).iter().map(|r| pad(&base, r, here.offsets[v], here.total)));
            for mi in 0..here.sizes[v] {
                let e = crate::algebra::module::unit_vec(&base, n.cx.rank(i), mi);
                let mut col = zero_vec(&base, next.total);
                let dm = n.cx.apply_d(i, &e);
                for (k, p) in dm.iter().enumerate() {
                    let t = if odd(g.deg) { p.neg() } else { p.clone() };
                    col[next.offsets[v] + k] = col[next.offsets[v] + k].add(&t);
                }
                for (b, w, c) in &f.dgen[v] {
                    let wd = f.gens[*w].deg;
                    let bm = n.act(*b, i, &e);
                    let sign = odd(alg.deg(*b) * wd);
                    for (k, p) in bm.iter().enumerate() {
                        if p.is_zero() {
                            continue;
                        }
                        let t = p.mul(c);
                        let t = if sign { t.neg() } else { t };
                        col[next.offsets[*w] + k] = col[next.offsets[*w] + k].add(&t);
                    }
                }
                cols.push(col.iter().map(|p| base.reduce(p)).collect());
            }
        }
        slots.push(Slot { twists, rels });
        diffs.push(cols);
    }
    let window = tensor_window(f, n);
    let cx = FreeComplex::from_parts(base.clone(), lo, slots, diffs, window);
    let gdeg: Vec<i64> = f.gens.iter().map(|g| g.deg).collect();
    DGModule::from_action(alg.clone(), cx.clone(), |a, d, idx| {
        let here = blk(d);
        let v = (0..gdeg.len()).rev().find(|&v| here.offsets[v] <= idx && here.sizes[v] > 0 && idx < here.offsets[v] + here.sizes[v]).unwrap();
        let i = d - gdeg[v];
        let e = crate::algebra::module::unit_vec(&base, n.cx.rank(i), idx - here.offsets[v]);
        let am = n.act(a, i, &e);
        let t = d + alg.deg(a);
        let mut out = zero_vec(&base, cx.rank(t));
        if t < lo || t > hi {
            return out;
        }
        let tb = blk(t);
        let sign = odd(alg.deg(a) * gdeg[v]);
        for (k, p) in am.iter().enumerate() {
            out[tb.offsets[v] + k] = if sign { p.neg() } else { p.clone() };
        }
        out
    })
}

fn tensor_window(f: &SemiFree, n: &DGModule) -> Window {
    let mut w = Window::FULL;
    if let Some(cut) = f.cut {
        w.lo = Some(cut + n.cx.hi() + 1);
    }
    if let Some(l) = n.window().lo {
        let t = l + f.top().unwrap_or(0);
        w.lo = Some(w.lo.map_or(t, |x| x.max(t)));
    }
    if let Some(h) = n.window().hi {
        // errors above h propagate down to h + (lowest generator) only when F is complete
        let t = if f.cut.is_some() { i64::MIN } else { h + f.bottom_generator().unwrap_or(0) };
        w.hi = Some(t);
    }
    w
}

/// `Hom_R(F, N)`: degree `j` is `⊕_v N^{|v|+j}`, basis `(v, m)` of twist `tw(m) - tw(v)`;
/// `(dφ)(v) = d(φ(v)) - (-1)^j φ(dv)`, `(aφ)(v) = a φ(v)`.
pub fn hom_from(f: &SemiFree, n: &DGModule) -> DGModule {
    let alg = f.alg.clone();
    let base = alg.base.clone();
    if f.gens.is_empty() || n.cx.is_zero_complex() {
        return DGModule::from_action(alg, FreeComplex::zero(base), |_, _, _| Vec::new());
    }
    let (nlo, nhi) = (n.cx.lo(), n.cx.hi());
    let lo = nlo - f.top().unwrap();
    let hi = nhi - f.bottom_generator().unwrap();
    let blocks: Vec<Blocks> = (lo..=hi + 1).map(|j| Blocks::new(f.gens.iter().map(|g| n.cx.rank(g.deg + j)).collect())).collect();
    let blk = |j: i64| &blocks[(j - lo) as usize];
    // reverse index of the differential: for each w, the list of (v, b, c) with (b, w, c) in d v
    let mut users: Vec<Vec<(usize, usize, &crate::algebra::Poly)>> = vec![Vec::new(); f.gens.len()];
    for (v, dv) in f.dgen.iter().enumerate() {
        for (b, w, c) in dv {
            users[*w].push((v, *b, c));
        }
    }
    let mut slots = Vec::new();
    let mut diffs = Vec::new();
    for j in lo..=hi {
        let (here, next) = (blk(j), blk(j + 1));
        let mut twists = Vec::with_capacity(here.total);
        let mut rels = Vec::new();
        let mut cols = Vec::with_capacity(here.total);
        for (w, g) in f.gens.iter().enumerate() {
            let i = g.deg + j;
            twists.extend(n.cx.twists(i).iter().map(|t| t - g.twist));
            rels.extend(n.cx.rels(i).iter().map(|r| pad(&base, r, here.offsets[w], here.total)));
            for mi in 0..here.sizes[w] {
                let e = crate::algebra::module::unit_vec(&base, n.cx.rank(i), mi);
                let mut col = zero_vec(&base, next.total);
                for (k, p) in n.cx.apply_d(i, &e).iter().enumerate() {
                    col[next.offsets[w] + k] = p.clone();
                }
                for &(v, b, c) in &users[w] {
                    // component at v: -(-1)^j (-1)^{j|b|} c b m, in N^{|v|+j+1}
                    let bm = n.act(b, i, &e);
                    let neg = !odd(j + j * alg.deg(b));
                    for (k, p) in bm.iter().enumerate() {
                        if p.is_zero() {
                            continue;
                        }
                        let t = p.mul(c);
                        let t = if neg { t.neg() } else { t };
                        col[next.offsets[v] + k] = col[next.offsets[v] + k].add(&t);
                    }
                }
                cols.push(col.iter().map(|p| base.reduce(p)).collect());
            }
        }
        slots.push(Slot { twists, rels });
        diffs.push(cols);
    }
    let window = hom_window(f, n);
    let cx = FreeComplex::from_parts(base.clone(), lo, slots, diffs, window);
    let gdeg: Vec<i64> = f.gens.iter().map(|g| g.deg).collect();
    DGModule::from_action(alg.clone(), cx.clone(), |a, j, idx| {
        let here = blk(j);
        let w = (0..gdeg.len()).find(|&w| here.sizes[w] > 0 && here.offsets[w] <= idx && idx < here.offsets[w] + here.sizes[w]).unwrap();
        let i = gdeg[w] + j;
        let e = crate::algebra::module::unit_vec(&base, n.cx.rank(i), idx - here.offsets[w]);
        let am = n.act(a, i, &e);
        let t = j + alg.deg(a);
        let mut out = zero_vec(&base, cx.rank(t));
        if t < lo || t > hi {
            return out;
        }
        let tb = blk(t);
        for (k, p) in am.iter().enumerate() {
            out[tb.offsets[w] + k] = p.clone();
        }
        out
    })
}

fn hom_window(f: &SemiFree, n: &DGModule) -> Window {
    let mut w = Window::FULL;
    if let Some(cut) = f.cut {
        w.hi = Some(n.cx.lo() - cut - 1);
    }
    if let Some(h) = n.window().hi {
        let t = h - f.top().unwrap_or(0) - 1;
        w.hi = Some(w.hi.map_or(t, |x| x.min(t)));
    }
    if let Some(l) = n.window().lo {
        let t = if f.cut.is_some() { i64::MAX } else { l - f.bottom_generator().unwrap_or(0) + 1 };
        w.lo = Some(t);
    }
    w
}

/// `M ⊗^L_R N`, resolving `M`.
pub fn derived_tensor(m: &DGModule, n: &DGModule, bound: i64) -> Result<(DGModule, Provenance), DgError> {
    let r = semifree_resolution(m, bound)?;
    let t = tensor_over(&r.f, n);
    let prov = provenance(&r, bound, t.window(), |w| w.lo.map_or(0, |l| l + bound));
    certify_some(&t, &prov)?;
    Ok((t, prov))
}

/// `RHom_R(M, N)`, resolving `M`.
pub fn derived_hom(m: &DGModule, n: &DGModule, bound: i64) -> Result<(DGModule, Provenance), DgError> {
    let r = semifree_resolution(m, bound)?;
    let h = hom_from(&r.f, n);
    let prov = provenance(&r, bound, h.window(), |w| w.hi.map_or(0, |h| bound - h));
    certify_some(&h, &prov)?;
    Ok((h, prov))
}

fn provenance(r: &Resolution, bound: i64, window: Window, slack: impl Fn(&Window) -> i64) -> Provenance {
    Provenance { bound, slack: slack(&window), window, generators: r.f.rank(), complete: r.cert.complete }
}

fn certify_some(c: &DGModule, p: &Provenance) -> Result<(), DgError> {
    if c.cx.is_zero_complex() {
        return Ok(());
    }
    if let (Some(l), Some(h)) = (p.window.lo, p.window.hi) {
        if l > h {
            return Err(DgError::BoundExhausted { bound: p.bound, what: "no degree of the derived functor is certified".into() });
        }
    }
    Ok(())
}

/// Verdict of `projective_dimension`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProjDim {
    Finite(i64),
    Zero,
    NotFiniteWithinBound { bound: i64 },
}

/// `pd F = sup F - inf(k ⊗^L F)`, read from a minimal resolution (zero differential on `k ⊗ F`).
pub fn projective_dimension(m: &DGModule, bound: i64) -> Result<ProjDim, DgError> {
    let bounds = m.cx.cohomology_bounds()?;
    let CohomBounds::Range { sup, .. } = bounds else {
        return Ok(ProjDim::Zero);
    };
    let r = semifree_resolution(m, bound)?;
    if !r.cert.complete {
        return Ok(ProjDim::NotFiniteWithinBound { bound });
    }
    if !r.cert.minimal {
        return Err(DgError::Invalid("resolution is not minimal".into()));
    }
    let inf = r.f.bottom_generator().expect("nonzero module has generators");
    Ok(ProjDim::Finite(sup - inf))
}

/// `Tor`-style check: `k ⊗_R F` for a minimal `F` as a complex with zero differential.
pub fn residue_tensor(r: &Resolution) -> Vec<(i64, Vec<i64>)> {
    let mut out: Vec<(i64, Vec<i64>)> = Vec::new();
    for g in &r.f.gens {
        match out.iter_mut().find(|(d, _)| *d == g.deg) {
            Some((_, t)) => t.push(g.twist),
            None => out.push((g.deg, vec![g.twist])),
        }
    }
    out
}

/// Vectors of a hom-complex degree, split back into per-generator components.
pub fn hom_components(f: &SemiFree, n: &DGModule, j: i64, v: &[crate::algebra::Poly]) -> Vec<Vector> {
    let mut out = Vec::new();
    let mut at = 0;
    for g in &f.gens {
        let r = n.cx.rank(g.deg + j);
        out.push(v[at..at + r].to_vec());
        at += r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseRing, Field, MonoOrder, PolyRing};
    use crate::dg::algebra::DGAlgebra;
    use std::sync::Arc;

    fn poly_base(n: usize) -> Arc<BaseRing> {
        let vars = ["x", "y", "z"][..n].iter().map(|v| (v.to_string(), 1)).collect();
        BaseRing::polynomial(PolyRing::new(Field::Rational, vars, MonoOrder::GRevLex))
    }

    fn supp(m: &DGModule) -> Vec<i64> {
        let w = m.window();
        m.cx.support().unwrap().into_iter().filter(|i| w.contains(*i)).collect()
    }

    #[test]
    fn tor_and_ext_over_one_variable() {
        let b = poly_base(1);
        let t = DGAlgebra::trivial(b.clone());
        let k = DGModule::residue_field(&t);
        let (kk, _) = derived_tensor(&k, &k, 3).unwrap();
        kk.validate().unwrap();
        assert_eq!(supp(&kk), vec![-1, 0]);
        let (e, _) = derived_hom(&k, &DGModule::ring(&t), 3).unwrap();
        e.validate().unwrap();
        assert_eq!(supp(&e), vec![1]);
    }

    #[test]
    fn tensor_and_hom_with_the_ring() {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        let rr = DGModule::ring(&r);
        let (t, _) = derived_tensor(&rr, &rr, 3).unwrap();
        assert_eq!(supp(&t), vec![-1, 0]);
        let (h, _) = derived_hom(&rr, &rr, 3).unwrap();
        assert_eq!(supp(&h), vec![-1, 0]);
        h.validate().unwrap();
    }

    #[test]
    fn depth_of_koszul_ring_via_ext() {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        let k = DGModule::residue_field(&r);
        let (e, p) = derived_hom(&k, &DGModule::ring(&r), 4).unwrap();
        assert!(p.window.hi.is_some());
        let s = supp(&e);
        assert_eq!(s.first(), Some(&0));
    }

    #[test]
    fn projective_dimensions() {
        let b = poly_base(2);
        let t = DGAlgebra::trivial(b.clone());
        assert_eq!(projective_dimension(&DGModule::ring(&t), 4).unwrap(), ProjDim::Finite(0));
        assert_eq!(projective_dimension(&DGModule::residue_field(&t), 4).unwrap(), ProjDim::Finite(2));
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        assert_eq!(projective_dimension(&DGModule::residue_field(&r), 3).unwrap(), ProjDim::NotFiniteWithinBound { bound: 3 });
        let ky = DGModule::ring(&r).koszul_on(&b.var(1));
        assert_eq!(projective_dimension(&ky, 4).unwrap(), ProjDim::Finite(1));
    }

    #[test]
    fn balance_on_small_modules() {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x.clone()]).unwrap();
        let k = DGModule::residue_field(&r);
        let h0 = DGModule::from_h0_module(&r, &r.h0_presentation());
        let (a, _) = derived_tensor(&k, &h0, 4).unwrap();
        let (c, _) = derived_tensor(&h0, &k, 4).unwrap();
        let lo = a.window().lo.unwrap().max(c.window().lo.unwrap());
        for i in lo..=0 {
            for t in 0..4 {
                let da = if a.cx.rank(i) == 0 { 0 } else { a.cx.cohomology_hilbert(i, t..=t).unwrap()[0] };
                let dc = if c.cx.rank(i) == 0 { 0 } else { c.cx.cohomology_hilbert(i, t..=t).unwrap()[0] };
                assert_eq!(da, dc, "degree {i}, twist {t}");
            }
        }
    }
}
