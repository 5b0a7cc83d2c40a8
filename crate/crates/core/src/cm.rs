//! Cohen-Macaulay predicates, maximal Cohen-Macaulay DG-complexes, the existence
//! construction and the two theorem verifiers (Auslander-Buchsbaum, improved new intersection).
//!
//! `n = amp R` and `d = dim H^0(R)` are always recomputed from the DG-ring.

use std::sync::Arc;

use crate::algebra::ideal::Ideal;
use crate::algebra::module::kernel;
use crate::algebra::{Field, Poly};
use crate::complexes::{CohomBounds, Side, Window};
use crate::dg::derived::{derived_hom, derived_tensor, projective_dimension, ProjDim};
use crate::dg::dualizing::dagger;
use crate::dg::resolve::{semifree_resolution, Resolution};
use crate::dg::{DGAlgebra, DGModule, DgError};
use crate::local::{depth, local_cohomology_profile, xi_nonzero, TorsionProfile};
use crate::oracle::Echelon;
use crate::report::CertReport;

/// `amp R`, `dim H^0(R)` and the cohomological range of `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RingData {
    pub n: i64,
    pub d: i64,
    pub inf: i64,
    pub sup: i64,
}

pub fn ring_data(r: &Arc<DGAlgebra>) -> Result<RingData, DgError> {
    let (inf, sup) = match r.complex().cohomology_bounds()? {
        CohomBounds::Range { inf, sup } => (inf, sup),
        CohomBounds::Exact => return Err(DgError::Invalid("the DG-ring is acyclic".into())),
    };
    let d = r.h0_ideal().krull_dimension().ok_or_else(|| DgError::Invalid("H^0(R) is zero".into()))? as i64;
    Ok(RingData { n: sup - inf, d, inf, sup })
}

fn record_ring(rep: &mut CertReport, rd: &RingData) {
    rep.invariant("n", rd.n).invariant("d", rd.d);
}

fn show(v: Option<i64>) -> String {
    v.map_or("none".into(), |i| i.to_string())
}

/// `Supp H^{inf R}(R) = Spec H^0(R)`: every annihilator generator is nilpotent in `H^0(R)`.
pub fn has_constant_amplitude(r: &Arc<DGAlgebra>) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("constant-amplitude");
    record_ring(&mut rep, &rd);
    rep.invariant("inf R", rd.inf);
    let h = r.complex().cohomology_at(rd.inf)?.module;
    let nil = r.h0_ideal();
    let ann: Vec<Poly> = h.annihilator().into_iter().map(|p| r.base.reduce(&p)).filter(|p| !p.is_zero()).collect();
    let bad: Vec<String> = ann.iter().filter(|g| !nil.radical_contains(g)).map(|g| g.to_string()).collect();
    let witness = if bad.is_empty() { None } else { Some(format!("not nilpotent in H^0(R): {}", bad.join(", "))) };
    rep.condition("annihilator of H^inf(R) lies in the nilradical of H^0(R)", bad.is_empty(), witness);
    rep.invariant("annihilator generators", ann.len());
    Ok(rep.conclude())
}

/// Local Cohen-Macaulay: `amp R = amp RΓ_m(R)`.
pub fn classify_cm_ring(r: &Arc<DGAlgebra>) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("cm-ring");
    record_ring(&mut rep, &rd);
    let p = local_cohomology_profile(&DGModule::ring(r))?;
    rep.invariant("amp R", rd.n).invariant("amp RΓ(R)", p.amp).invariant("support RΓ(R)", p.support());
    rep.invariant("dimension zero", rd.d == 0);
    rep.condition("amp R = amp RΓ(R)", p.amp == Some(rd.n), Some(format!("{} vs {}", rd.n, show(p.amp))));
    Ok(rep.conclude())
}

fn bounds(m: &DGModule) -> Result<(Option<i64>, Option<i64>), DgError> {
    let b = m.cx.cohomology_bounds()?;
    Ok((b.inf(), b.sup()))
}

fn certified_profile(rep: &mut CertReport, m: &DGModule) -> Result<Option<TorsionProfile>, DgError> {
    let p = local_cohomology_profile(m)?;
    rep.invariant("support RΓ(M)", p.support());
    Ok(p.complete.then_some(p))
}

/// Maximal Cohen-Macaulay DG-module: `amp M = amp RΓ(M) = amp R` and `sup RΓ(M) = sup M + d`.
pub fn is_mcm_dgmodule(m: &DGModule, r: &Arc<DGAlgebra>) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("mcm-dg-module");
    record_ring(&mut rep, &rd);
    if !m.window().is_full() {
        return Ok(rep.exhausted(0, "M is only certified in a window"));
    }
    let (inf, sup) = bounds(m)?;
    let amp = inf.zip(sup).map(|(a, b)| b - a);
    rep.invariant("amp M", amp).invariant("sup M", sup);
    let Some(p) = certified_profile(&mut rep, m)? else {
        return Ok(rep.exhausted(0, "torsion profile is incomplete"));
    };
    rep.invariant("amp RΓ(M)", p.amp).invariant("sup RΓ(M)", p.sup);
    rep.condition("amp M = amp R", amp == Some(rd.n), Some(format!("{} vs {}", show(amp), rd.n)));
    rep.condition("amp RΓ(M) = amp R", p.amp == Some(rd.n), Some(format!("{} vs {}", show(p.amp), rd.n)));
    let want = sup.map(|s| s + rd.d);
    rep.condition("sup RΓ(M) = sup M + d", p.sup.is_some() && p.sup == want, Some(format!("{} vs {}", show(p.sup), show(want))));
    Ok(rep.conclude())
}

/// Whether `H^i(M) → H^i(M ⊗^L k)` is nonzero, read on a resolution `F → M`:
/// a cycle of `F^i` with a nonzero constant coefficient on some generator of degree `i`,
/// modulo the constant parts of the differential.
pub fn residue_map(m: &DGModule, i: i64, bound: i64) -> Result<(bool, Option<String>, Resolution), DgError> {
    let b = bound.max(2 - i);
    let res = semifree_resolution(m, b)?;
    let f = &res.f;
    let field: Field = m.base().field();
    let top: Vec<usize> = (0..f.rank()).filter(|&v| f.gens[v].deg == i).collect();
    if top.is_empty() {
        return Ok((false, None, res));
    }
    let slot = |v: usize| top.iter().position(|&w| w == v);
    let mut bnd = Echelon::new(field);
    for (w, g) in f.gens.iter().enumerate() {
        if g.deg != i - 1 {
            continue;
        }
        let mut row = vec![field.zero(); top.len()];
        for (a, u, c) in &f.dgen[w] {
            if *a == 0 {
                if let Some(k) = slot(*u) {
                    row[k] = row[k].add(&c.constant_term());
                }
            }
        }
        bnd.insert(&row);
    }
    let fc = f.complex();
    let layer = f.layer(i);
    for z in fc.cycles(i) {
        let mut row = vec![field.zero(); top.len()];
        for (pos, &(v, a)) in layer.basis.iter().enumerate() {
            if a == 0 {
                if let Some(k) = slot(v) {
                    row[k] = z[pos].constant_term();
                }
            }
        }
        if !bnd.contains(&row) {
            let txt: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            return Ok((true, Some(format!("cycle of degree {i} maps to ({})", txt.join(", "))), res));
        }
    }
    Ok((false, None, res))
}

/// Maximal depth: `H^n(M) → H^n(k ⊗^L M)` nonzero and `depth M = d`.
pub fn has_maximal_depth(m: &DGModule, r: &Arc<DGAlgebra>, bound: i64) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("maximal-depth");
    record_ring(&mut rep, &rd);
    rep.bound("resolution", bound);
    let (nz, w, _) = residue_map(m, rd.n, bound)?;
    rep.condition("H^n(M) -> H^n(k ⊗ M) is nonzero", nz, w);
    let dc = depth(m, None, bound)?;
    rep.invariant("depth", dc.depth);
    rep.condition("depth M = d", dc.depth == Some(rd.d), Some(format!("{} vs {}", show(dc.depth), rd.d)));
    Ok(rep.conclude())
}

/// The five conditions of a maximal Cohen-Macaulay DG-complex.
pub fn is_mcm_dgcomplex(m: &DGModule, r: &Arc<DGAlgebra>, bound: i64) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("mcm-dg-complex");
    record_ring(&mut rep, &rd);
    rep.bound("resolution", bound);
    let finite = m.window().is_full();
    rep.condition("M is finite", finite, (!finite).then(|| format!("certified only in {}", m.window())));
    if !finite {
        return Ok(rep.exhausted(bound, "M is only certified in a window"));
    }
    let (inf, sup) = bounds(m)?;
    rep.invariant("inf M", inf).invariant("sup M", sup);
    let (nz, w, _) = residue_map(m, rd.n, bound)?;
    rep.condition("H^n(M) -> H^n(M ⊗ k) is nonzero", nz, w);
    rep.condition("inf M = 0", inf == Some(0), Some(format!("inf M = {}", show(inf))));
    let Some(p) = certified_profile(&mut rep, m)? else {
        return Ok(rep.exhausted(bound, "torsion profile is incomplete"));
    };
    rep.invariant("amp RΓ(M)", p.amp);
    rep.condition("amp RΓ(M) = n", p.amp == Some(rd.n), Some(format!("{} vs {}", show(p.amp), rd.n)));
    let dc = depth(m, None, bound)?;
    rep.invariant("depth", dc.depth);
    rep.condition("depth M = d", dc.depth == Some(rd.d), Some(format!("{} vs {}", show(dc.depth), rd.d)));
    Ok(rep.conclude())
}

/// A model certified in degrees `≤ h` stands for the whole object once its cohomology is known
/// to vanish above `top ≤ h`; the truncation at `top` is then exact.
fn bounded_above(m: DGModule, top: i64) -> Option<DGModule> {
    match m.window().hi {
        None => Some(m),
        Some(h) if h >= top => {
            let lo = m.window().lo;
            Some(m.truncate(top, Side::AtMost).with_window(Window { lo, hi: None }))
        }
        Some(_) => None,
    }
}

fn check_normalized(d: &DGModule) -> Result<Option<i64>, DgError> {
    let (inf, sup) = bounds(d)?;
    Ok(if inf == Some(0) { sup } else { None })
}

/// The dual conditions, on `M† = RHom_R(M, D)` with `D` right-normalized:
/// `sup M† = 0`, `amp M† = n`, `sup RΓ(M†) = d` and `ξ^{d-n}_{M†} != 0`.
pub fn is_mcm_dgcomplex_dual(m: &DGModule, r: &Arc<DGAlgebra>, d: &DGModule, bound: i64) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("mcm-dg-complex-dual");
    record_ring(&mut rep, &rd);
    let Some(sup_d) = check_normalized(d)? else {
        return Ok(rep.reject("D is right-normalized (inf D = 0)"));
    };
    let finite = m.window().is_full();
    rep.condition("M is finite", finite, (!finite).then(|| format!("certified only in {}", m.window())));
    let (inf_m, _) = bounds(m)?;
    let Some(inf_m) = inf_m else {
        rep.condition("M is nonzero", false, None);
        return Ok(rep.conclude());
    };
    // H^i(M†) = 0 for i > sup D - inf M
    let top = sup_d - inf_m;
    let b = bound.max(top + 1);
    rep.bound("resolution", b);
    let (md, _) = dagger(m, d, b)?;
    let Some(md) = bounded_above(md, top) else {
        return Ok(rep.exhausted(b, "M† is not certified up to sup D - inf M"));
    };
    let (inf, sup) = bounds(&md)?;
    let amp = inf.zip(sup).map(|(a, b)| b - a);
    rep.invariant("inf M†", inf).invariant("sup M†", sup);
    rep.condition("sup M† = 0", sup == Some(0), Some(format!("sup M† = {}", show(sup))));
    rep.condition("amp M† = n", amp == Some(rd.n), Some(format!("{} vs {}", show(amp), rd.n)));
    let p = local_cohomology_profile(&md)?;
    rep.invariant("support RΓ(M†)", p.support());
    rep.condition("sup RΓ(M†) = d", p.sup == Some(rd.d), Some(format!("{} vs {}", show(p.sup), rd.d)));
    let i = rd.d - rd.n;
    let xi = xi_nonzero(i, &md, d, b)?;
    rep.invariant("xi witnesses", xi.witnesses);
    rep.condition("xi^{d-n} of M† is nonzero", xi.nonzero, Some(format!("{} nonzero classes via {}", xi.witnesses, xi.route)));
    Ok(rep.conclude())
}

/// Output of the existence construction.
#[derive(Clone, Debug)]
pub struct Construction {
    /// `RHom_R(Σ^n D^{≤n}, D)`; absent when a hypothesis fails.
    pub module: Option<DGModule>,
    pub report: CertReport,
}

/// `RHom_R(Σ^n D^{≤n}, D)` for `R` of constant amplitude with right-normalized `D`,
/// re-certified with the five conditions.
pub fn construct_mcm(r: &Arc<DGAlgebra>, d: Option<&DGModule>, bound: i64) -> Result<Construction, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("construct-mcm");
    record_ring(&mut rep, &rd);
    rep.bound("resolution", bound);
    let ca = has_constant_amplitude(r)?;
    if !ca.passed() {
        let w = ca.conditions.first().and_then(|c| c.witness.clone());
        rep.condition("R has constant amplitude", false, w);
        return Ok(Construction { module: None, report: rep.reject("R has constant amplitude") });
    }
    rep.condition("R has constant amplitude", true, None);
    let Some(d) = d else {
        return Ok(Construction { module: None, report: rep.reject("R admits a dualizing DG-module") });
    };
    if check_normalized(d)?.is_none() {
        return Ok(Construction { module: None, report: rep.reject("D is right-normalized (inf D = 0)") });
    }
    let dt = d.truncate(rd.n, Side::AtMost);
    let x = dt.shift(rd.n);
    let (h, prov) = derived_hom(&x, d, bound)?;
    rep.invariant("generators", prov.generators).invariant("complete", prov.complete);
    let (sup_d, inf_x) = (bounds(d)?.1.unwrap_or(0), bounds(&x)?.0.unwrap_or(0));
    let Some(h) = bounded_above(h, sup_d - inf_x) else {
        return Ok(Construction { module: None, report: rep.exhausted(bound, "RHom is not certified up to its top degree") });
    };
    let cert = is_mcm_dgcomplex(&h, r, bound)?;
    let w = cert.conditions.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect::<Vec<_>>();
    rep.condition("output is a maximal Cohen-Macaulay DG-complex", cert.passed(), (!w.is_empty()).then(|| w.join("; ")));
    for c in &cert.conditions {
        rep.condition(&format!("mcm: {}", c.name), c.holds, c.witness.clone());
    }
    Ok(Construction { module: Some(h), report: rep.conclude() })
}

fn pd_value(p: &ProjDim) -> Option<i64> {
    match p {
        ProjDim::Finite(v) => Some(*v),
        ProjDim::Zero => Some(i64::MIN),
        ProjDim::NotFiniteWithinBound { .. } => None,
    }
}

/// `depth(M ⊗^L F) = depth M - pd F` for `F` with `sup F = 0`.
pub fn verify_abf(m: &DGModule, f: &DGModule, bound: i64) -> Result<CertReport, DgError> {
    let mut rep = CertReport::new("abf");
    rep.bound("resolution", bound);
    let (_, sup_f) = bounds(f)?;
    rep.invariant("sup F", sup_f);
    if sup_f != Some(0) {
        return Ok(rep.reject("sup F = 0"));
    }
    let pd = projective_dimension(f, bound)?;
    let Some(pd) = pd_value(&pd) else {
        return Ok(rep.exhausted(bound, "pd F is not finite within the bound"));
    };
    let (t, prov) = derived_tensor(f, m, bound)?;
    if !prov.complete {
        return Ok(rep.exhausted(bound, "M ⊗ F is not certified in every degree"));
    }
    let dm = depth(m, None, bound)?;
    let dt = depth(&t, None, bound)?;
    rep.invariant("pd F", pd).invariant("depth M", dm.depth).invariant("depth M ⊗ F", dt.depth);
    let rhs = dm.depth.map(|x| x.saturating_sub(pd));
    rep.condition("depth(M ⊗ F) = depth M - pd F", dt.depth == rhs, Some(format!("{} vs {}", show(dt.depth), show(rhs))));
    Ok(rep.conclude())
}

/// Annihilator of generator `c` of a presented module, as an ideal of the base.
fn generator_annihilator(h: &crate::algebra::PresentedModule, c: usize) -> Result<Ideal, DgError> {
    let base = &h.base;
    let g = h.rank();
    let col = crate::algebra::module::unit_vec(base, g, c);
    let ker = kernel(base, &h.gen_degrees, &[col], &[h.gen_degrees[c]], &h.relations);
    Ok(Ideal::new(base.clone(), ker.into_iter().map(|v| v[0].clone()).collect())?)
}

/// `pd F + n ≥ dim H^0(R) - dim H^0(R)/I`, after checking the hypotheses on `F` and `I`.
pub fn verify_init(r: &Arc<DGAlgebra>, f: &DGModule, i: &Ideal, bound: i64) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("init");
    record_ring(&mut rep, &rd);
    rep.bound("resolution", bound);
    let h0 = r.h0_ideal();
    let (inf_f, sup_f) = bounds(f)?;
    rep.invariant("sup F", sup_f).invariant("inf F", inf_f);
    let mut failed: Option<&str> = None;
    if sup_f != Some(0) {
        failed = Some("sup F = 0");
    }
    let h0f = f.cx.cohomology_at(0)?.module;
    let (min, _) = h0f.minimize()?;
    let nonzero = min.rank() > 0;
    rep.condition("H^0(F) != 0", nonzero, None);
    if !nonzero {
        failed = failed.or(Some("H^0(F) != 0"));
    }
    let mut finite_len = true;
    for j in inf_f.unwrap_or(0)..=-1 {
        let hj = f.cx.cohomology_at(j)?.module;
        if hj.minimize()?.0.rank() == 0 {
            continue;
        }
        let ann = Ideal::new(r.base.clone(), hj.annihilator())?.sum(&h0);
        if ann.krull_dimension().is_some_and(|k| k > 0) {
            rep.condition("H^i(F) has finite length for i <= -1", false, Some(format!("H^{j}(F) has dimension {}", ann.krull_dimension().unwrap())));
            finite_len = false;
            break;
        }
    }
    if finite_len {
        rep.condition("H^i(F) has finite length for i <= -1", true, None);
    } else {
        failed = failed.or(Some("H^i(F) has finite length for i <= -1"));
    }
    let mut annihilates = None;
    for c in 0..min.rank() {
        let ann = generator_annihilator(&min, c)?.sum(&h0);
        if ann.contains_ideal(i) {
            annihilates = Some(c);
            break;
        }
    }
    rep.condition("I annihilates a minimal generator of H^0(F)", annihilates.is_some(), annihilates.map(|c| format!("generator {c}")));
    if annihilates.is_none() {
        failed = failed.or(Some("I annihilates a minimal generator of H^0(F)"));
    }
    let pd = projective_dimension(f, bound)?;
    let q = h0.sum(i);
    let dim_q = q.krull_dimension().map_or(-1, |k| k as i64);
    rep.invariant("dim H^0(R)/I", dim_q);
    let Some(pd) = pd_value(&pd) else {
        let rep = if let Some(h) = failed { rep.reject(h) } else { rep.exhausted(bound, "pd F is not finite within the bound") };
        return Ok(rep);
    };
    rep.invariant("pd F", pd);
    let slack = pd.saturating_add(rd.n).saturating_sub(rd.d - dim_q);
    rep.invariant("slack", slack);
    rep.condition("pd F + n >= dim H^0(R) - dim H^0(R)/I", slack >= 0, Some(format!("{pd} + {} >= {} - {dim_q}", rd.n, rd.d)));
    Ok(match failed {
        Some(h) => rep.reject(h),
        None => rep.conclude(),
    })
}

/// `depth(I, M) ≥ inf M`, with equality when `Γ_I(H^{inf M}(M)) != 0`.
pub fn depth_bound(m: &DGModule, i: Option<&Ideal>, bound: i64) -> Result<CertReport, DgError> {
    let mut rep = CertReport::new("depth-bound");
    let (inf, _) = bounds(m)?;
    let dc = depth(m, i, bound)?;
    rep.invariant("inf M", inf).invariant("depth", dc.depth);
    let Some(inf) = inf else {
        rep.condition("depth(I, M) >= inf M", dc.depth.is_none(), None);
        return Ok(rep.conclude());
    };
    rep.condition("depth(I, M) >= inf M", dc.depth.is_some_and(|x| x >= inf), None);
    let max = Ideal::maximal(m.alg.base.clone());
    let ideal = i.unwrap_or(&max);
    let h = m.cx.cohomology_at(inf)?.module;
    let torsion = !crate::local::torsion_saturation(ideal, &h).is_zero();
    rep.invariant("torsion in H^inf", torsion);
    rep.condition("equality when Γ_I(H^inf M) != 0", !torsion || dc.depth == Some(inf), None);
    Ok(rep.conclude())
}

/// Split lemma: with `M` of maximal depth, `sup F = 0` and `H^0(F) ⊗ k != 0`, `H^n(F ⊗^L M) != 0`.
pub fn split_check(m: &DGModule, f: &DGModule, r: &Arc<DGAlgebra>, bound: i64) -> Result<CertReport, DgError> {
    let rd = ring_data(r)?;
    let mut rep = CertReport::new("split");
    record_ring(&mut rep, &rd);
    if bounds(f)?.1 != Some(0) {
        return Ok(rep.reject("sup F = 0"));
    }
    let (t, prov) = derived_tensor(f, m, bound)?;
    if !prov.complete {
        return Ok(rep.exhausted(bound, "F has no finite resolution within the bound"));
    }
    let nz = t.cx.rank(rd.n) > 0 && !t.cx.cohomology_vanishes(rd.n)?;
    rep.condition("H^n(F ⊗ M) != 0", nz, None);
    Ok(rep.conclude())
}
