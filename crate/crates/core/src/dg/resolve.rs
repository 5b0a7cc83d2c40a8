//! Semi-free DG-modules and minimal resolutions by killing cycles.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::module::{kernel, select_minimal, span_basis, unit_vec, vec_degree, zero_vec, Vector};
use crate::algebra::{ModVec, Poly};
use crate::complexes::{pad, FreeComplex, Slot, Window};

use super::algebra::DGAlgebra;
use super::module::DGModule;
use super::DgError;

fn odd(i: i64) -> bool {
    i.rem_euclid(2) == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub deg: i64,
    pub twist: i64,
}

/// `F = ⊕ R v` with `d v = Σ c (b w)` over earlier generators `w`.
///
/// Generators are stored in non-increasing degree. When `cut = Some(L)`, generators of
/// degree `< L` were never adjoined.
#[derive(Clone, Debug)]
pub struct SemiFree {
    pub alg: Arc<DGAlgebra>,
    pub gens: Vec<Generator>,
    /// `dgen[v]`: entries `(b, w, c)` of `d v`.
    pub dgen: Vec<Vec<(usize, usize, Poly)>>,
    pub cut: Option<i64>,
}

/// Basis of one degree of a semi-free module: pairs `(v, b)` standing for `b v`.
pub struct Layer {
    pub basis: Vec<(usize, usize)>,
    pub twists: Vec<i64>,
    index: HashMap<(usize, usize), usize>,
}

impl Layer {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn get(&self, v: usize, b: usize) -> Option<usize> {
        self.index.get(&(v, b)).copied()
    }
}

impl SemiFree {
    pub fn empty(alg: &Arc<DGAlgebra>) -> SemiFree {
        SemiFree { alg: alg.clone(), gens: Vec::new(), dgen: Vec::new(), cut: None }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn top(&self) -> Option<i64> {
        self.gens.iter().map(|g| g.deg).max()
    }

    pub fn bottom_generator(&self) -> Option<i64> {
        self.gens.iter().map(|g| g.deg).min()
    }

    /// Lowest degree with a nonzero term.
    pub fn lo(&self) -> Option<i64> {
        self.bottom_generator().map(|g| g + self.alg.bottom())
    }

    pub fn layer(&self, n: i64) -> Layer {
        let mut basis = Vec::new();
        let mut twists = Vec::new();
        for (v, g) in self.gens.iter().enumerate() {
            for &b in self.alg.in_degree(n - g.deg) {
                basis.push((v, b));
                twists.push(g.twist + self.alg.basis[b].twist);
            }
        }
        let index = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        Layer { basis, twists, index }
    }

    /// `d(b v) = d(b) v + (-1)^{|b|} b d(v)` as a vector of `next`.
    pub fn d_elem(&self, v: usize, b: usize, next: &Layer) -> Vector {
        let base = &self.alg.base;
        let mut out = zero_vec(base, next.len());
        for (b2, c) in self.alg.d(b) {
            let k = next.get(v, *b2).expect("layer mismatch");
            out[k] = out[k].add(c);
        }
        let neg = odd(self.alg.deg(b));
        for (bk, w, c) in &self.dgen[v] {
            for (p, e) in self.alg.mul(b, *bk) {
                let k = next.get(*w, *p).expect("layer mismatch");
                let t = c.mul(e);
                out[k] = if neg { out[k].sub(&t) } else { out[k].add(&t) };
            }
        }
        out.iter().map(|p| base.reduce(p)).collect()
    }

    /// Underlying complex of base modules.
    pub fn complex(&self) -> FreeComplex {
        let base = self.alg.base.clone();
        let (Some(lo), Some(hi)) = (self.lo(), self.top()) else {
            return FreeComplex::zero(base);
        };
        let layers: Vec<Layer> = (lo..=hi + 1).map(|n| self.layer(n)).collect();
        let mut slots = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let k = (n - lo) as usize;
            slots.push(Slot { twists: layers[k].twists.clone(), rels: Vec::new() });
            diffs.push(layers[k].basis.iter().map(|&(v, b)| self.d_elem(v, b, &layers[k + 1])).collect());
        }
        FreeComplex::from_parts(base, lo, slots, diffs, Window::FULL)
    }

    /// `F` as a DG-module. Its own window is full: it is a genuine DG-module.
    pub fn module(&self) -> DGModule {
        let cx = self.complex();
        let alg = self.alg.clone();
        let lo = cx.lo();
        let layers: Vec<Layer> = (lo..=cx.hi()).map(|n| self.layer(n)).collect();
        DGModule::from_action(alg.clone(), cx.clone(), |a, i, m| {
            let (v, b) = layers[(i - lo) as usize].basis[m];
            let j = i + alg.deg(a);
            let mut out = zero_vec(&alg.base, cx.rank(j));
            if j < lo || j > cx.hi() {
                return out;
            }
            let target = &layers[(j - lo) as usize];
            for (p, e) in alg.mul(a, b) {
                let k = target.get(v, *p).expect("layer mismatch");
                out[k] = out[k].add(e);
            }
            out
        })
    }

    /// `F ⊗_R k` has zero differential: no `d v` has a unit coefficient on some `1 · w`.
    pub fn is_minimal(&self) -> bool {
        self.dgen.iter().all(|dv| dv.iter().all(|(b, _, c)| *b != 0 || c.constant_term().is_zero()))
    }

    /// Generator counts per degree.
    pub fn generator_counts(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for g in &self.gens {
            *out.entry(g.deg).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEvidence {
    pub degree: i64,
    pub generators: usize,
    /// `H^j` of the mapping cone vanishes, re-checked after adjoining.
    pub cone_acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionCert {
    pub bound: i64,
    pub window: Window,
    pub complete: bool,
    pub minimal: bool,
    pub evidence: Vec<DegreeEvidence>,
}

impl ResolutionCert {
    pub fn certified(&self) -> bool {
        self.evidence.iter().all(|e| e.cone_acyclic)
    }
}

/// `φ: F → M`, a quasi-isomorphism in degrees of `cert.window`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub f: SemiFree,
    /// `phi[v]` in `M^{|v|}`.
    pub phi: Vec<Vector>,
    pub target: DGModule,
    pub cert: ResolutionCert,
}

impl Resolution {
    /// `φ(b v) = b φ(v)`.
    pub fn phi_elem(&self, v: usize, b: usize) -> Vector {
        self.target.act(b, self.f.gens[v].deg, &self.phi[v])
    }

    /// The resolution as a DG-module, with the certified window attached.
    pub fn module(&self) -> DGModule {
        self.f.module().with_window(self.cert.window)
    }
}

/// Killing cycles top-down; every degree `j >= stop` of the mapping cone is made acyclic.
fn kill_cycles(m: &DGModule, stop: i64, bound: i64) -> Result<Resolution, DgError> {
    let alg = m.alg.clone();
    let base = alg.base.clone();
    let mut f = SemiFree::empty(&alg);
    let mut phi: Vec<Vector> = Vec::new();
    let mut evidence = Vec::new();
    if m.cx.is_zero_complex() {
        let cert = ResolutionCert { bound, window: m.window(), complete: true, minimal: true, evidence };
        return Ok(Resolution { f, phi, target: m.clone(), cert });
    }
    let (mlo, mhi) = (m.cx.lo(), m.cx.hi());
    let mut j = mhi;
    let complete = loop {
        let flo = f.lo().unwrap_or(i64::MAX);
        if j < mlo && j.saturating_add(1) < flo {
            break true;
        }
        if j < stop {
            break false;
        }
        let (l0, l1, l2) = (f.layer(j), f.layer(j + 1), f.layer(j + 2));
        let (r0, r1) = (l1.len(), m.cx.rank(j));
        let (s0, s1) = (l2.len(), m.cx.rank(j + 1));
        // columns of d on cone^j = F^{j+1} ⊕ M^j into cone^{j+1}
        let mut cols = Vec::with_capacity(r0 + r1);
        for &(v, b) in &l1.basis {
            let mut col: Vector = f.d_elem(v, b, &l2).iter().map(|p| p.neg()).collect();
            col.extend(m.act(b, f.gens[v].deg, &phi[v]));
            cols.push(col);
        }
        for c in 0..r1 {
            cols.push(pad(&base, &m.cx.apply_d(j, &unit_vec(&base, r1, c)), s0, s0 + s1));
        }
        let mut tw = l1.twists.clone();
        tw.extend_from_slice(m.cx.twists(j));
        let mut tw_next = l2.twists.clone();
        tw_next.extend_from_slice(m.cx.twists(j + 1));
        let rels_next: Vec<Vector> = m.cx.rels(j + 1).iter().map(|r| pad(&base, r, s0, s0 + s1)).collect();
        let z = if tw_next.is_empty() {
            (0..tw.len()).map(|c| unit_vec(&base, tw.len(), c)).collect()
        } else {
            kernel(&base, &tw_next, &cols, &tw, &rels_next)
        };
        let boundaries = |l0: &Layer, f: &SemiFree, phi: &[Vector]| -> Vec<Vector> {
            let mut out: Vec<Vector> = Vec::new();
            for &(v, b) in &l0.basis {
                let mut col: Vector = f.d_elem(v, b, &l1).iter().map(|p| p.neg()).collect();
                col.extend(m.act(b, f.gens[v].deg, &phi[v]));
                out.push(col);
            }
            let r = m.cx.rank(j - 1);
            for c in 0..r {
                out.push(pad(&base, &m.cx.apply_d(j - 1, &unit_vec(&base, r, c)), r0, r0 + r1));
            }
            out.extend(m.cx.rels(j).iter().map(|r| pad(&base, r, r0, r0 + r1)));
            out
        };
        let bnd = boundaries(&l0, &f, &phi);
        let keep = select_minimal(&base, &tw, &z, &bnd)?;
        for &k in &keep {
            let zv = &z[k];
            let twist = vec_degree(&tw, zv)?.unwrap_or(0);
            let mut dv = Vec::new();
            for (idx, p) in zv[..r0].iter().enumerate() {
                if !p.is_zero() {
                    let (w, b) = l1.basis[idx];
                    dv.push((b, w, p.neg()));
                }
            }
            f.gens.push(Generator { deg: j, twist });
            f.dgen.push(dv);
            phi.push(zv[r0..].to_vec());
        }
        let acyclic = if keep.is_empty() {
            true
        } else {
            let l0 = f.layer(j);
            let gb = span_basis(&base, &tw, &boundaries(&l0, &f, &phi));
            z.iter().all(|v| gb.contains(&ModVec::from_dense(gb.ctx(), v)))
        };
        evidence.push(DegreeEvidence { degree: j, generators: keep.len(), cone_acyclic: acyclic });
        j -= 1;
    };
    let window = if complete { m.window() } else { m.window().meet(&Window { lo: Some(stop + 1), hi: None }) };
    if !complete {
        f.cut = Some(stop);
    }
    let minimal = f.is_minimal();
    let cert = ResolutionCert { bound, window, complete, minimal, evidence };
    Ok(Resolution { f, phi, target: m.clone(), cert })
}

/// Minimal semi-free resolution, quasi-isomorphic to `M` in all degrees `>= -bound`.
pub fn semifree_resolution(m: &DGModule, bound: i64) -> Result<Resolution, DgError> {
    if bound < 1 {
        return Err(DgError::Invalid("bound must be positive".into()));
    }
    let r = kill_cycles(m, -bound - 1, bound)?;
    if !r.cert.certified() {
        return Err(DgError::Invalid("resolution failed its acyclicity re-check".into()));
    }
    Ok(r)
}

/// Resolution with an explicit stopping degree (the cone is acyclic in degrees `>= stop`).
pub fn resolve_to(m: &DGModule, stop: i64) -> Result<Resolution, DgError> {
    let r = kill_cycles(m, stop, -stop)?;
    if !r.cert.certified() {
        return Err(DgError::Invalid("resolution failed its acyclicity re-check".into()));
    }
    Ok(r)
}

/// A free model over the base of a complex with relations. Over a polynomial base the
/// resolution is finite and complete; over an Artinian base it stops `extra` steps
/// below the lowest term.
pub fn base_resolution(c: &FreeComplex, extra: i64) -> Result<(FreeComplex, Resolution), DgError> {
    let alg = DGAlgebra::trivial(c.base().clone());
    let m = DGModule::from_action(alg, c.clone(), |_, _, _| Vec::new());
    let n = c.base().nvars() as i64;
    let stop = if c.base().is_artinian() { c.lo() - extra } else { c.lo() - n - 2 };
    let r = resolve_to(&m, stop)?;
    if !c.base().is_artinian() && !r.cert.complete {
        return Err(DgError::BoundExhausted { bound: n + 2, what: "free resolution over a polynomial base".into() });
    }
    let model = r.f.complex().with_window(r.cert.window);
    Ok((model, r))
}

/// The chain map `F → M` of a resolution, as degreewise matrices of the underlying complexes.
pub fn comparison_map(r: &Resolution) -> Vec<(i64, Vec<Vector>)> {
    let cx = r.f.complex();
    (cx.lo()..=cx.hi())
        .map(|n| {
            let l = r.f.layer(n);
            (n, l.basis.iter().map(|&(v, b)| r.phi_elem(v, b)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseRing, Field, MonoOrder, PolyRing};
    use crate::complexes::ComplexMap;

    fn poly_base(n: usize) -> Arc<BaseRing> {
        let vars = ["x", "y", "z"][..n].iter().map(|v| (v.to_string(), 1)).collect();
        BaseRing::polynomial(PolyRing::new(Field::Rational, vars, MonoOrder::GRevLex))
    }

    fn check_quasi_iso(r: &Resolution) {
        let f = r.f.complex();
        let target = r.target.cx.clone();
        let maps: Vec<Vec<Vector>> = comparison_map(r).into_iter().map(|(_, m)| m).collect();
        let map = ComplexMap::new(f, target, maps).unwrap();
        let cone = map.cone();
        let lo = r.cert.window.lo.map_or(cone.lo(), |l| l.max(cone.lo()));
        for i in lo..=cone.hi() {
            assert!(cone.cohomology_vanishes(i).unwrap(), "cone has cohomology in degree {i}");
        }
    }

    #[test]
    fn ring_resolves_to_itself() {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        let res = semifree_resolution(&DGModule::ring(&r), 4).unwrap();
        assert_eq!(res.f.rank(), 1);
        assert!(res.cert.complete && res.cert.minimal);
    }

    #[test]
    fn residue_field_over_polynomial_rings() {
        let b = poly_base(1);
        let t = DGAlgebra::trivial(b.clone());
        let res = semifree_resolution(&DGModule::residue_field(&t), 3).unwrap();
        assert_eq!(res.f.generator_counts().into_iter().collect::<Vec<_>>(), vec![(-1, 1), (0, 1)]);
        assert!(res.cert.complete);
        check_quasi_iso(&res);
        let b2 = poly_base(2);
        let t2 = DGAlgebra::trivial(b2.clone());
        let res = semifree_resolution(&DGModule::residue_field(&t2), 3).unwrap();
        assert_eq!(res.f.generator_counts().values().copied().collect::<Vec<_>>(), vec![1, 2, 1]);
        check_quasi_iso(&res);
    }

    #[test]
    fn h0_over_koszul_ring_is_minimal_and_certified() {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        let h0 = DGModule::from_h0_module(&r, &r.h0_presentation());
        let res = semifree_resolution(&h0, 4).unwrap();
        assert!(res.cert.minimal);
        assert!(!res.cert.complete);
        assert_eq!(res.cert.window.lo, Some(-4));
        check_quasi_iso(&res);
        res.f.module().validate().unwrap();
    }

    #[test]
    fn residue_field_over_koszul_ring() {
        let b = poly_base(2);
        let x = b.var(0);
        let r = DGAlgebra::koszul(b.clone(), vec![x.clone(), x]).unwrap();
        let res = semifree_resolution(&DGModule::residue_field(&r), 3).unwrap();
        assert!(res.cert.minimal);
        check_quasi_iso(&res);
    }

    #[test]
    fn base_model_of_relations() {
        let b = poly_base(2);
        let k = DGModule::residue_field(&DGAlgebra::trivial(b.clone()));
        let (model, _) = base_resolution(&k.cx, 0).unwrap();
        assert!(!model.has_relations());
        assert_eq!(model.support().unwrap(), vec![0]);
        assert_eq!(model.lo(), -2);
    }
}
