//! Shift, cone and truncation properties, checked against the dense oracle
//! on random DG-modules over Artinian Koszul rings.

use std::collections::BTreeMap;
use std::sync::Arc;

use dgcm::complexes::{FreeComplex, Side};
use dgcm::dg::derived::derived_tensor;
use dgcm::dg::resolve::semifree_resolution;
use dgcm::dg::{DGAlgebra, DGModule};
use dgcm::fixtures::{random_artinian_base, random_koszul, random_module, random_monomial, rng};
use dgcm::oracle::DenseOracle;
use dgcm::PresentedModule;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::Rng;

fn instance(seed: u64) -> (Arc<DGAlgebra>, String, DGModule) {
    let mut g = rng(seed);
    let base = random_artinian_base(&mut g);
    let r = random_koszul(&mut g, &base, 2);
    let (name, m) = random_module(&mut g, &r);
    (r, name, m)
}

fn profile(c: &FreeComplex) -> BTreeMap<i64, Vec<(i64, usize)>> {
    DenseOracle::new(c).expect("Artinian base").profile()
}

fn dims(c: &FreeComplex, i: i64, t: i64) -> usize {
    DenseOracle::new(c).expect("Artinian base").cohomology_dim(i, t)
}

/// `N / rN`, for the long exact sequence of `K(r; M)`.
fn mod_r(n: &PresentedModule, r: &dgcm::Poly) -> PresentedModule {
    let mut rels = n.relations.clone();
    for j in 0..n.rank() {
        let mut v = vec![dgcm::Poly::zero(&n.base.ring); n.rank()];
        v[j] = r.clone();
        rels.push(v);
    }
    PresentedModule::new(n.base.clone(), n.gen_degrees.clone(), rels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, rng_seed: RngSeed::Fixed(0xd6c3), ..ProptestConfig::default() })]

    #[test]
    fn shift_moves_cohomology(seed in any::<u64>(), s in -3i64..=3) {
        let (_, name, m) = instance(seed);
        let moved: BTreeMap<i64, Vec<(i64, usize)>> = profile(&m.cx).into_iter().map(|(i, h)| (i - s, h)).collect();
        prop_assert_eq!(profile(&m.shift(s).cx), moved, "{}", name);
    }

    #[test]
    fn koszul_cone_long_exact_sequence(seed in any::<u64>()) {
        let (r, name, m) = instance(seed);
        let mut g = rng(seed ^ 0x5eed);
        let d = g.gen_range(1..=2);
        let f = random_monomial(&mut g, &r.base, d);
        let k = m.koszul_on(&f);
        k.validate().unwrap();
        let top = dgcm::oracle::artinian_top(&r.base).unwrap();
        let h: BTreeMap<i64, PresentedModule> = (m.cx.lo()..=m.cx.hi()).map(|i| (i, m.cx.cohomology_at(i).unwrap().module)).collect();
        let zero = PresentedModule::zero(r.base.clone());
        let tmax = m.cx.lo().min(0) + 8 + top;
        for i in m.cx.lo() - 1..=m.cx.hi() {
            let hi = h.get(&i).unwrap_or(&zero);
            let hi1 = h.get(&(i + 1)).unwrap_or(&zero);
            let (q, q1) = (mod_r(hi, &f), mod_r(hi1, &f));
            for t in -2..=tmax {
                // coker of r on H^i, plus ker of r on H^{i+1}
                let coker = q.hilbert_function(t);
                let rank1 = hi1.hilbert_function(t) - q1.hilbert_function(t);
                let ker = hi1.hilbert_function(t - d) - rank1;
                prop_assert_eq!(dims(&k.cx, i, t), coker + ker, "{} with r = {}, degree {}, twist {}", name, f, i, t);
            }
        }
    }

    #[test]
    fn truncations_split_cohomology(seed in any::<u64>(), n in -3i64..=1) {
        let (_, name, m) = instance(seed);
        let p = profile(&m.cx);
        let low = m.truncate(n, Side::AtMost);
        let high = m.truncate(n, Side::Above);
        low.validate().unwrap();
        high.validate().unwrap();
        let want_low: BTreeMap<_, _> = p.iter().filter(|(i, _)| **i <= n).map(|(i, h)| (*i, h.clone())).collect();
        let want_high: BTreeMap<_, _> = p.iter().filter(|(i, _)| **i > n).map(|(i, h)| (*i, h.clone())).collect();
        prop_assert_eq!(profile(&low.cx), want_low, "{} ≤ {}", name, n);
        prop_assert_eq!(profile(&high.cx), want_high, "{} > {}", name, n);
    }

    #[test]
    fn operations_keep_d_squared_zero(seed in any::<u64>()) {
        let (r, _, m) = instance(seed);
        r.validate().unwrap();
        m.validate().unwrap();
        m.shift(1).validate().unwrap();
        m.direct_sum(&m.shift(-1)).validate().unwrap();
        m.cx.tensor(&m.cx).validate().unwrap();
        if !m.cx.has_relations() {
            m.cx.hom(&m.cx).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn resolutions_are_certified_and_minimal(seed in any::<u64>()) {
        let (_, name, m) = instance(seed);
        let res = semifree_resolution(&m, 4).unwrap();
        prop_assert!(res.cert.certified(), "{}", name);
        prop_assert!(res.f.is_minimal(), "{}", name);
        res.f.module().validate().unwrap();
    }

    #[test]
    fn tensor_is_balanced(seed in any::<u64>()) {
        let (r, a_name, a) = instance(seed);
        let mut g = rng(seed ^ 0xba1);
        let (b_name, b) = random_module(&mut g, &r);
        let (ab, pa) = derived_tensor(&a, &b, 4).unwrap();
        let (ba, pb) = derived_tensor(&b, &a, 4).unwrap();
        let lo = [pa.window.lo, pb.window.lo].into_iter().flatten().max().unwrap_or(i64::MIN);
        let keep = |p: BTreeMap<i64, Vec<(i64, usize)>>| -> BTreeMap<i64, Vec<(i64, usize)>> { p.into_iter().filter(|(i, _)| *i >= lo).collect() };
        prop_assert_eq!(keep(profile(&ab.cx)), keep(profile(&ba.cx)), "{} ⊗ {}", a_name, b_name);
    }
}
