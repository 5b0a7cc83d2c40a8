use dgcm::algebra::ideal::{groebner_basis, normal_form, Ideal};
use dgcm::algebra::module::{monomials_of_degree, span_basis, syzygy_module};
use dgcm::algebra::ModVec;
use dgcm::fixtures::{poly_base, random_form, rng};
use dgcm::{Field, MonoOrder, Poly};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::Rng;

fn forms(seed: u64, n: usize, count: usize) -> (std::sync::Arc<dgcm::BaseRing>, Vec<Poly>, Poly) {
    let base = poly_base(Field::Rational, n);
    let mut g = rng(seed);
    let mut gens = Vec::new();
    while gens.len() < count {
        let d = g.gen_range(1..=3);
        let f = random_form(&mut g, &base, d);
        if !f.is_zero() {
            gens.push(f);
        }
    }
    let d = g.gen_range(2..=4);
    let probe = random_form(&mut g, &base, d);
    (base, gens, probe)
}

/// Krull dimension of `k[x_1..x_n]/I` for monomial `I`: the largest set of variables
/// containing the support of no generator.
fn monomial_dimension(n: usize, supports: &[Vec<usize>]) -> usize {
    (0u32..1 << n)
        .filter(|s| supports.iter().all(|sup| !sup.iter().all(|v| s & (1 << v) != 0)))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, rng_seed: RngSeed::Fixed(0xd6c3), ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_idempotent_and_kills_generators(seed in any::<u64>(), count in 1usize..4) {
        let (_, gens, probe) = forms(seed, 3, count);
        let gb = groebner_basis(&gens, MonoOrder::GRevLex).unwrap();
        let nf = normal_form(&probe, &gb).unwrap();
        prop_assert_eq!(normal_form(&nf, &gb).unwrap(), nf.clone());
        for g in &gens {
            prop_assert!(normal_form(g, &gb).unwrap().is_zero(), "{} survives", g);
        }
        // probe - nf lies in the ideal
        prop_assert!(normal_form(&probe.sub(&nf), &gb).unwrap().is_zero());
    }

    #[test]
    fn koszul_syzygies_lie_in_the_syzygy_module(seed in any::<u64>(), count in 2usize..4) {
        let (base, gens, _) = forms(seed, 3, count);
        let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let syz = syzygy_module(&base, &[0], &cols).unwrap();
        let twists: Vec<i64> = gens.iter().map(|g| g.homogeneous_degree().unwrap()).collect();
        let span = span_basis(&base, &twists, &syz);
        let zero = Poly::zero(&base.ring);
        for s in &syz {
            let total = s.iter().zip(&gens).fold(zero.clone(), |acc, (a, g)| acc.add(&a.mul(g)));
            prop_assert!(total.is_zero());
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let mut v = vec![zero.clone(); gens.len()];
                v[i] = gens[j].clone();
                v[j] = gens[i].neg();
                prop_assert!(span.contains(&ModVec::from_dense(span.ctx(), &v)));
            }
        }
    }

    #[test]
    fn monomial_dimension_matches_the_combinatorial_count(seed in any::<u64>(), n in 1usize..4, count in 1usize..4) {
        let base = poly_base(Field::Rational, n);
        let mut g = rng(seed);
        let mut gens = Vec::new();
        let mut supports = Vec::new();
        for _ in 0..count {
            let d = g.gen_range(1..=3);
            let ms = monomials_of_degree(&base.ring.weights, d);
            let m = ms[g.gen_range(0..ms.len())].clone();
            supports.push(m.iter().enumerate().filter(|(_, e)| **e > 0).map(|(v, _)| v).collect());
            gens.push(Poly::monomial(&base.ring, m, Field::Rational.one()));
        }
        let i = Ideal::new(base, gens).unwrap();
        prop_assert_eq!(i.krull_dimension(), Some(monomial_dimension(n, &supports)));
    }

    #[test]
    fn bases_are_deterministic(seed in any::<u64>()) {
        let (_, gens, _) = forms(seed, 3, 3);
        let a = groebner_basis(&gens, MonoOrder::GRevLex).unwrap().polys();
        let b = groebner_basis(&gens, MonoOrder::GRevLex).unwrap().polys();
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
