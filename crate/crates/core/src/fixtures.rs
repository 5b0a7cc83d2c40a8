//! Named instances, their session files, and seeded random generators for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::ideal::Ideal;
use crate::algebra::module::monomials_of_degree;
use crate::algebra::{BaseRing, Field, MonoOrder, Poly, PolyRing, PresentedModule};
use crate::dg::{DGAlgebra, DGModule};
use crate::session::{parse_session, Session};

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

impl Fixture {
    pub fn session(&self) -> Session {
        parse_session(self.text).expect("fixture sessions parse")
    }
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "inst-a", summary: "K(Q[x,y]; x, x), amp 1, constant amplitude", text: include_str!("../fixtures/inst_a.dgcm") },
    Fixture { name: "inst-b", summary: "K(F5[x]/(x^3); x^2), Artinian, amp 1", text: include_str!("../fixtures/inst_b.dgcm") },
    Fixture { name: "inst-c", summary: "K(Q[x,y]; x), amp 0, dim H^0 = 1", text: include_str!("../fixtures/inst_c.dgcm") },
    Fixture { name: "inst-d", summary: "Q[x,y] in degree 0, amp 0, dim H^0 = 2", text: include_str!("../fixtures/inst_d.dgcm") },
    Fixture { name: "inst-e", summary: "Q[x,y] ⋉ Σ(Q[x,y]/(x)), not of constant amplitude", text: include_str!("../fixtures/inst_e.dgcm") },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// `k[x_1, ..., x_n]` with standard grading; variables named x, y, z, w.
pub fn poly_base(field: Field, n: usize) -> Arc<BaseRing> {
    let vars = ["x", "y", "z", "w"][..n].iter().map(|v| (v.to_string(), 1)).collect();
    BaseRing::polynomial(PolyRing::new(field, vars, MonoOrder::GRevLex))
}

pub fn inst_d() -> Arc<DGAlgebra> {
    DGAlgebra::trivial(poly_base(Field::Rational, 2))
}

pub fn inst_c() -> Arc<DGAlgebra> {
    let b = poly_base(Field::Rational, 2);
    DGAlgebra::koszul(b.clone(), vec![b.var(0)]).expect("valid Koszul data")
}

pub fn inst_a() -> Arc<DGAlgebra> {
    let b = poly_base(Field::Rational, 2);
    DGAlgebra::koszul(b.clone(), vec![b.var(0), b.var(0)]).expect("valid Koszul data")
}

pub fn inst_b() -> Arc<DGAlgebra> {
    let ring = PolyRing::new(Field::Prime(5), vec![("x".into(), 1)], MonoOrder::GRevLex);
    let b = BaseRing::quotient(ring.clone(), vec![Poly::var(&ring, 0).pow(3)]).expect("Artinian");
    DGAlgebra::koszul(b.clone(), vec![b.var(0).pow(2)]).expect("valid Koszul data")
}

pub fn inst_e() -> Arc<DGAlgebra> {
    let b = poly_base(Field::Rational, 2);
    let m = PresentedModule::cyclic(b.clone(), &[b.var(0)]);
    DGAlgebra::square_zero(b, m, 1).expect("positive shift")
}

/// All five named DG-rings, by fixture name.
pub fn named_rings() -> Vec<(&'static str, Arc<DGAlgebra>)> {
    vec![("inst-a", inst_a()), ("inst-b", inst_b()), ("inst-c", inst_c()), ("inst-d", inst_d()), ("inst-e", inst_e())]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random form of degree `deg`, reduced in the base; may be zero.
pub fn random_form(rng: &mut impl Rng, base: &BaseRing, deg: i64) -> Poly {
    let ring = &base.ring;
    let field = ring.field;
    let mut terms = Vec::new();
    for m in monomials_of_degree(&ring.weights, deg) {
        if rng.gen_bool(0.6) {
            terms.push((m, field.from_i64(rng.gen_range(1..5))));
        }
    }
    base.reduce(&Poly::from_terms(ring, terms))
}

/// A random nonzero monomial of degree `deg` in the ambient ring.
pub fn random_monomial(rng: &mut impl Rng, base: &BaseRing, deg: i64) -> Poly {
    let ring = &base.ring;
    let ms = monomials_of_degree(&ring.weights, deg);
    let m = ms.choose(rng).expect("some monomial").clone();
    Poly::monomial(ring, m, ring.field.one())
}

/// `F_5[x(, y)] / (x^a(, y^b)(, f))` with every graded piece of dimension at most 30.
pub fn random_artinian_base(rng: &mut impl Rng) -> Arc<BaseRing> {
    let n = rng.gen_range(1..=2);
    let vars = ["x", "y"][..n].iter().map(|v| (v.to_string(), 1)).collect();
    let ring = PolyRing::new(Field::Prime(5), vars, MonoOrder::GRevLex);
    let mut gens: Vec<Poly> = (0..n).map(|i| Poly::var(&ring, i).pow(rng.gen_range(2..=4))).collect();
    if n == 2 && rng.gen_bool(0.5) {
        let amb = BaseRing::polynomial(ring.clone());
        let f = random_form(rng, &amb, 2);
        if !f.is_zero() {
            gens.push(f);
        }
    }
    BaseRing::quotient(ring, gens).expect("pure powers make it Artinian")
}

/// `K(B; f_1, ..., f_k)` with `k ≤ max` random forms of degree 1 or 2.
pub fn random_koszul(rng: &mut impl Rng, base: &Arc<BaseRing>, max: usize) -> Arc<DGAlgebra> {
    let k = rng.gen_range(0..=max);
    let mut elems = Vec::new();
    for _ in 0..k {
        let d = rng.gen_range(1..=2);
        elems.push(random_form(rng, base, d));
    }
    DGAlgebra::koszul(base.clone(), elems).expect("forms of positive degree")
}

/// One of: `R`, `k`, `H^0(R)`, `R/(f)`, `K(f; R)`, `K(f; k)`, shifted by -1, 0 or 1.
pub fn random_module(rng: &mut impl Rng, r: &Arc<DGAlgebra>) -> (String, DGModule) {
    let base = r.base.clone();
    let (name, m) = match rng.gen_range(0..6) {
        0 => ("R".to_string(), DGModule::ring(r)),
        1 => ("k".to_string(), DGModule::residue_field(r)),
        2 => ("H0(R)".to_string(), DGModule::from_h0_module(r, &r.h0_presentation())),
        3 => {
            let d = rng.gen_range(1..=2);
            let f = random_monomial(rng, &base, d);
            let i = Ideal::new(base.clone(), vec![f.clone()]).expect("homogeneous");
            (format!("R/({f})"), DGModule::quotient_ring(r, &i))
        }
        4 => {
            let d = rng.gen_range(1..=2);
            let f = random_monomial(rng, &base, d);
            (format!("K({f}; R)"), DGModule::ring(r).koszul_on(&f))
        }
        _ => {
            let f = random_monomial(rng, &base, 1);
            (format!("K({f}; k)"), DGModule::residue_field(r).koszul_on(&f))
        }
    };
    let s = rng.gen_range(-1..=1);
    if s == 0 {
        (name, m)
    } else {
        (format!("Σ^{s} {name}"), m.shift(s))
    }
}

/// `K(Q[x,y]; u_1, ..., u_k)` with `k ≤ 2` monomials of degree 1 or 2.
pub fn random_polynomial_ring(rng: &mut impl Rng) -> Arc<DGAlgebra> {
    let base = poly_base(Field::Rational, 2);
    let k = rng.gen_range(0..=2);
    let mut elems = Vec::new();
    for _ in 0..k {
        let d = rng.gen_range(1..=2);
        elems.push(random_monomial(rng, &base, d));
    }
    DGAlgebra::koszul(base, elems).expect("monomials of positive degree")
}

/// A hypothesis-satisfying INIT instance: `F = K(f; R)` with `(f) + ker(A → H^0 R)` primary to
/// the maximal ideal, and `I ⊆ (f)` so that `I` kills the generator of `H^0(F)`.
#[derive(Clone, Debug)]
pub struct InitInstance {
    pub label: String,
    pub ring: Arc<DGAlgebra>,
    pub f: DGModule,
    pub ideal: Ideal,
}

pub fn random_init_instance(rng: &mut impl Rng) -> InitInstance {
    let artinian = rng.gen_bool(0.3);
    let ring = if artinian {
        let b = random_artinian_base(rng);
        random_koszul(rng, &b, 1)
    } else {
        random_polynomial_ring(rng)
    };
    let base = ring.base.clone();
    let h0 = ring.h0_ideal();
    let mut elems: Vec<Poly> = Vec::new();
    let vars = base.vars();
    for v in &vars {
        if h0.radical_contains(v) {
            if rng.gen_bool(0.3) {
                elems.push(v.pow(rng.gen_range(1..=2)));
            }
        } else {
            elems.push(v.pow(rng.gen_range(1..=2)));
        }
    }
    elems.retain(|p| !base.reduce(p).is_zero());
    if elems.is_empty() && rng.gen_bool(0.5) {
        // pad with a redundant element so the Koszul factor is not trivial
        let v = vars.choose(rng).expect("a variable").clone();
        if !base.reduce(&v).is_zero() {
            elems.push(v);
        }
    }
    let f = DGModule::koszul_dg_module(&elems, &DGModule::ring(&ring));
    let mut gens: Vec<Poly> = Vec::new();
    for e in &elems {
        if !rng.gen_bool(0.7) {
            continue;
        }
        gens.push(if rng.gen_bool(0.3) { e.mul(&random_monomial(rng, &base, 1)) } else { e.clone() });
    }
    let ideal = Ideal::new(base.clone(), gens.clone()).expect("homogeneous");
    let names: Vec<String> = elems.iter().map(|p| p.to_string()).collect();
    let igens: Vec<String> = gens.iter().map(|p| p.to_string()).collect();
    let label = format!("R = {}, F = K({}; R), I = ({})", presentation_label(&ring), names.join(", "), igens.join(", "));
    InitInstance { label, ring, f, ideal }
}

/// Short human label for a DG-ring.
pub fn presentation_label(r: &DGAlgebra) -> String {
    use crate::dg::Presentation;
    let defining: Vec<String> = r.base.defining_ideal().iter().map(|p| p.to_string()).collect();
    let vars: Vec<&str> = r.base.ring.vars.iter().map(|v| v.as_str()).collect();
    let mut base = format!("{}[{}]", r.base.field(), vars.join(","));
    if !defining.is_empty() {
        base = format!("{base}/({})", defining.join(", "));
    }
    match &r.presentation {
        Presentation::Base => base,
        Presentation::Koszul(e) => format!("K({base}; {})", e.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")),
        Presentation::SquareZero { shift, .. } => format!("{base} ⋉ Σ^{shift} M"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_and_round_trip() {
        for f in FIXTURES {
            let s = f.session();
            assert_eq!(parse_session(&s.to_string()).unwrap(), s, "{}", f.name);
        }
    }

    #[test]
    fn generators_are_seeded() {
        let a = random_init_instance(&mut rng(7)).label;
        let b = random_init_instance(&mut rng(7)).label;
        assert_eq!(a, b);
        let mut g = rng(3);
        for _ in 0..20 {
            let b = random_artinian_base(&mut g);
            assert!(crate::oracle::artinian_top(&b).is_some());
        }
    }
}
