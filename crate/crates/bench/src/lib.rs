//! Instances shared by the benchmarks.

use std::sync::Arc;

use dgcm::dg::DGAlgebra;
use dgcm::fixtures::{poly_base, random_form, rng};
use dgcm::{Field, Poly};

/// `count` random forms of degree 2 and 3 in four variables over Q.
pub fn dense_forms(count: usize, seed: u64) -> Vec<Poly> {
    let base = poly_base(Field::Rational, 4);
    let mut g = rng(seed);
    let mut out = Vec::new();
    let mut d = 2;
    while out.len() < count {
        let f = random_form(&mut g, &base, d);
        if !f.is_zero() {
            out.push(f);
            d = 5 - d;
        }
    }
    out
}

/// `K(Q[x,y,z]; x^2, y^2, x*y)`, a ring of amplitude 2 with a nontrivial residue resolution.
pub fn koszul_three() -> Arc<DGAlgebra> {
    let b = poly_base(Field::Rational, 3);
    let (x, y) = (b.var(0), b.var(1));
    DGAlgebra::koszul(b, vec![x.pow(2), y.pow(2), x.mul(&y)]).expect("forms of positive degree")
}
