use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dgcm::algebra::ideal::groebner_basis;
use dgcm::dg::resolve::semifree_resolution;
use dgcm::fixtures::{inst_a, inst_b, inst_d};
use dgcm::local::local_cohomology_profile;
use dgcm::dg::DGModule;
use dgcm::MonoOrder;
use dgcm_bench::{dense_forms, koszul_three};

fn groebner(c: &mut Criterion) {
    let mut g = c.benchmark_group("groebner");
    for n in [3, 4, 5] {
        let forms = dense_forms(n, 7);
        g.bench_with_input(BenchmarkId::from_parameter(n), &forms, |b, f| b.iter(|| groebner_basis(f, MonoOrder::GRevLex).unwrap()));
    }
    g.finish();
}

fn resolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("resolution");
    let r = koszul_three();
    let k = DGModule::residue_field(&r);
    for bound in [2, 4] {
        g.bench_with_input(BenchmarkId::new("k over K(x^2, y^2, xy)", bound), &bound, |b, &n| b.iter(|| semifree_resolution(&k, n).unwrap()));
    }
    let a = inst_a();
    let ka = DGModule::residue_field(&a);
    g.bench_function("k over inst-a", |b| b.iter(|| semifree_resolution(&ka, 4).unwrap()));
    g.finish();
}

fn profile(c: &mut Criterion) {
    let mut g = c.benchmark_group("profile");
    for (name, r) in [("inst-a", inst_a()), ("inst-b", inst_b()), ("inst-d", inst_d()), ("K(x^2, y^2, xy)", koszul_three())] {
        let m = DGModule::ring(&r);
        g.bench_function(name, |b| b.iter(|| local_cohomology_profile(&m).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, groebner, resolution, profile);
criterion_main!(benches);
