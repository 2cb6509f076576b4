use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pseudoboson::axioms::{check_ladder, Tolerances};
use pseudoboson::quadrature::{hermite_rule, quad_gram};
use pseudoboson::scalar::{real, PI};
use pseudoboson::{gram, GaussSum1, PbModel};

fn families(m: &PbModel<1>, n: usize) -> (Vec<GaussSum1>, Vec<GaussSum1>) {
    let phi = (0..=n).map(|k| (*m.phi([k]).unwrap()).clone()).collect();
    let psi = (0..=n).map(|k| (*m.psi([k]).unwrap()).clone()).collect();
    (phi, psi)
}

fn bench_families(c: &mut Criterion) {
    c.bench_function("swanson_family_construction_n20", |b| {
        b.iter(|| {
            let m = PbModel::swanson(PI / real(6.0)).unwrap();
            black_box(m.phi([20]).unwrap());
            black_box(m.psi([20]).unwrap());
        })
    });
}

fn bench_gram(c: &mut Criterion) {
    let m = PbModel::swanson(PI / real(8.0)).unwrap();
    let (phi, psi) = families(&m, 15);
    let left: Vec<&GaussSum1> = phi.iter().collect();
    let right: Vec<&GaussSum1> = psi.iter().collect();
    c.bench_function("closed_form_gram_16x16", |b| b.iter(|| black_box(gram(&left, &right).unwrap())));
    let rule = hermite_rule(200).unwrap();
    c.bench_function("quadrature_gram_16x16", |b| b.iter(|| black_box(quad_gram(&left, &right, &rule, None))));
    c.bench_function("hermite_rule_200", |b| b.iter(|| black_box(hermite_rule(200).unwrap())));
}

fn bench_ladder(c: &mut Criterion) {
    let m = PbModel::extended(real(1.0)).unwrap();
    m.phi([26]).unwrap();
    m.psi([26]).unwrap();
    let tol = Tolerances::default();
    c.bench_function("ladder_check_extended_n25", |b| b.iter(|| black_box(check_ladder(&m, 25, &tol))));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_families, bench_gram, bench_ladder
}
criterion_main!(benches);
