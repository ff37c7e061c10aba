use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use orbitsat_core::checks::standard_quiver;
use orbitsat_core::fixtures;
use orbitsat_core::orbit::{membership, MembershipConfig};
use orbitsat_core::quiver::IntegerVector;
use orbitsat_core::rep::{functional_determinant, hom_ext, interaction_matrix, Representation};
use orbitsat_core::thin::fiber_count;

fn linear_algebra(c: &mut Criterion) {
    let w = fixtures::skew();
    let v = Representation::random(w.quiver().clone(), &IntegerVector::from(vec![2, 4]), 1, 1000).unwrap();
    let m = interaction_matrix(&v, &w).unwrap();
    c.bench_function("determinant 18x18", |b| b.iter(|| black_box(&m).determinant().unwrap()));
    c.bench_function("rank 18x18", |b| b.iter(|| black_box(&m).rank()));

    let theta3 = standard_quiver("theta3").unwrap();
    let dim = IntegerVector::from(vec![3, 4]);
    let a = Representation::random(theta3.clone(), &dim, 2, 10).unwrap();
    let z = Representation::random(theta3, &dim, 3, 10).unwrap();
    c.bench_function("hom_ext theta3 (3,4)", |b| {
        b.iter(|| hom_ext(black_box(&a), black_box(&z)).unwrap())
    });
}

fn membership_tests(c: &mut Criterion) {
    let w = fixtures::skew();
    let randomized = MembershipConfig::default();
    let symbolic = MembershipConfig::symbolic();
    let member = IntegerVector::from(vec![2, -2]);
    let non_member = IntegerVector::from(vec![1, -1]);
    c.bench_function("membership randomized member", |b| {
        b.iter(|| membership(&w, black_box(&member), &randomized).unwrap())
    });
    c.bench_function("membership symbolic non-member", |b| {
        b.iter(|| membership(&w, black_box(&non_member), &symbolic).unwrap())
    });
    let zwara = fixtures::zwara();
    c.bench_function("functional determinant 3x3 pencil", |b| {
        b.iter(|| functional_determinant(black_box(&zwara)).unwrap())
    });
}

fn flows(c: &mut Criterion) {
    let d4 = standard_quiver("D4").unwrap();
    let sigma = IntegerVector::from(vec![-9, 3, 3, 3]);
    c.bench_function("fiber_count D4", |b| {
        b.iter(|| fiber_count(&d4, black_box(&sigma)).unwrap())
    });
    let a2t = standard_quiver("A2~").unwrap();
    let sigma = IntegerVector::from(vec![40, 0, -40]);
    c.bench_function("fiber_count A2~", |b| {
        b.iter(|| fiber_count(&a2t, black_box(&sigma)).unwrap())
    });
}

criterion_group!(benches, linear_algebra, membership_tests, flows);
criterion_main!(benches);
