use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rinf_bench::{dihedral, free_abelian, lcg_matrix, two_generator};
use rinf_core::{
    goldberg_quotient, kb_complete, min_reidemeister_finite, smith_normal_form, table, todd_coxeter, verify_goldberg,
    KbBudget, SurfaceSpec, DEFAULT_AUTOMORPHISM_BOUND, DEFAULT_MAX_COSETS,
};

fn goldberg(c: &mut Criterion) {
    let budget = KbBudget::default();
    c.bench_function("goldberg_quotient o:2,2 n=2", |b| {
        b.iter(|| goldberg_quotient(black_box(SurfaceSpec::orientable(2, 2)), 2).unwrap())
    });
    c.bench_function("verify_goldberg sphere:4 n=3", |b| {
        b.iter(|| verify_goldberg(black_box(SurfaceSpec::sphere(4)), 3, &budget).unwrap())
    });
    let n22 = SurfaceSpec::non_orientable(2, 2).unwrap();
    c.bench_function("verify_goldberg n:2,2 n=2", |b| b.iter(|| verify_goldberg(black_box(n22), 2, &budget).unwrap()));
}

fn rewriting(c: &mut Criterion) {
    let z5 = free_abelian(5);
    c.bench_function("kb_complete Z^5", |b| {
        b.iter(|| kb_complete(black_box(z5.relators()), z5.generators(), &KbBudget::default()).unwrap())
    });
    let d8 = dihedral(8);
    c.bench_function("kb_complete D8", |b| {
        b.iter(|| kb_complete(black_box(d8.relators()), d8.generators(), &KbBudget::default()).unwrap())
    });
}

fn enumeration(c: &mut Criterion) {
    let big = dihedral(500);
    c.bench_function("todd_coxeter D500", |b| b.iter(|| todd_coxeter(black_box(&big), DEFAULT_MAX_COSETS).unwrap()));
    let meta = two_generator(&["a^3", "b^4", "b^-1 a b a"]);
    c.bench_function("todd_coxeter Z3:Z4", |b| b.iter(|| todd_coxeter(black_box(&meta), DEFAULT_MAX_COSETS).unwrap()));
}

fn twisted(c: &mut Criterion) {
    let d8 = todd_coxeter(&dihedral(8), DEFAULT_MAX_COSETS).unwrap().to_finite_group().unwrap();
    c.bench_function("min_reidemeister_finite D8", |b| {
        b.iter(|| min_reidemeister_finite(black_box(&d8), DEFAULT_AUTOMORPHISM_BOUND).unwrap())
    });
    let m = lcg_matrix(12, 16, 7);
    c.bench_function("smith_normal_form 12x16", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn classification(c: &mut Criterion) {
    c.bench_function("table g<=3 p<=4 n<=6", |b| b.iter(|| table(black_box(3), 4, 6)));
}

criterion_group!(benches, goldberg, rewriting, enumeration, twisted, classification);
criterion_main!(benches);
