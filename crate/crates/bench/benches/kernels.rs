use criterion::{black_box, criterion_group, criterion_main, Criterion};

use syz_bench::{sample_series, sample_trop_point};
use syz_core::dual::{f_eval, PsiCache};
use syz_core::psi::{psi, DEFAULT_QUAD_TOL};
use syz_core::ParamSet;

fn bench_psi(c: &mut Criterion) {
    let p = ParamSet::reference_a2();
    c.bench_function("psi s=0.25 r=2.5", |b| b.iter(|| psi(black_box(0.25), black_box(2.5), &p, DEFAULT_QUAD_TOL)));
    c.bench_function("psi s=0 r=1.7", |b| b.iter(|| psi(black_box(0.0), black_box(1.7), &p, DEFAULT_QUAD_TOL)));
}

fn bench_f_eval(c: &mut Criterion) {
    let cache = PsiCache::new(ParamSet::reference_a2(), DEFAULT_QUAD_TOL);
    let t = sample_trop_point();
    f_eval(&t, &cache).expect("warm cache");
    c.bench_function("f_eval cached", |b| b.iter(|| f_eval(black_box(&t), &cache)));
}

fn bench_novikov(c: &mut Criterion) {
    let a = sample_series(20, 50.0);
    let b2 = sample_series(30, 50.0);
    c.bench_function("novikov mul 20x30", |b| b.iter(|| black_box(&a).mul(black_box(&b2))));
    c.bench_function("novikov inv 20 terms", |b| b.iter(|| black_box(&a).inv()));
}

criterion_group!(benches, bench_psi, bench_f_eval, bench_novikov);
criterion_main!(benches);
