use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ztwo_core::classifier::{cross_check, CrossCheckOptions};
use ztwo_core::diophantine::{solve_kaplan, solve_legendre, solve_pell_rep, SearchBounds};
use ztwo_core::qforms::{class_group, discriminant_of};

fn class_groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("class_group");
    for m in [178i64, 2 * 9_161, 2 * 99_929, 2 * 999_983] {
        let d = discriminant_of(-m).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &d, |b, d| b.iter(|| class_group(black_box(d)).unwrap()));
    }
    g.finish();
}

fn representations(c: &mut Criterion) {
    let bounds = SearchBounds::default();
    c.bench_function("solve_pell_rep/89", |b| b.iter(|| solve_pell_rep(black_box(89), &bounds).unwrap()));
    c.bench_function("solve_kaplan/11,19", |b| b.iter(|| solve_kaplan(black_box(11), black_box(19), &bounds).unwrap()));
    let mut g = c.benchmark_group("solve_legendre");
    for (p, q) in [(37u64, 11u64), (3_917, 11), (99_901, 3)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{p},{q}")), &(p, q), |b, &(p, q)| {
            b.iter(|| solve_legendre(black_box(p), black_box(q), &bounds))
        });
    }
    g.finish();
}

fn cross_checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("cross_check");
    g.sample_size(10);
    for d_max in [1_000u64, 10_000] {
        g.bench_with_input(BenchmarkId::from_parameter(d_max), &d_max, |b, &d_max| {
            b.iter(|| cross_check(d_max, &CrossCheckOptions::default()))
        });
    }
    g.finish();
}

criterion_group!(benches, class_groups, representations, cross_checks);
criterion_main!(benches);
