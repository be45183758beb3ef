use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cylsphere_bench::triangular_system;
use cylsphere_core::{b_coeff_sum, dedup, expand_oracle, mu, theorem_residual, theorem_sweep};

fn bench_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("tables");
    for n in [4u32, 8, 16] {
        group.bench_with_input(BenchmarkId::new("expand_oracle", n), &n, |b, &n| {
            b.iter(|| expand_oracle(black_box(n), black_box(n)))
        });
        group.bench_with_input(BenchmarkId::new("b_coeff_sum_row", n), &n, |b, &n| {
            b.iter(|| {
                (0..=2 * n)
                    .map(|l| b_coeff_sum(n, n, l).unwrap())
                    .collect::<Vec<_>>()
            })
        });
    }
    group.finish();
}

fn bench_mu(c: &mut Criterion) {
    let mut group = c.benchmark_group("mu");
    for m in [5u32, 15, 30] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| mu(black_box(m)))
        });
    }
    group.finish();
}

fn bench_theorem(c: &mut Criterion) {
    c.bench_function("theorem_residual_8_8_8", |b| {
        b.iter(|| theorem_residual(8, 8, black_box(8)))
    });
    let mut group = c.benchmark_group("theorem_sweep");
    group.sample_size(10);
    group.bench_function("6x6", |b| b.iter(|| theorem_sweep(6, 6).unwrap().len()));
    group.finish();
}

fn bench_dedup(c: &mut Criterion) {
    let mut group = c.benchmark_group("dedup");
    group.sample_size(10);
    for degree in [4u32, 8] {
        let system = triangular_system(degree);
        group.bench_with_input(BenchmarkId::new("triangular", degree), &system, |b, s| {
            b.iter(|| dedup(s).unwrap().rank)
        });
    }
    group.finish();
}

criterion_group!(benches, bench_tables, bench_mu, bench_theorem, bench_dedup);
criterion_main!(benches);
