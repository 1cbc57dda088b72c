use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use blocksel::partition::{
    partition_global_diverse, partition_global_local_diverse, partition_local_coherent,
    partition_local_diverse,
};
use blocksel::{greedy, ConstraintSet};
use blocksel_bench::mixture_fixture;

fn bench_greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy");
    for n in [200usize, 800] {
        let (_, s) = mixture_fixture(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| greedy(black_box(s), 40).unwrap())
        });
    }
    group.finish();
}

fn bench_strategies(c: &mut Criterion) {
    let (emb, s) = mixture_fixture(400, 2);
    let cons = ConstraintSet::new(40, 4);
    let mut group = c.benchmark_group("strategies_n400_k40_b4");
    group.bench_function("global-diverse", |b| {
        b.iter(|| partition_global_diverse(black_box(&s), &cons).unwrap())
    });
    group.bench_function("global-local-diverse", |b| {
        b.iter(|| partition_global_local_diverse(black_box(&s), &cons).unwrap())
    });
    group.bench_function("local-diverse", |b| {
        b.iter(|| partition_local_diverse(black_box(&s), &emb, &cons, 0).unwrap())
    });
    group.bench_function("local-coherent", |b| {
        b.iter(|| partition_local_coherent(black_box(&s), &cons).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_greedy, bench_strategies);
criterion_main!(benches);
