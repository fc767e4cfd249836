use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pursuit::{best_mterm_oracle, run_oga, run_pga, Dictionary, StopRule};
use pursuit_bench::incoherent_fixture;
use std::hint::black_box;

fn coherence(c: &mut Criterion) {
    let mut group = c.benchmark_group("coherence");
    for count in [64usize, 128, 256] {
        let dict = Dictionary::gaussian(64, count, 7).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(count), &dict, |b, d| {
            // Clone to drop the cached report so each iteration recomputes it.
            b.iter(|| black_box(d.clone().coherence()))
        });
    }
    group.finish();
}

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy");
    for dim in [64usize, 256] {
        let fx = incoherent_fixture(dim, 8, 3);
        let stop = StopRule::iterations(200);
        group.bench_with_input(BenchmarkId::new("pga", dim), &fx, |b, fx| {
            b.iter(|| black_box(run_pga(&fx.dict, &fx.signal, &stop, None).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("pga_tracked", dim), &fx, |b, fx| {
            b.iter(|| black_box(run_pga(&fx.dict, &fx.signal, &stop, Some(&fx.rep)).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("oga", dim), &fx, |b, fx| {
            b.iter(|| black_box(run_oga(&fx.dict, &fx.signal, &stop).unwrap()))
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    for m in [1usize, 2, 3] {
        let fx = incoherent_fixture(16, 3, 5);
        group.bench_with_input(BenchmarkId::from_parameter(m), &fx, |b, fx| {
            b.iter(|| black_box(best_mterm_oracle(&fx.dict, &fx.signal, m).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, coherence, greedy, oracle);
criterion_main!(benches);
