use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use relgnc::isoclinism::find_relative_isoclinism;
use relgnc::{SweepConfig, harness::run_sweep};
use relgnc_bench::group;

fn sweep(c: &mut Criterion) {
    let mut bench = c.benchmark_group("sweep");
    bench.sample_size(10);
    for max_order in [6, 8, 12] {
        let config = SweepConfig { max_order, ..SweepConfig::default() };
        bench.bench_with_input(BenchmarkId::new("max_order", max_order), &config, |b, config| {
            b.iter(|| run_sweep(config).unwrap().records.len())
        });
    }
    bench.finish();
}

fn isoclinism(c: &mut Criterion) {
    let d8 = group("D4");
    let q8 = group("Q8");
    c.bench_function("isoclinism/D4_Q8", |b| {
        b.iter(|| find_relative_isoclinism(&d8.whole(), &q8.whole()).unwrap().is_some())
    });
}

criterion_group!(benches, sweep, isoclinism);
criterion_main!(benches);
