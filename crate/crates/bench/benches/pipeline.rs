use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use trendstat::*;
use trendstat_bench::{gbm, positive_samples};

fn detection(c: &mut Criterion) {
    let mut group = c.benchmark_group("detection");
    let cfg = ScalingConfig::new(1.0).unwrap();
    for bars in [2_000usize, 20_000] {
        let s = gbm(bars, 1);
        group.throughput(Throughput::Elements(bars as u64));
        group.bench_with_input(BenchmarkId::new("macd_sar", bars), &s, |b, s| {
            b.iter(|| macd_sar(black_box(s), cfg).unwrap())
        });
        let sar = macd_sar(&s, cfg).unwrap();
        group.bench_with_input(BenchmarkId::new("run_minmax", bars), &s, |b, s| {
            b.iter(|| run_minmax(black_box(s), &sar).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("detect_and_extract", bars), &s, |b, s| {
            b.iter(|| {
                let mm = run_minmax(s, &macd_sar(s, cfg).unwrap()).unwrap();
                let phases = detect_trends(&mm).unwrap();
                extract_samples(&mm, &phases, &s.symbol, 1.0).unwrap()
            })
        });
    }
    group.finish();
}

fn statistics(c: &mut Criterion) {
    let mut group = c.benchmark_group("statistics");
    for n in [1_000usize, 10_000] {
        let xs = positive_samples(n, 2);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("lognormal_mle", n), &xs, |b, xs| {
            b.iter(|| lognormal_mle(black_box(xs)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("anderson_darling", n), &xs, |b, xs| {
            b.iter(|| anderson_darling_lognormal(black_box(xs)).unwrap())
        });
    }
    group.finish();
}

fn trading(c: &mut Criterion) {
    let p = BivariateLogNormalParams::new(-0.35, -1.7, 0.5, 0.55, 0.35).unwrap();
    let spec = TradeSpec::new(0.382, 1.0).unwrap();
    let mut group = c.benchmark_group("trading");
    group.bench_function("expected_return", |b| {
        b.iter(|| expected_return(black_box(p), spec).unwrap())
    });
    group.sample_size(20);
    group.bench_function("simulate_expected_return/100000", |b| {
        b.iter(|| simulate_expected_return(p, spec, 100_000, 7).unwrap())
    });
    let s = gbm(20_000, 3);
    group.bench_function("backtest_anticyclic/20000", |b| {
        b.iter(|| backtest_anticyclic(black_box(&s), 1.0, spec, true).unwrap())
    });
    group.finish();
}

criterion_group!(benches, detection, statistics, trading);
criterion_main!(benches);
