use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpadm_bench::{config, heat, laplacian};
use lpadm_core::criteria::{dyadic_strip_criterion, interpolation_threshold_on, ResolventScan};
use lpadm_core::oracle::{weiss_closed_form, weiss_eigen_sum};
use lpadm_core::{build_measure, Analyzer, ScanConfig};

fn measure_build(c: &mut Criterion) {
    let s = heat();
    let mut g = c.benchmark_group("build_measure");
    for k in [10_000usize, 100_000, 1_000_000] {
        let cfg = config(k).measure;
        g.bench_with_input(BenchmarkId::from_parameter(k), &cfg, |b, cfg| {
            b.iter(|| build_measure(black_box(&s), cfg).unwrap())
        });
    }
    g.finish();
}

fn criteria(c: &mut Criterion) {
    let s = heat();
    let m = build_measure(&s, &config(1_000_000).measure).unwrap();
    let scan = ScanConfig::default();
    c.bench_function("dyadic_strip/heat/p=5", |b| {
        b.iter(|| dyadic_strip_criterion(&m, black_box(5.0), 2.0, &scan).unwrap())
    });
    c.bench_function("interpolation_threshold/heat", |b| {
        b.iter(|| interpolation_threshold_on(black_box(&m), 2.0).unwrap())
    });
    let small = build_measure(&s, &config(10_000).measure).unwrap();
    let mut g = c.benchmark_group("resolvent_scan");
    g.sample_size(10);
    g.bench_function("heat/k=1e4", |b| {
        b.iter(|| ResolventScan::compute(black_box(&small), 2.0, &scan).unwrap())
    });
    g.finish();
}

fn analyze(c: &mut Criterion) {
    let mut g = c.benchmark_group("analyze");
    g.sample_size(10);
    g.bench_function("heat/p=5/k=1e5", |b| {
        b.iter(|| {
            Analyzer::new(heat(), config(100_000))
                .unwrap()
                .analyze(black_box(5.0))
                .unwrap()
        })
    });
    g.bench_function("laplacian-n3/threshold", |b| {
        b.iter(|| {
            Analyzer::new(laplacian(3), config(100_000))
                .unwrap()
                .threshold_scan(2.0, 8.0, black_box(0.02))
                .unwrap()
        })
    });
    g.finish();
}

fn weiss(c: &mut Criterion) {
    c.bench_function("weiss_closed_form", |b| {
        b.iter(|| weiss_closed_form(black_box(1.0)))
    });
    c.bench_function("weiss_eigen_sum/1e5", |b| {
        b.iter(|| weiss_eigen_sum(black_box(1.0), 100_000))
    });
}

criterion_group!(benches, measure_build, criteria, analyze, weiss);
criterion_main!(benches);
