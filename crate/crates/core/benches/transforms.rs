//! Parallel against sequential execution of the main transforms.
//!
//! Each workload runs inside a one-thread rayon pool (the sequential
//! baseline) and inside the default pool. Built with `--no-default-features`
//! the library never touches rayon, so both arms measure the sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hermite_needlets::cutoff::CutoffPair;
use hermite_needlets::frame::{analyze, build_frame, synthesize, NeedletFrame};
use hermite_needlets::hermite::{min_projection_order, project_function, HermiteExpansion};
use hermite_needlets::spaces::{bump, f_continuous_norm, GridSpec, SpaceParams};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", one), ("parallel", all)]
}

fn test_function(frame: &NeedletFrame) -> HermiteExpansion {
    let degree = frame.max_degree();
    let terms = (0..=degree).map(|k| (vec![k], (1.7 * k as f64 + 0.3).sin() / (1.0 + k as f64)));
    HermiteExpansion::from_terms(1, terms).unwrap()
}

fn transforms(c: &mut Criterion) {
    let frame = build_frame(1, 0.025, 4, CutoffPair::tight()).unwrap();
    let f = test_function(&frame);
    let s = analyze(&f, &frame).unwrap();
    let mut group = c.benchmark_group("transforms");
    group.sample_size(20);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("analyze", name), &f, |b, f| {
            b.iter(|| pool.install(|| analyze(f, &frame).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("synthesize", name), &s, |b, s| {
            b.iter(|| pool.install(|| synthesize(s, &frame).unwrap()))
        });
    }
    group.finish();
}

fn norms(c: &mut Criterion) {
    let frame = build_frame(1, 0.025, 3, CutoffPair::tight()).unwrap();
    let f = test_function(&frame);
    let filter = frame.analysis_filter();
    let grid = GridSpec::new(frame.max_node() + 1.0, GridSpec::required_resolution(3)).unwrap();
    let params = SpaceParams::new(1.0, 2.0, 1.0).unwrap();
    let mut group = c.benchmark_group("norms");
    group.sample_size(20);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("f_continuous", name), |b| {
            b.iter(|| pool.install(|| f_continuous_norm(&f, &params, &filter, &grid).unwrap()))
        });
        group.bench_function(BenchmarkId::new("project_bump", name), |b| {
            b.iter(|| pool.install(|| project_function(bump(2.0), 1, 512, min_projection_order(512)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, norms);
criterion_main!(benches);
