//! The same suite checks on the rayon pool and forced onto one thread.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use essence_core::par;
use essence_core::suite::{run_check, SuiteConfig};

/// Girth against form minimum, pretzel strata, and random pinch trees.
const WORKLOADS: &[(u32, &str)] = &[(1, "girth_vs_form"), (4, "pretzel_strata"), (7, "pinch_trees")];

fn bench(c: &mut Criterion) {
    let cfg = SuiteConfig::default();
    for &(id, name) in WORKLOADS {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        group.bench_function("parallel", |b| {
            b.iter(|| black_box(run_check(id, &cfg)))
        });
        group.bench_function("sequential", |b| {
            b.iter(|| black_box(par::sequential(|| run_check(id, &cfg))))
        });
        group.finish();
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
