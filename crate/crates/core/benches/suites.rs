//! Sequential against data-parallel execution of law suites.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use polyana::exec::Strategy;
use polyana::suites::{self, Settings};

fn strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    for suite in ["split", "cartesian", "evaluation"] {
        for (label, strategy) in [
            ("sequential", Strategy::Sequential),
            ("parallel", Strategy::Parallel),
        ] {
            let settings = Settings {
                strategy,
                ..Settings::default()
            };
            group.bench_with_input(BenchmarkId::new(label, suite), &settings, |b, s| {
                b.iter(|| black_box(suites::run(suite, s).expect("known suite")))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, strategies);
criterion_main!(benches);
