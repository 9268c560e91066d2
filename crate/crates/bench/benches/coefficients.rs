use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sixj_bench::quad;
use sixj_core::sixj::{compute, Route};

fn routes(c: &mut Criterion) {
    for (level, p) in [("trig", 0.0), ("elliptic", 0.15)] {
        let mut group = c.benchmark_group(format!("sixj/{level}"));
        for n in [2usize, 4, 6] {
            let qd = quad(n, p);
            for route in Route::ALL {
                group.bench_with_input(BenchmarkId::new(route.name(), n), &qd, |b, qd| {
                    b.iter(|| compute(black_box(qd), route).unwrap())
                });
            }
        }
        group.finish();
    }
}

criterion_group!(benches, routes);
criterion_main!(benches);
