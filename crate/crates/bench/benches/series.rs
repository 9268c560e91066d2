use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sixj_core::harness::{verify, Level, SampleConfig, Suite};
use sixj_core::scalar::{Complex, EllipticContext};
use sixj_core::series::{eval_v12, SeriesSpec};

fn theta(c: &mut Criterion) {
    let x = Complex::new(0.7, 0.4);
    let mut group = c.benchmark_group("theta");
    for p in [0.0, 0.1, 0.3] {
        let ctx = EllipticContext::elliptic(Complex::new(0.5, 0.0), Complex::new(p, 0.0)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &ctx, |b, ctx| {
            b.iter(|| ctx.theta(black_box(x)).unwrap())
        });
    }
    group.finish();
}

fn jackson(c: &mut Criterion) {
    let ctx = EllipticContext::elliptic(Complex::new(0.5, 0.2), Complex::new(0.2, 0.0)).unwrap();
    let (a, b, cc, xi) = (
        Complex::new(0.7, 0.1),
        Complex::new(1.3, 0.2),
        Complex::new(0.6, -0.3),
        Complex::new(1.1, 0.0),
    );
    let mut group = c.benchmark_group("jackson");
    for n in [2usize, 6, 12] {
        let spec = SeriesSpec::jackson(a, b, cc, xi, n, &ctx);
        group.bench_with_input(BenchmarkId::from_parameter(n), &spec, |bch, s| {
            bch.iter(|| eval_v12(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let cfg = SampleConfig::new(1, 16);
    c.bench_function("verify/biorth/elliptic/16", |b| {
        b.iter(|| verify(Suite::Biorth, Level::Elliptic, &cfg).unwrap())
    });
}

criterion_group!(benches, theta, jackson, suite);
criterion_main!(benches);
