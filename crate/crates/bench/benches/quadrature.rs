use std::hint::black_box;

use calcverify::quadrature::{integrate_1d, integrate_box, IntegrationBox};
use calcverify::{cordic_sincos, gauss_rule, parse, CordicTable};
use calcverify_bench::{angle_sweep, smooth_3d, EXPRESSIONS};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn rules(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss_rule");
    for n in [4usize, 20, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gauss_rule(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn integration(c: &mut Criterion) {
    c.bench_function("integrate_1d exp n=20", |b| {
        b.iter(|| integrate_1d(f64::exp, black_box(-1.0), 1.0, 20).unwrap())
    });
    let cube = IntegrationBox::new(&[(0.0, 1.0); 3]).unwrap();
    let mut g = c.benchmark_group("integrate_box 3d");
    for n in [4usize, 10] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| integrate_box(smooth_3d, &cube, n).unwrap())
        });
    }
    g.finish();
}

fn cordic(c: &mut Criterion) {
    let angles = angle_sweep(256, 10.0);
    let mut g = c.benchmark_group("sin_cos x256");
    for k in [20usize, 40] {
        let table = CordicTable::new(k).unwrap();
        g.bench_with_input(BenchmarkId::new("cordic", k), &table, |b, t| {
            b.iter(|| {
                angles
                    .iter()
                    .map(|&a| cordic_sincos(a, t).unwrap().sin)
                    .sum::<f64>()
            })
        });
    }
    g.bench_function("host", |b| {
        b.iter(|| angles.iter().map(|a| a.sin()).sum::<f64>())
    });
    g.finish();
}

fn expressions(c: &mut Criterion) {
    let mut g = c.benchmark_group("expr");
    for (i, src) in EXPRESSIONS.iter().enumerate() {
        g.bench_with_input(BenchmarkId::new("parse", i), src, |b, s| {
            b.iter(|| parse(black_box(s), &["x"]).unwrap())
        });
        let e = parse(src, &["x"]).unwrap();
        g.bench_with_input(BenchmarkId::new("eval", i), &e, |b, e| {
            b.iter(|| e.eval(&[black_box(0.7)]).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, rules, integration, cordic, expressions);
criterion_main!(benches);
