use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use wronskia::geometry::certify_tzitzeica;
use wronskia::numkit::{airy, constant, rk4_linear3};
use wronskia::reduction::{run, SeedKind};
use wronskia::{build_family, FamilySpec, Grid, SampledCurve, SeedSolution};

fn bench_airy(c: &mut Criterion) {
    let xs: Vec<f64> = (0..=240).map(|i| -12.0 + 0.1 * i as f64).collect();
    c.bench_function("airy sweep [-12, 12]", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| airy(black_box(x)).unwrap().ai)
                .sum::<f64>()
        })
    });
}

fn bench_rk4(c: &mut Criterion) {
    let grid = Grid::uniform(0.0, 2.0, 2001).unwrap();
    c.bench_function("rk4 third order, 2001 points", |b| {
        b.iter(|| {
            rk4_linear3(
                constant(0.0),
                constant(-1.0),
                1.0,
                black_box([1.0, 0.0, 0.0]),
                &grid,
            )
            .unwrap()
        })
    });
}

fn bench_certify(c: &mut Criterion) {
    let grid = Grid::uniform(1.1, 5.0, 2001).unwrap();
    let fam = build_family(&FamilySpec::Quadric, &grid).unwrap();
    let curve = SampledCurve::from_set(&fam.set, &grid, "example4").unwrap();
    c.bench_function("certify 2001-point curve", |b| {
        b.iter(|| certify_tzitzeica(black_box(&curve), Some(-3.375), 1e-5))
    });
}

fn bench_pipeline(c: &mut Criterion) {
    let grid = Grid::uniform(1.1, 5.0, 2001).unwrap();
    let seed = SeedSolution::from_kind(SeedKind::Power(-1.5), -3.375).unwrap();
    c.bench_function("reduction pipeline + sampling", |b| {
        b.iter(|| {
            let out = run(black_box(&seed), &grid).unwrap();
            SampledCurve::from_set(&out.set, &grid, "reduce").unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_airy,
    bench_rk4,
    bench_certify,
    bench_pipeline
);
criterion_main!(benches);
