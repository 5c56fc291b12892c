use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use jacobi_fbl::bounds::{dispersion_components, error_probability_bounds};
use jacobi_fbl::spectral::{capacity_approx, solve_delta};
use jacobi_fbl::sweep::{preset, run_sweep};
use jacobi_fbl::make_dims;

fn spectral(c: &mut Criterion) {
    let d = make_dims(4, 6, 16, 60).unwrap();
    c.bench_function("solve_delta", |b| b.iter(|| solve_delta(black_box(&d), black_box(0.316))));
    c.bench_function("capacity_approx", |b| b.iter(|| capacity_approx(black_box(&d), black_box(0.316))));
    c.bench_function("dispersion_components", |b| b.iter(|| dispersion_components(black_box(&d), black_box(0.316))));
    c.bench_function("error_probability_bounds", |b| {
        b.iter(|| error_probability_bounds(black_box(&d), black_box(0.316), black_box(0.37)))
    });
}

fn sweeps(c: &mut Criterion) {
    let fig3 = preset("fig3").unwrap();
    c.bench_function("sweep_fig3", |b| b.iter(|| run_sweep(black_box(&fig3))));
}

criterion_group!(benches, spectral, sweeps);
criterion_main!(benches);
