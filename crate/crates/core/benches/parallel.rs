//! Sequential against rayon execution for the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use periodic_monopole::abelian::{bogomolny_residual, AbelianMonopole, CylBox};
use periodic_monopole::green::green_batch;
use periodic_monopole::modelsolve::poincare_constant_check;
use periodic_monopole::spectral::sphere_laplacian_oracle_with;
use periodic_monopole::{CirclePoint3, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn green(c: &mut Criterion) {
    let q = CirclePoint3::origin();
    let points: Vec<CirclePoint3> = (0..4096)
        .map(|i| {
            let r = 0.05 + 6.0 * (i % 64) as f64 / 64.0;
            let a = 0.37 * i as f64;
            CirclePoint3::new(r * a.cos(), r * a.sin(), 0.11 * i as f64)
        })
        .collect();
    let mut g = c.benchmark_group("green_batch");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| green_batch(&points, &q, 1e-10, e)));
    }
    g.finish();
}

fn bogomolny(c: &mut Criterion) {
    let m = AbelianMonopole::periodic(CirclePoint3::origin(), 2, 1.0, 0.0).unwrap();
    let bx = CylBox { r: [2.0, 3.0], theta: [0.0, 1.0], t: [0.0, 1.0] };
    let mut g = c.benchmark_group("bogomolny_residual");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| bogomolny_residual(&m, &bx, 0.05, 1e-10, e).unwrap()));
    }
    g.finish();
}

fn poincare(c: &mut Criterion) {
    let mut g = c.benchmark_group("poincare_trials");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| poincare_constant_check(1.0, 0.3, 200, 7, e)));
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("sphere_laplacian_oracle");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| sphere_laplacian_oracle_with(1, 4, 200, e).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, green, bogomolny, poincare, spectrum);
criterion_main!(benches);
