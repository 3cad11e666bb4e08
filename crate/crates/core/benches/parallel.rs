use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use corrlab_core::corr::catalog;
use corrlab_core::ergostats::{koopman_table, KoopmanConfig};
use corrlab_core::exec::{set_execution_mode, ExecutionMode};
use corrlab_core::measures::{
    invariance_residual, pullback_dirac_sampled, sample_annulus_measure, Observable, Part, TestDictionary,
    TestFunction,
};
use corrlab_core::numerics::SpherePoint;

const MODES: [(&str, ExecutionMode); 2] = [
    ("sequential", ExecutionMode::Sequential),
    ("parallel", ExecutionMode::Parallel),
];

fn backward_walks(c: &mut Criterion) {
    let semi = catalog::semigroup_square_half_square();
    let mut group = c.benchmark_group("backward_walks");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "4096 walks, depth 20"), |b| {
            set_execution_mode(mode);
            b.iter(|| pullback_dirac_sampled(&semi, black_box(SpherePoint::real(3.0)), 20, 4096, 0).unwrap())
        });
    }
    group.finish();
}

fn koopman_tables(c: &mut Criterion) {
    let semi = catalog::semigroup_square_half_square();
    let cloud = sample_annulus_measure(256, 1).unwrap();
    let phi = TestFunction::Harmonic { k: 1, part: Part::Re };
    let phis: [&dyn Observable; 1] = [&phi];
    let cfg = KoopmanConfig {
        cap: 256,
        walks: 64,
        ..Default::default()
    };
    let mut group = c.benchmark_group("koopman_table");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "256 points, n = 12"), |b| {
            set_execution_mode(mode);
            b.iter(|| koopman_table(&semi, black_box(&cloud), &phis, 12, &cfg).unwrap())
        });
    }
    group.finish();
}

fn residuals(c: &mut Criterion) {
    let semi = catalog::semigroup_square_half_square();
    let cloud = sample_annulus_measure(5000, 2).unwrap();
    let dict = TestDictionary::default();
    let mut group = c.benchmark_group("invariance_residual");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "5000 points"), |b| {
            set_execution_mode(mode);
            b.iter(|| invariance_residual(&semi, black_box(&cloud), &dict).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, backward_walks, koopman_tables, residuals);
criterion_main!(benches);
