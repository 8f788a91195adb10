use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use zigzag_bench::cavity_points;
use zigzag_core::cavity::{find_rmax, KGrid};
use zigzag_core::experiments::interferometer::interferometer;
use zigzag_core::sweep::{run_sweep, Range, SweepExperiment, SweepSpec, Variable};
use zigzag_core::{cavity_coefficients, solve_interface, CavityCoeffs, InterfaceConfig, InterfaceKind};

fn interface(c: &mut Criterion) {
    let cfg = InterfaceConfig::new(InterfaceKind::ENTER, 3.0).unwrap();
    c.bench_function("solve_interface", |b| {
        b.iter(|| solve_interface(black_box(&cfg), black_box(1.0), 1.0))
    });
}

fn cavity(c: &mut Criterion) {
    let mut group = c.benchmark_group("cavity_coefficients");
    for p in cavity_points() {
        group.bench_with_input(BenchmarkId::from_parameter(p.ea), &p, |b, p| {
            b.iter(|| cavity_coefficients(black_box(p)))
        });
    }
    group.finish();
}

fn rmax(c: &mut Criterion) {
    let grid = KGrid::default();
    c.bench_function("find_rmax", |b| b.iter(|| find_rmax(1.5, black_box(46.45), &grid)));
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec {
        variable: Variable::KOverM,
        range: Range::new(0.1, 20.0, 1024).unwrap(),
        fixed: [(Variable::EaOverM, 10.0), (Variable::MTau, 1.5)].into(),
        experiment: SweepExperiment::Cavity,
    };
    c.bench_function("cavity_sweep_1024", |b| b.iter(|| run_sweep(black_box(&spec))));
}

fn experiments(c: &mut Criterion) {
    let cavity = CavityCoeffs::from_reflectivity(1.618).unwrap();
    c.bench_function("interferometer", |b| b.iter(|| interferometer(black_box(&cavity), 0.3)));
}

criterion_group!(benches, interface, cavity, rmax, sweep, experiments);
criterion_main!(benches);
