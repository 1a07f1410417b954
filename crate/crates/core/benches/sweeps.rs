use std::f64::consts::PI;
use std::hint::black_box;

use chirow::lattice::{band_structure, Supermode};
use chirow::scattering::{transmission_spectrum, Device};
use chirow::{linspace, Execution, PhysicalParams, TightBindingParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn transmission(c: &mut Criterion) {
    let mut p = PhysicalParams::lossless_reference().normalized();
    p.n_cells = 20;
    let scattering = {
        let mut q = p.clone();
        q.epsilon = 0.0323;
        q.gamma_in = 5e-6;
        q
    };
    let grid = linspace(-8e-4, 8e-4, 20_001);
    let mut group = c.benchmark_group("transmission_spectrum");
    group.sample_size(20);
    for (label, params) in [("two_port", &p), ("scatterer", &scattering)] {
        let d = Device::new(params).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &exec, |b, &exec| {
                b.iter(|| transmission_spectrum(black_box(&d), black_box(&grid), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bands(c: &mut Criterion) {
    let tb = TightBindingParams { g: 0.5, j1: 1.0, j2: 2.0, omega0: 1.0, omega_q: 1.0, gamma_qe: 0.0, n_cells: 1 };
    let ks = linspace(-PI, PI, 100_001);
    let mut group = c.benchmark_group("band_structure");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("forward", name), &exec, |b, &exec| {
            b.iter(|| band_structure(black_box(&tb), Supermode::Forward, black_box(&ks), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, transmission, bands);
criterion_main!(benches);
