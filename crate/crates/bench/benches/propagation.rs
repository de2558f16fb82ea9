//! Benchmarks for the propagation and sweep engine: the superoperator
//! exponential dominates sweep cost, the RK4 oracle and the closed forms
//! set the scale of the cross-check overhead.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use ptcoupler::analytic::{coincidence_rate, transfer_matrix};
use ptcoupler::expm::expm;
use ptcoupler::fock::{DensityMatrix, FockBasis, FockState};
use ptcoupler::hom::{fit_gaussian_dip, scan, DistinguishabilityModel};
use ptcoupler::lindblad::{build_liouvillian, propagate, rk4_integrate, spectral_decompose};
use ptcoupler::CouplerParams;

fn setup() -> (FockBasis, CouplerParams, DensityMatrix) {
    let basis = FockBasis::new(2);
    let params = CouplerParams::new(0.25, 0.35).unwrap();
    let rho0 = DensityMatrix::pure(&basis, FockState::new(1, 1)).unwrap();
    (basis, params, rho0)
}

fn bench_expm(c: &mut Criterion) {
    let (basis, params, _) = setup();
    let sup = build_liouvillian(&basis, &params).unwrap();
    let scaled = sup.matrix() * num_complex::Complex64::new(2.5, 0.0);
    c.bench_function("expm_36x36", |b| {
        b.iter(|| expm(black_box(&scaled)).unwrap())
    });
}

fn bench_propagate(c: &mut Criterion) {
    let (basis, params, rho0) = setup();
    let sup = build_liouvillian(&basis, &params).unwrap();
    c.bench_function("propagate_single_point", |b| {
        b.iter(|| propagate(black_box(&rho0), &sup, black_box(2.5)).unwrap())
    });

    let mut group = c.benchmark_group("propagate_grid");
    for n in [50usize, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                (0..n)
                    .map(|i| {
                        let z = 8.0 * i as f64 / (n - 1) as f64;
                        propagate(&rho0, &sup, z).unwrap().trace()
                    })
                    .sum::<f64>()
            })
        });
    }
    group.finish();
}

fn bench_rk4(c: &mut Criterion) {
    let (_, params, rho0) = setup();
    c.bench_function("rk4_z1_step1e-3", |b| {
        b.iter(|| rk4_integrate(black_box(&rho0), &params, 1.0, 1e-3).unwrap())
    });
}

fn bench_spectral(c: &mut Criterion) {
    let (basis, params, _) = setup();
    let sup = build_liouvillian(&basis, &params).unwrap();
    c.bench_function("spectral_decompose_36x36", |b| {
        b.iter(|| spectral_decompose(black_box(&sup)).unwrap())
    });
}

fn bench_closed_forms(c: &mut Criterion) {
    let (_, params, _) = setup();
    c.bench_function("coincidence_rate_sweep_10k", |b| {
        b.iter(|| {
            (0..10_000)
                .map(|i| coincidence_rate(&params, 8.0 * i as f64 / 9_999.0))
                .sum::<f64>()
        })
    });
    c.bench_function("transfer_matrix_single", |b| {
        b.iter(|| transfer_matrix(black_box(&params), black_box(2.5)))
    });
}

fn bench_hom(c: &mut Criterion) {
    let (_, params, _) = setup();
    let model = DistinguishabilityModel::new(1.0, 0.9).unwrap();
    let taus: Vec<f64> = (0..121).map(|i| -3.0 + 0.05 * i as f64).collect();
    let zs: Vec<f64> = (0..20).map(|i| 2.0 + 0.1 * i as f64).collect();
    c.bench_function("hom_scan_20x121", |b| {
        b.iter(|| scan(&params, &model, black_box(&zs), black_box(&taus)))
    });

    let row: Vec<f64> = taus
        .iter()
        .map(|&t| 0.5 - 0.4 * (-t * t / 2.0).exp())
        .collect();
    c.bench_function("gaussian_dip_fit_121pts", |b| {
        b.iter(|| fit_gaussian_dip(black_box(&taus), black_box(&row)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_expm,
    bench_propagate,
    bench_rk4,
    bench_spectral,
    bench_closed_forms,
    bench_hom
);
criterion_main!(benches);
