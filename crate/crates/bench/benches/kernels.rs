use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use bosecrit::semiclassical::{
    critical_chemical_potential, ideal_condensation_temperature, numeric_condensation_temperature,
    quantum_concentration, self_consistent_density, solve_reduced_density, DensitySolverOptions,
};
use bosecrit::specialfn::{bose_function, g_double_sum_detailed, zeta, SeriesAccuracy};
use bosecrit::{FormulaMode, NumericOptions, ThermalState};
use bosecrit_bench::{radial_grid, rb87};

fn special_functions(c: &mut Criterion) {
    let acc = SeriesAccuracy::TIGHT;
    c.bench_function("bose_function g_3/2(0.5)", |b| {
        b.iter(|| bose_function(black_box(1.5), black_box(0.5), &acc))
    });
    c.bench_function("bose_function g_3/2(0.999)", |b| {
        b.iter(|| bose_function(black_box(1.5), black_box(0.999), &acc))
    });
    let tight = SeriesAccuracy::new(1e-13, 10_000_000).unwrap();
    c.bench_function("G_3/2(1)", |b| b.iter(|| g_double_sum_detailed(black_box(1.0), &tight)));
}

fn density(c: &mut Criterion) {
    let opts = DensitySolverOptions::default();
    c.bench_function("reduced density, one point", |b| {
        b.iter(|| solve_reduced_density(black_box(0.1), black_box(0.3), &opts))
    });

    let gas = rb87();
    let t = ideal_condensation_temperature(&gas, FormulaMode::DerivedConsistent);
    let n_centre = quantum_concentration(&gas, t) * zeta(1.5).unwrap();
    let mu = critical_chemical_potential(&gas, t, n_centre).unwrap();
    let state = ThermalState::new(t, mu).unwrap();
    let grid = radial_grid(5e-5, 1001);
    c.bench_function("density profile, 1001 points", |b| {
        b.iter(|| self_consistent_density(&gas, &state, black_box(&grid), &opts))
    });
}

fn critical_temperature(c: &mut Criterion) {
    let gas = rb87();
    let opts = NumericOptions::default();
    let mut group = c.benchmark_group("numeric T_c");
    group.sample_size(10);
    group.bench_function("rb87", |b| {
        b.iter(|| numeric_condensation_temperature(black_box(&gas), &opts))
    });
    group.finish();
}

criterion_group!(benches, special_functions, density, critical_temperature);
criterion_main!(benches);
