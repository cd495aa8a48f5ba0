use std::time::Duration;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fluctua_core::consts::C;
use fluctua_core::modespace::{build_grid, slab_body_operators, trace_delta_m};
use fluctua_core::spectral::{eq_pressure, noneq_flux, total_force};
use fluctua_core::{
    atom_total_force, AtomConfig, CavityConfig, DielectricModel, PolarizabilityModel,
    SlabBody, TemperatureTriple, Thickness, TraceNorm,
};
use std::f64::consts::PI;

fn silica(thickness: Thickness) -> SlabBody {
    SlabBody::new(thickness, DielectricModel::preset("fused-silica-2osc").unwrap()).unwrap()
}

fn silicon(thickness: Thickness) -> SlabBody {
    SlabBody::new(thickness, DielectricModel::preset("silicon-drude-lorentz").unwrap())
        .unwrap()
}

fn bench_equilibrium_pressure(c: &mut Criterion) {
    let mirrors = CavityConfig::new(
        SlabBody::new(Thickness::SemiInfinite, DielectricModel::PerfectMirror).unwrap(),
        SlabBody::new(Thickness::SemiInfinite, DielectricModel::PerfectMirror).unwrap(),
        1.0e-6,
    )
    .unwrap();
    let dielectrics = CavityConfig::new(
        silica(Thickness::SemiInfinite),
        silicon(Thickness::SemiInfinite),
        5.0e-6,
    )
    .unwrap();
    c.bench_function("eq_pressure mirrors d=1um T=300K", |b| {
        b.iter(|| eq_pressure(black_box(300.0), black_box(&mirrors), 1.0e-6).unwrap())
    });
    c.bench_function("eq_pressure silica-silicon d=5um T=300K", |b| {
        b.iter(|| eq_pressure(black_box(300.0), black_box(&dielectrics), 1.0e-4).unwrap())
    });
}

fn bench_nonequilibrium_spectral(c: &mut Criterion) {
    let cavity = CavityConfig::new(
        silica(Thickness::SemiInfinite),
        silicon(Thickness::SemiInfinite),
        5.0e-6,
    )
    .unwrap();
    let heat_temps = TemperatureTriple::new(700.0, 300.0, 150.0).unwrap();
    c.bench_function("noneq_flux heat d=5um (700,300,150)K", |b| {
        b.iter(|| {
            noneq_flux(black_box(1), black_box(&heat_temps), black_box(&cavity), 1.0e-3)
                .unwrap()
        })
    });

    let fig_cavity = CavityConfig::new(
        silica(Thickness::Finite(2.0e-6)),
        silicon(Thickness::Finite(1.0e-3)),
        5.0e-6,
    )
    .unwrap();
    let force_temps = TemperatureTriple::new(300.0, 300.0, 0.0).unwrap();
    c.bench_function("total_force slabs d=5um (300,300,0)K", |b| {
        b.iter(|| {
            total_force(black_box(&force_temps), black_box(&fig_cavity), 1.0e-3).unwrap()
        })
    });
}

fn bench_atom_force(c: &mut Criterion) {
    let alpha0 = 4.0 * PI * fluctua_core::consts::EPS0 * 1.0e-24;
    let config = AtomConfig::new(
        PolarizabilityModel::Static { alpha0 },
        -2.0e-6,
        silica(Thickness::Finite(2.0e-6)),
    )
    .unwrap();
    let temps = TemperatureTriple::new(0.0, 300.0, 0.0).unwrap();
    c.bench_function("atom_total_force z=-2um (0,300,0)K", |b| {
        b.iter(|| atom_total_force(black_box(&config), black_box(&temps), 1.0e-4).unwrap())
    });
}

fn bench_mode_space(c: &mut Criterion) {
    let omega = 1.2e14;
    let d = 5.0e-6;
    let grid = build_grid(omega, (omega / C).hypot(8.0 / d), 12, 8).unwrap();
    let body1 = silica(Thickness::Finite(2.0e-6));
    let body2 = silicon(Thickness::Finite(3.0e-6));
    let temps = TemperatureTriple::new(700.0, 300.0, 150.0).unwrap();
    c.bench_function("slab_body_operators 12x8 grid", |b| {
        b.iter(|| slab_body_operators(black_box(&grid), black_box(&body1), 0.0).unwrap())
    });
    let ops1 = slab_body_operators(&grid, &body1, 0.0).unwrap();
    let ops2 = slab_body_operators(&grid, &body2, d).unwrap();
    c.bench_function("trace_delta_m 12x8 grid", |b| {
        b.iter(|| {
            trace_delta_m(
                black_box(2),
                black_box(&grid),
                black_box(&ops1),
                black_box(&ops2),
                black_box(&temps),
                TraceNorm::PerArea,
            )
            .unwrap()
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default()
        .sample_size(10)
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(4));
    targets = bench_equilibrium_pressure,
        bench_nonequilibrium_spectral,
        bench_atom_force,
        bench_mode_space
}

criterion_main!(benches);
