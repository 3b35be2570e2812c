use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qreset_core::qmath::{bloch_to_density, eig_hermitian, relative_entropy};
use qreset_core::{
    BlochVector, CompiledProtocol, LindbladConfig, ProcessMap, ProtocolKind, ProtocolSchedule,
};

fn qmath(c: &mut Criterion) {
    let rho = bloch_to_density(&BlochVector::new(0.3, -0.2, 0.5)).unwrap();
    let sigma = bloch_to_density(&BlochVector::new(0.0, 0.1, 0.9)).unwrap();
    c.bench_function("eig_hermitian", |b| {
        b.iter(|| eig_hermitian(black_box(rho.matrix())).unwrap())
    });
    c.bench_function("relative_entropy", |b| {
        b.iter(|| relative_entropy(black_box(&rho), black_box(&sigma)))
    });
}

fn dynamics(c: &mut Criterion) {
    let cfg = LindbladConfig {
        tau: 5.0,
        ..LindbladConfig::reference()
    };
    let schedule = ProtocolSchedule::rotating_gap(0.2, 10.0, 5.0);
    let protocol = CompiledProtocol::new(&schedule, &cfg).unwrap();
    let rho = bloch_to_density(&BlochVector::new(0.3, -0.2, 0.5)).unwrap();
    c.bench_function("evolve_2500_steps", |b| {
        b.iter(|| protocol.evolve(black_box(&rho)).unwrap())
    });

    let map = ProcessMap::build(
        &CompiledProtocol::new(
            &ProtocolSchedule::standard(ProtocolKind::FixedAngleGap),
            &LindbladConfig::reference(),
        )
        .unwrap(),
    );
    let a = BlochVector::new(0.1, 0.2, -0.3);
    c.bench_function("process_map_entropy_production", |b| {
        b.iter(|| map.entropy_production(black_box(&a)))
    });
}

criterion_group!(benches, qmath, dynamics);
criterion_main!(benches);
