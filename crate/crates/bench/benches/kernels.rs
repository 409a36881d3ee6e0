//! Benchmarks for the hot paths: switch construction and application, the
//! Jacobi eigensolver, coherent-information evaluation, the postselection
//! grid search, and the Monte Carlo herald loop.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use causal_switch::eig::hermitian_eig;
use causal_switch::entropy::{
    coherent_information_at, maximize_coherent_information, OptimizerConfig,
};
use causal_switch::filtration::search_postselection;
use causal_switch::herald::{bb84_states, monte_carlo_herald};
use causal_switch::matrix::Matrix;
use causal_switch::pauli;
use causal_switch::rng::SplitMix64;
use causal_switch::state::DensityMatrix;
use causal_switch::testkit;
use causal_switch_bench::{reference_input, reference_switch};

fn bench_switch(c: &mut Criterion) {
    let rho = reference_input();
    c.bench_function("switch_build_and_apply", |b| {
        b.iter(|| {
            let switched = reference_switch();
            black_box(switched.apply(black_box(&rho)).unwrap())
        })
    });

    let switched = reference_switch();
    c.bench_function("switch_induced_choi", |b| {
        b.iter(|| black_box(switched.choi().unwrap()))
    });
}

fn bench_eig(c: &mut Criterion) {
    let mut rng = SplitMix64::new(11);
    let h8 = testkit::random_hermitian(&mut rng, 8);
    c.bench_function("jacobi_eig_8x8", |b| {
        b.iter(|| black_box(hermitian_eig(black_box(&h8)).unwrap()))
    });
}

fn bench_coherent_information(c: &mut Criterion) {
    let channel = reference_switch().induced_channel().unwrap();
    let maxent = DensityMatrix::maximally_entangled_qubits();
    c.bench_function("coherent_information_at_maxent", |b| {
        b.iter(|| black_box(coherent_information_at(&channel, &maxent).unwrap()))
    });

    let config = OptimizerConfig {
        random_starts: 2,
        max_iterations: 200,
        ..OptimizerConfig::default()
    };
    c.bench_function("maximize_coherent_information_small", |b| {
        b.iter(|| black_box(maximize_coherent_information(&channel, &config).unwrap()))
    });
}

fn bench_filtration(c: &mut Criterion) {
    let e0 = vec![(Matrix::identity(2), 0.5), (pauli::x(), 0.5)];
    let e1 = vec![(Matrix::identity(2), 0.5), (pauli::z(), 0.5)];
    c.bench_function("postselection_search_grid8", |b| {
        b.iter(|| black_box(search_postselection(&e0, &e1, 8).unwrap()))
    });
}

fn bench_herald(c: &mut Criterion) {
    let inputs = bb84_states();
    c.bench_function("monte_carlo_herald_10k", |b| {
        b.iter(|| black_box(monte_carlo_herald(0.5, 0.5, 10_000, 42, &inputs).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_switch,
    bench_eig,
    bench_coherent_information,
    bench_filtration,
    bench_herald
);
criterion_main!(benches);
