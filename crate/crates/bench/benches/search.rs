use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use phasesearch::circuit::unitary_of;
use phasesearch::{build_circuit, lower_full, presets, StateVector, Variant};

fn spec(name: &str, variant: Variant) -> phasesearch::SearchSpec {
    presets::find(name)
        .expect("preset")
        .spec(variant)
        .expect("valid preset")
}

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_circuit");
    for name in presets::names() {
        let s = spec(name, Variant::OptimizedMerged);
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, s| {
            b.iter(|| build_circuit(black_box(s)))
        });
    }
    g.finish();
}

fn simulate(c: &mut Criterion) {
    let mut g = c.benchmark_group("statevector");
    for variant in Variant::ALL {
        let sc = build_circuit(&spec("6q3t", variant)).unwrap();
        g.bench_with_input(
            BenchmarkId::new("run_6q3t", variant),
            &sc.circuit,
            |b, circ| b.iter(|| StateVector::run(black_box(circ)).unwrap()),
        );
    }
    let state = StateVector::run(
        &build_circuit(&spec("6q3t", Variant::OptimizedMerged))
            .unwrap()
            .circuit,
    )
    .unwrap();
    g.bench_function("sample_1000", |b| {
        b.iter(|| state.sample(1000, black_box(7)).unwrap())
    });
    g.finish();
}

fn lower(c: &mut Criterion) {
    let mut g = c.benchmark_group("lower_full");
    g.sample_size(10);
    for name in ["5q2t", "6q3t"] {
        let sc = build_circuit(&spec(name, Variant::OptimizedMerged)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &sc.circuit, |b, circ| {
            b.iter(|| lower_full(black_box(circ)).unwrap())
        });
    }
    g.finish();
}

fn unitary(c: &mut Criterion) {
    let mut g = c.benchmark_group("unitary_of");
    for name in ["2q2t", "5q2t", "6q3t"] {
        let sc = build_circuit(&spec(name, Variant::ModifiedCanonical)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &sc.circuit, |b, circ| {
            b.iter(|| unitary_of(black_box(circ)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, build, simulate, lower, unitary);
criterion_main!(benches);
