use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use schmidt_core::extremal::{quantum_max_a, Model, SearchOptions};
use schmidt_core::scenarios::{MeasurementSet, ScenarioSpec};
use schmidt_core::stats::{ideal_distribution, replicate_reports};
use schmidt_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn replicates(c: &mut Criterion) {
    let spec = ScenarioSpec::a(MeasurementSet::SetI, 0).unwrap();
    let dist = ideal_distribution(&spec).unwrap();
    let mut group = c.benchmark_group("replicates_1000");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| replicate_reports(&spec, &dist, 100_000, 4, 1000, 1, exec).unwrap())
        });
    }
    group.finish();
}

fn restarts(c: &mut Criterion) {
    let mut group = c.benchmark_group("quantum_n5_d3_restarts");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = SearchOptions { restarts: 64, seed: 0, exec };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| quantum_max_a(5, 3, Model::QuantumComplex, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, replicates, restarts);
criterion_main!(benches);
