use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qgraph_core::dispersion::{GraphKind, GraphSpec};
use qgraph_core::exec::Execution;
use qgraph_core::interval::{Potential, GRAPHENE_SPACING};
use qgraph_core::spectrum::{band_surface, gap_decay_report, SpectrumOptions};
use qgraph_core::verify::{run_suite, VerifyOptions};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn surface(c: &mut Criterion) {
    let q = Potential::graphene().declare_even();
    let g = GraphSpec::uniform(GraphKind::Ncube, 2, GRAPHENE_SPACING, q).unwrap();
    let mut group = c.benchmark_group("band_surface_n2_grid9");
    group.sample_size(10);
    for (name, execution) in MODES {
        let opts = SpectrumOptions {
            execution,
            ..SpectrumOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| band_surface(black_box(&g), 9, (-1.85, 60.0), o).unwrap())
        });
    }
    group.finish();
}

fn gap_decay(c: &mut Criterion) {
    let q = Potential::graphene();
    let mut group = c.benchmark_group("gap_decay_rho200");
    group.sample_size(10);
    for (name, execution) in MODES {
        let opts = SpectrumOptions {
            execution,
            ..SpectrumOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| gap_decay_report(black_box(&q), GRAPHENE_SPACING, 200.0, o).unwrap())
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_suite_25_trials");
    group.sample_size(10);
    for (name, execution) in MODES {
        let opts = VerifyOptions {
            trials: 25,
            execution,
            ..VerifyOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| run_suite(black_box(o)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, surface, gap_decay, verify);
criterion_main!(benches);
