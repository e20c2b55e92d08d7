use criterion::{black_box, criterion_group, criterion_main, Criterion};
use epispec::encodings::{corpus, solve_conformant_source};
use epispec::engine::{solve, solve_basic, EngineOptions};
use epispec::frontend::{load, parse};
use epispec::transform::to_core;

fn corpus_programs(c: &mut Criterion) {
    let mut group = c.benchmark_group("corpus");
    for (name, text) in corpus::ALL.iter().filter(|(n, _)| !n.contains("planning")) {
        let core = to_core(&load(text).unwrap()).program;
        let opts = EngineOptions::default();
        group.bench_function(format!("{name}/preprocessed"), |b| b.iter(|| solve(black_box(&core), &opts).unwrap()));
        group.bench_function(format!("{name}/basic"), |b| {
            b.iter(|| solve_basic(black_box(&core), &opts).unwrap())
        });
    }
    group.finish();
}

fn conformant_planning(c: &mut Criterion) {
    let domain = parse(corpus::PLANNING_DOMAIN).unwrap();
    let mut group = c.benchmark_group("planning");
    group.sample_size(10);
    for horizon in [1, 2] {
        for jobs in [1, 4] {
            let opts = EngineOptions {
                jobs,
                ..EngineOptions::default()
            };
            group.bench_function(format!("horizon{horizon}/jobs{jobs}"), |b| {
                b.iter(|| solve_conformant_source(domain.clone(), horizon, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, corpus_programs, conformant_planning);
criterion_main!(benches);
