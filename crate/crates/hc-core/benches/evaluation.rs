use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hc_core::appendixb::solve_range;
use hc_core::exec::Parallelism;
use hc_core::graded::{Convention, MultiMap};
use hc_core::nr::LinftyStructure;
use hc_core::structures::{bold_mu, Model};
use hc_core::suites::{map_identity, observable_samples, SuiteOptions};

fn modes() -> [(&'static str, Parallelism); 2] {
    [
        ("sequential", Parallelism::Sequential),
        ("parallel", Parallelism::available()),
    ]
}

fn nilpotency(c: &mut Criterion) {
    let model = Model::r4();
    let square = LinftyStructure::new(bold_mu(&model, 5)).square();
    let zero = MultiMap::zero(Convention::Shifted, 2);
    let mut group = c.benchmark_group("nilpotency-r4");
    group.sample_size(10);
    for k in [3, 5] {
        let samples = observable_samples(&model, &SuiteOptions::default(), "bench", k, 32);
        for (name, mode) in modes() {
            group.bench_with_input(BenchmarkId::new(name, k), &samples, |b, s| {
                b.iter(|| map_identity("bench".into(), "", &square, &zero, s.clone(), mode))
            });
        }
    }
    group.finish();
}

fn linear_systems(c: &mut Criterion) {
    let mut group = c.benchmark_group("commutator-systems");
    group.sample_size(10);
    let ns: Vec<usize> = (5..=21).step_by(2).collect();
    for (name, mode) in modes() {
        group.bench_function(name, |b| b.iter(|| solve_range(ns.clone(), mode)));
    }
    group.finish();
}

criterion_group!(benches, nilpotency, linear_systems);
criterion_main!(benches);
