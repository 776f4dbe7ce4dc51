use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use slln_bench::{comonotone_y, normal_x, small_experiment};
use slln_core::conditions::minimal_envelope_y;
use slln_core::generators::{sample_x_block, sample_y_block};
use slln_core::{
    full_condition_report, run_experiment, QuadratureSpec, SeedStream, StreamTag, XModel, XVariant,
    YModel, YVariant,
};

const BLOCK: u64 = 100_000;

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampling");
    g.throughput(Throughput::Elements(BLOCK));
    let sx = SeedStream::new(1, 0, StreamTag::X);
    let sy = SeedStream::new(1, 0, StreamTag::Y);
    let normal = normal_x();
    let walsh = XModel::new(XVariant::WalshRademacher { generators: 20 }, 1).unwrap();
    let pareto = YModel::new(YVariant::IidPareto { beta: 0.8 }, 0.5, 0.0).unwrap();
    let cauchy = YModel::new(YVariant::IidCauchy, 0.5, 0.0).unwrap();
    g.bench_function("normal_x", |b| {
        b.iter(|| sample_x_block(&normal, 1..BLOCK + 1, black_box(sx)))
    });
    g.bench_function("walsh_x", |b| {
        b.iter(|| sample_x_block(&walsh, 1..BLOCK + 1, black_box(sx)))
    });
    g.bench_function("pareto_y", |b| {
        b.iter(|| sample_y_block(&pareto, 1..BLOCK + 1, black_box(sy)))
    });
    g.bench_function("cauchy_y", |b| {
        b.iter(|| sample_y_block(&cauchy, 1..BLOCK + 1, black_box(sy)))
    });
    g.finish();
}

fn conditions(c: &mut Criterion) {
    let mut g = c.benchmark_group("conditions");
    g.sample_size(10);
    let y = comonotone_y();
    let spec = QuadratureSpec::default();
    g.bench_function("comonotone_envelope_1e4", |b| {
        b.iter(|| minimal_envelope_y(&y, black_box(10_000), &spec))
    });
    let config = small_experiment(10_000, 2);
    g.bench_function("baseline_report", |b| {
        b.iter(|| full_condition_report(black_box(&config)))
    });
    g.finish();
}

fn experiment(c: &mut Criterion) {
    let mut g = c.benchmark_group("experiment");
    g.sample_size(10);
    g.throughput(Throughput::Elements(100_000 * 16));
    g.bench_function("baseline_1e5x16", |b| {
        b.iter_batched(
            || small_experiment(100_000, 16),
            |cfg| run_experiment(&cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

criterion_group!(benches, sampling, conditions, experiment);
criterion_main!(benches);
