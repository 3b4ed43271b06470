use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use infoprox::bench::run_suite;
use infoprox::problems::ProblemKind;

const ROWS: usize = 8;

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (kind, size) in [
        (ProblemKind::Cc, (4, 1)),
        (ProblemKind::Crd, (8, 0)),
        (ProblemKind::Ree, (2, 2)),
    ] {
        let sizes = vec![size; ROWS];
        for (label, sequential) in [("parallel", false), ("sequential", true)] {
            group.bench_with_input(BenchmarkId::new(label, kind), &sizes, |b, sizes| {
                b.iter(|| run_suite(kind, sizes, 7, sequential))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
