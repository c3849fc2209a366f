use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liouvillian_core::exec::Execution;
use liouvillian_core::sweep::{run_sweep_with, sweep_preset};
use std::hint::black_box;

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    for name in ["fig3", "fig4ab"] {
        let spec = sweep_preset(name).expect("preset").spec;
        group.bench_with_input(BenchmarkId::new("sequential", name), &spec, |b, s| {
            b.iter(|| run_sweep_with(black_box(s), Execution::Sequential).unwrap())
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", name), &spec, |b, s| {
            b.iter(|| run_sweep_with(black_box(s), Execution::Parallel).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
