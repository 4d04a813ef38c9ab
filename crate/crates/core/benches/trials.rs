use brcycle::harness::{run_experiment, run_experiment_serial, Algo, Dist, ExperimentConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn sweep() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(Dist::Br, Algo::Alg1, vec![1024, 4096], 8, 0);
    cfg.layers = Some(8);
    cfg
}

fn trials(c: &mut Criterion) {
    let cfg = sweep();
    let mut g = c.benchmark_group("alg1_sweep");
    g.sample_size(10);
    g.bench_function("serial", |b| b.iter(|| run_experiment_serial(&cfg).unwrap()));
    // Without the `parallel` feature this is the serial path again.
    g.bench_function("default", |b| b.iter(|| run_experiment(&cfg).unwrap()));
    g.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
