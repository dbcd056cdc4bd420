use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hamdist_bench::{planted, random_instance};
use hamdist_core::gen::Plant;
use hamdist_core::{all_distances_naive, solve_exact, Rng};

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    for &n in &[1 << 14, 1 << 16, 1 << 18] {
        let m = n / 16;
        let k = (m as f64).sqrt().ceil() as usize;
        let (p, t) = random_instance(n, m, 4, 1);
        g.bench_with_input(BenchmarkId::new("random", n), &n, |b, _| b.iter(|| solve_exact(black_box(&p), black_box(&t), k, &mut Rng::new(1)).unwrap()));
        let (p, t) = planted(n, m, 4, Plant::Periodic { rho: 5, noise: 0.001 }, 1);
        g.bench_with_input(BenchmarkId::new("periodic", n), &n, |b, _| b.iter(|| solve_exact(black_box(&p), black_box(&t), k, &mut Rng::new(1)).unwrap()));
    }
    let (p, t) = random_instance(1 << 14, 1 << 10, 4, 2);
    g.bench_function("naive/16384", |b| b.iter(|| all_distances_naive(black_box(&p), black_box(&t)).unwrap()));
    g.finish();
}

criterion_group!(benches, exact);
criterion_main!(benches);
