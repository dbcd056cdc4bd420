use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use hamdist_bench::random_instance;
use hamdist_core::{stream_init, Rng, Variant};

fn per_character(c: &mut Criterion) {
    let mut g = c.benchmark_group("stream");
    g.sample_size(10);
    let (n, m) = (1 << 16, 1 << 11);
    let (p, t) = random_instance(n, m, 4, 1);
    g.throughput(Throughput::Elements(n as u64));
    for (name, variant) in [("primary", Variant::Primary), ("alternative", Variant::Alternative)] {
        for &k in &[16usize, 256] {
            g.bench_with_input(BenchmarkId::new(name, k), &k, |b, &k| {
                b.iter(|| {
                    let mut st = stream_init(&p, k, 1.0 / 3.0, variant, &mut Rng::new(1)).unwrap();
                    let mut last = None;
                    for &ch in &t {
                        last = st.push(black_box(ch)).or(last);
                    }
                    last
                })
            });
        }
    }
    g.finish();
}

criterion_group!(benches, per_character);
criterion_main!(benches);
