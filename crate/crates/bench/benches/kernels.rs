//! Benchmarks for the hot kernels: rank oracles, expansion verification,
//! product sampling, and the separator feasibility solve.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use subrank::corpus::verified_family_mb;
use subrank::dist::ProductDistribution;
use subrank::expander::{sample_expander, verify_expansion, ExpansionParams};
use subrank::learn::{learn_general, LabeledSample};
use subrank::rng::{stream, Stream};

fn bench_rank(c: &mut Criterion) {
    let (_, fam) = verified_family_mb(32, 512, 8, 6, 2, &[1, 5, 9], 0, 400)
        .expect("verified instance in seed range");
    let dist = ProductDistribution::uniform(512, 0.25).unwrap();
    let mut rng = stream(1, Stream::Trial, 0);
    let sets: Vec<_> = (0..64).map(|_| dist.sample(&mut rng)).collect();
    c.bench_function("planted_rank_512", |b| {
        b.iter(|| {
            let mut acc = 0usize;
            for s in &sets {
                acc += fam.spec().rank(black_box(s));
            }
            acc
        })
    });
}

fn bench_expansion(c: &mut Criterion) {
    let graph = sample_expander(64, 512, 8, 7).unwrap();
    let params = ExpansionParams::new(8, 2, 0.1875).unwrap();
    c.bench_function("verify_expansion_k64_l2", |b| {
        b.iter(|| verify_expansion(black_box(&graph), &params).unwrap().passes)
    });
}

fn bench_product_sampling(c: &mut Criterion) {
    let dist = ProductDistribution::uniform(2000, 0.5).unwrap();
    c.bench_function("product_draw_n2000", |b| {
        let mut rng = stream(3, Stream::Trial, 0);
        b.iter(|| dist.sample(black_box(&mut rng)).len())
    });
}

fn bench_separator(c: &mut Criterion) {
    let n = 30usize;
    let dist = ProductDistribution::uniform(n, 0.5).unwrap();
    let mut rng = stream(5, Stream::Trial, 0);
    let samples: Vec<LabeledSample> = (0..20_000)
        .map(|_| {
            let s = dist.sample(&mut rng);
            let v = s.len() as f64;
            LabeledSample::new(s, v).unwrap()
        })
        .collect();
    c.bench_function("separator_20k_points_n30", |b| {
        b.iter(|| learn_general(black_box(&samples), 9).unwrap())
    });
}

criterion_group!(
    benches,
    bench_rank,
    bench_expansion,
    bench_product_sampling,
    bench_separator
);
criterion_main!(benches);
