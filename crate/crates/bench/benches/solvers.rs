use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fasolve::fixtures::{self, RandomSpec};
use fasolve::heuristics::{greedy_cut, Effective};
use fasolve::oracle::brute_force_fasp;
use fasolve::{cut, cut_resolve, essential_minor, fasp_to_fvsp, resolve, WeightedMultiDigraph};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn suite(n: usize, seed: u64) -> Vec<WeightedMultiDigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| fixtures::random_graph(&mut rng, &RandomSpec::small()))
        .collect()
}

fn diamond_chains(c: &mut Criterion) {
    let mut group = c.benchmark_group("diamond_chain");
    for d in [1, 2, 4, 8] {
        let g = fixtures::diamond_chain(d);
        group.bench_with_input(BenchmarkId::new("cut_resolve", d), &g, |b, g| {
            b.iter(|| cut_resolve(black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("greedy_xi", d), &g, |b, g| {
            b.iter(|| greedy_cut(black_box(g), Effective::Xi).unwrap())
        });
    }
    group.finish();
}

fn random_suite(c: &mut Criterion) {
    let graphs = suite(50, 11);
    let mut group = c.benchmark_group("random_small_x50");
    group.bench_function("cut", |b| {
        b.iter(|| graphs.iter().map(|g| cut(g).unwrap().weight).sum::<u64>())
    });
    group.bench_function("cut_resolve", |b| {
        b.iter(|| graphs.iter().map(|g| cut_resolve(g).unwrap().weight).sum::<u64>())
    });
    group.bench_function("greedy_eta", |b| {
        b.iter(|| {
            graphs
                .iter()
                .map(|g| greedy_cut(g, Effective::Eta).unwrap().weight)
                .sum::<u64>()
        })
    });
    group.bench_function("oracle", |b| {
        b.iter(|| graphs.iter().map(|g| brute_force_fasp(g).unwrap().optimum).sum::<u64>())
    });
    group.finish();
}

fn preprocessing(c: &mut Criterion) {
    let cactus = fixtures::cactus().graph;
    let d5 = fixtures::diamond_chain(5);
    c.bench_function("essential_minor/diamond_5", |b| {
        b.iter(|| essential_minor(black_box(&d5)).unwrap())
    });
    c.bench_function("resolve/cactus", |b| b.iter(|| resolve(black_box(&cactus)).unwrap()));
    c.bench_function("line_graph/diamond_5", |b| b.iter(|| fasp_to_fvsp(black_box(&d5))));
}

criterion_group!(benches, diamond_chains, random_suite, preprocessing);
criterion_main!(benches);
