use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hypersquare_core::auxgraphs::{build_g3, count_walks};
use hypersquare_core::certify::certify_hamiltonian;
use hypersquare_core::connector::{connect, DEFAULT_BUDGET};
use hypersquare_core::generators::{complete, dense_random};
use hypersquare_core::pipeline::construct_squared_hamiltonian;
use hypersquare_core::tiling::{classify_pairs, weighted_tiling};
use hypersquare_core::{Config, VertexSeq, VertexSet};

fn primitives(c: &mut Criterion) {
    let h = dense_random(60, 0.8, 1).unwrap();
    c.bench_function("joint_neighborhood3/n60", |b| {
        b.iter(|| h.joint_neighborhood3(black_box(3), black_box(17), black_box(41)).unwrap())
    });
    c.bench_function("is_k4/n60", |b| b.iter(|| h.is_k4(black_box(3), black_box(17), black_box(41), black_box(50))));

    let k = complete(200).unwrap();
    let cycle: VertexSeq = format!("C {}", (0..200).map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
        .parse()
        .unwrap();
    c.bench_function("certify_hamiltonian/complete200", |b| {
        b.iter(|| certify_hamiltonian(&k, black_box(&cycle)).unwrap())
    });
}

fn connector(c: &mut Criterion) {
    let mut g = c.benchmark_group("connect");
    for n in [20usize, 40] {
        let h = dense_random(n, 0.8, 7).unwrap();
        let none = VertexSet::new(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| connect(h, [0, 1, 2], [3, 4, 5], &none, 3, DEFAULT_BUDGET).unwrap())
        });
    }
    g.finish();
}

fn walks(c: &mut Criterion) {
    let h = dense_random(20, 0.8, 3).unwrap();
    let g = build_g3(&h, 0.1);
    c.bench_function("count_walks/g3_n20_len6", |b| b.iter(|| count_walks(&g, 0, 1, black_box(6)).unwrap()));
}

fn tiling(c: &mut Criterion) {
    let mut g = c.benchmark_group("weighted_tiling");
    for n in [40usize, 100] {
        let h = dense_random(n, 0.8, 11).unwrap();
        let oracle = classify_pairs(&h, 0);
        let all = VertexSet::full(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| weighted_tiling(h, &all, &oracle, 0).unwrap())
        });
    }
    g.finish();
}

fn construction(c: &mut Criterion) {
    let h = complete(30).unwrap();
    let cfg = Config::default();
    let mut g = c.benchmark_group("construct");
    g.sample_size(10);
    g.bench_function("complete30", |b| b.iter(|| construct_squared_hamiltonian(&h, &cfg).unwrap()));
    g.finish();
}

criterion_group!(benches, primitives, connector, walks, tiling, construction);
criterion_main!(benches);
