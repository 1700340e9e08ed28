use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gridpursuit::cops::blockade_3d_counts;
use gridpursuit::lattice::{count_level, min_large_component_bound};
use gridpursuit::{reachable_set, solve_game, GraphSpec, SolveOptions, Vertex};
use gridpursuit_bench::play;

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let opts = SolveOptions::default();
    for (spec, k) in [
        ("grid:3x3", 2),
        ("torus:3x3", 3),
        ("grid:4x4", 3),
        ("grid:4x4", 4),
    ] {
        let g: GraphSpec = spec.parse().unwrap();
        group.bench_function(format!("{spec}/k={k}"), |b| {
            b.iter(|| solve_game(black_box(&g), k, &opts).unwrap())
        });
    }
    group.finish();
}

fn matches(c: &mut Criterion) {
    let mut group = c.benchmark_group("match");
    group.sample_size(10);
    group.bench_function("grid:20x20 grid2d-evader vs greedy", |b| {
        b.iter(|| play("grid:20x20", "greedy", "grid2d-evader", 18, 1, 200))
    });
    group.bench_function("grid:11x11 diagonal-pairs vs max-component", |b| {
        b.iter(|| play("grid:11x11", "diagonal-pairs", "max-component", 10, 1, 400))
    });
    group.bench_function("cube:10 cube-potential vs random", |b| {
        b.iter(|| play("cube:10", "random", "cube-potential", 1, 1, 200))
    });
    group.bench_function("grid:7x7x7 blockade-3d vs random", |b| {
        let k = blockade_3d_counts(7).total();
        b.iter(|| play("grid:7x7x7", "blockade-3d", "random", k, 1, 2000))
    });
    group.finish();
}

fn flood(c: &mut Criterion) {
    let g = GraphSpec::grid(&[30, 30, 30]).unwrap();
    let cops: Vec<Vertex> = (0..30).map(|i| Vertex::new(vec![i, i, 15])).collect();
    let robber = Vertex::new(vec![0, 29, 0]);
    c.bench_function("reachable_set grid:30x30x30", |b| {
        b.iter(|| reachable_set(black_box(&g), &cops, &robber).unwrap())
    });
}

fn lattice(c: &mut Criterion) {
    c.bench_function("count_level 100^3", |b| {
        b.iter(|| count_level(black_box(&[100, 100, 100]), 150))
    });
    c.bench_function("large component bound 50^4", |b| {
        b.iter(|| min_large_component_bound(black_box(500), &[50, 50, 50, 50]))
    });
}

criterion_group!(benches, solver, matches, flood, lattice);
criterion_main!(benches);
