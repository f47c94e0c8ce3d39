use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nematic_core::initial::{generate_initial, random_field, rng_from_seed, Profile, RandomSpec};
use nematic_core::lp::bony_split;
use nematic_core::{DyadicPartition, Grid, LeslieCoefficients, Solver, SolverConfig, UniquenessRecord};

fn fields(n: usize) -> (Grid, nematic_core::SpectralField, nematic_core::SpectralField) {
    let grid = Grid::with_size(n).unwrap();
    let mut rng = rng_from_seed(1);
    let f = random_field(&grid, &mut rng, |k| (1.0 + k).powi(-2));
    let g = random_field(&grid, &mut rng, |k| (1.0 + k).powi(-2));
    (grid, f, g)
}

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("fft");
    for n in [64, 128] {
        let (_, f, g) = fields(n);
        group.bench_with_input(BenchmarkId::new("inverse", n), &f, |b, f| b.iter(|| black_box(f.to_real_samples())));
        group.bench_with_input(BenchmarkId::new("padded_product", n), &(f, g), |b, (f, g)| {
            b.iter(|| black_box(f.mul_field(g).unwrap()))
        });
    }
    group.finish();
}

fn littlewood_paley(c: &mut Criterion) {
    let (grid, f, g) = fields(64);
    let part = DyadicPartition::new(&grid);
    c.bench_function("bony_split/64", |b| b.iter(|| black_box(bony_split(&part, &f, &g).unwrap())));
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for n in [32, 64] {
        let grid = Grid::with_size(n).unwrap();
        let profile = Profile::Random(RandomSpec {
            seed: 3,
            decay: 3.0,
            amplitude: 1.0,
        });
        let state = generate_initial(&grid, &profile).unwrap();
        let cfg = SolverConfig::new(grid.spec(), 1e-3, 1.0, LeslieCoefficients::ansatz(1.0).unwrap());
        let mut solver = Solver::with_grid(cfg, &grid).unwrap();
        group.bench_function(BenchmarkId::new("imex1", n), |b| {
            b.iter_batched(
                || state.clone(),
                |mut s| {
                    solver.step(&mut s).unwrap();
                    s
                },
                criterion::BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn uniqueness(c: &mut Criterion) {
    let grid = Grid::with_size(64).unwrap();
    let part = DyadicPartition::new(&grid);
    let spec = |seed| {
        Profile::Random(RandomSpec {
            seed,
            decay: 3.0,
            amplitude: 1.0,
        })
    };
    let a = generate_initial(&grid, &spec(1)).unwrap();
    let b = generate_initial(&grid, &spec(2)).unwrap();
    c.bench_function("uniqueness_record/64", |bch| {
        bch.iter(|| black_box(UniquenessRecord::new(&part, &a, &b, 1.0).unwrap()))
    });
}

criterion_group!(benches, transforms, littlewood_paley, solver, uniqueness);
criterion_main!(benches);
