//! Hot-path benchmarks: weight-table construction, one integral
//! application, and a small end-to-end Picard solve.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fuzzy_ck::{
    katugampola_integral, monomial_curve, picard_solve_single, Branch, DarbouxProblem,
    FracIntegralOp, FracOrder, FuzzyGridFn, Grid2, LevelDeck, SingleRhs, SolverOptions,
};

fn order() -> FracOrder {
    FracOrder::new((0.5, 0.5), (1.5, 1.5)).unwrap()
}

fn band_field(grid: &Grid2, levels: usize) -> FuzzyGridFn {
    FuzzyGridFn::try_from_fn(grid, levels, |x, y| {
        LevelDeck::triangular(1.0, 2.0, 3.0, levels)?.scale(x * y)
    })
    .unwrap()
}

fn bench_weight_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_table");
    for n in [17usize, 33, 65] {
        let grid = Grid2::new(1.0, 1.0, n, n, (1.5, 1.5)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, grid| {
            b.iter(|| FracIntegralOp::new(grid, order()).unwrap());
        });
    }
    group.finish();
}

fn bench_integral_apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("integral_apply");
    for (n, levels) in [(33usize, 10usize), (65, 10), (33, 40)] {
        let grid = Grid2::new(1.0, 1.0, n, n, (1.5, 1.5)).unwrap();
        let op = FracIntegralOp::new(&grid, order()).unwrap();
        let field = band_field(&grid, levels);
        group.bench_function(format!("n{n}_k{levels}"), |b| {
            b.iter(|| op.apply(&field).unwrap());
        });
    }
    group.finish();
}

fn bench_integral_free_fn(c: &mut Criterion) {
    // Includes table construction, matching one-shot callers.
    let grid = Grid2::new(1.0, 1.0, 33, 33, (1.5, 1.5)).unwrap();
    let field = band_field(&grid, 10);
    c.bench_function("integral_one_shot_n33_k10", |b| {
        b.iter(|| katugampola_integral(&field, order()).unwrap());
    });
}

fn bench_picard_small(c: &mut Criterion) {
    let options = SolverOptions {
        n: 17,
        m: 17,
        levels: 8,
        tol: 1e-8,
        max_iter: 50,
        ..SolverOptions::default()
    };
    c.bench_function("picard_saturating_n17_k8", |b| {
        b.iter(|| {
            let problem = DarbouxProblem {
                order: order(),
                domain: (0.5, 1.0),
                xi1: monomial_curve(1.0, 2.0, 3.0, 1.0),
                xi2: monomial_curve(1.0, 2.0, 3.0, 2.0),
                rhs: SingleRhs::new(|x, y, u: &LevelDeck| {
                    fuzzy_ck::saturating_deck(u)?.scale(0.5 * x * y)
                })
                .with_hint(0.25),
                branch: Branch::FirstKind,
            };
            picard_solve_single(&problem, &options).unwrap()
        });
    });
}

criterion_group!(
    benches,
    bench_weight_table,
    bench_integral_apply,
    bench_integral_free_fn,
    bench_picard_small
);
criterion_main!(benches);
