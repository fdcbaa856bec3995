//! Refinement behaviour of the fractional operators and the Picard solver:
//! composition of integrals, derivative/integral inversion, and solution
//! convergence under grid doubling.

use fuzzy_ck::{
    ck_derivative, closed_form_power_integral, katugampola_integral, monomial_curve,
    picard_solve_single, saturating_deck, Branch, DarbouxProblem, FracOrder, FuzzyGridFn, Grid2,
    LevelDeck, SingleRhs, SolverOptions,
};

/// Largest Hausdorff gap between two node functions over interior nodes
/// (both boundary rings excluded).
fn interior_gap(f: &FuzzyGridFn, g: &FuzzyGridFn) -> f64 {
    let (n, m) = (f.grid().n(), f.grid().m());
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        for j in 1..m - 1 {
            worst = worst.max(f.value(i, j).hausdorff(g.value(i, j)).unwrap());
        }
    }
    worst
}

/// Composing two quarter-order integrals must converge to the closed form
/// of the half-order integral as the mesh refines, at first order or better.
#[test]
fn integral_composition_refines_toward_the_combined_order() {
    let rho = (1.5, 1.5);
    let inner = FracOrder::new((0.25, 0.25), rho).unwrap();
    let combined = FracOrder::new((0.5, 0.5), rho).unwrap();

    let defect = |n: usize| -> f64 {
        let grid = Grid2::new(1.0, 1.0, n, n, rho).unwrap();
        // Density s^ρ1 t^ρ2 is linear on the transformed mesh, so each single
        // application is exact at the nodes and the defect isolates the error
        // of composing discrete operators.
        let g = FuzzyGridFn::from_crisp_fn(&grid, 1, |x, y| {
            x.powf(rho.0) * y.powf(rho.1)
        })
        .unwrap();
        let composed = katugampola_integral(&katugampola_integral(&g, inner).unwrap(), inner)
            .unwrap();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let exact =
                    closed_form_power_integral(grid.x(i), grid.y(j), combined).unwrap();
                let got = composed.value(i, j).support().mid();
                worst = worst.max((got - exact).abs());
            }
        }
        worst
    };

    let d17 = defect(17);
    let d33 = defect(33);
    let d65 = defect(65);
    assert!(d33 < d17, "defect grew under refinement: {d17} -> {d33}");
    assert!(d65 < d33, "defect grew under refinement: {d33} -> {d65}");
    assert!(d65 <= 5e-3, "defect on the finest mesh too large: {d65}");
    let order = (d33 / d65).log2();
    assert!(order >= 1.0, "observed refinement order {order} below 1");
}

/// Applying the derivative after the integral of the same order must return
/// the original fuzzy density on interior nodes, improving with refinement.
#[test]
fn derivative_inverts_the_integral_on_interior_nodes() {
    let order = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
    let levels = 10;
    let band = LevelDeck::triangular(1.0, 2.0, 3.0, levels).unwrap();

    let defect = |n: usize| -> f64 {
        let grid = Grid2::new(1.0, 1.0, n, n, order.rho()).unwrap();
        let g = FuzzyGridFn::try_from_fn(&grid, levels, |x, y| band.scale(x * y)).unwrap();
        let integrated = katugampola_integral(&g, order).unwrap();
        let recovered = ck_derivative(&integrated, order).unwrap();
        interior_gap(&recovered, &g)
    };

    let d33 = defect(33);
    let d65 = defect(65);
    assert!(d65 < d33, "inversion defect grew under refinement: {d33} -> {d65}");
    assert!(d65 <= 1e-2, "inversion defect on the finest mesh too large: {d65}");
}

/// Picard solutions of a saturating-feedback problem must converge under
/// grid doubling at first order or better (compared on shared nodes against
/// the finest run).
#[test]
fn picard_solution_refines_at_first_order() {
    let solve = |n: usize| {
        let problem = DarbouxProblem {
            order: FracOrder::new((0.5, 0.5), (1.5, 1.5)).unwrap(),
            domain: (0.5, 1.0),
            xi1: monomial_curve(1.0, 2.0, 3.0, 1.0),
            xi2: monomial_curve(1.0, 2.0, 3.0, 2.0),
            rhs: SingleRhs::new(|x, y, u: &LevelDeck| {
                saturating_deck(u)?.scale(0.5 * x * y)
            })
            .with_hint(0.25),
            branch: Branch::FirstKind,
        };
        let options = SolverOptions {
            n,
            m: n,
            levels: 8,
            tol: 1e-10,
            max_iter: 60,
            ..SolverOptions::default()
        };
        let report = picard_solve_single(&problem, &options).unwrap();
        assert!(report.converged, "solver did not converge on n = {n}");
        report.solution
    };

    let coarse = solve(17);
    let mid = solve(33);
    let fine = solve(65);

    // Meshes double panel counts, so coarse node i coincides with fine
    // node 4i (and mid node 2i with fine node 4i) exactly.
    let against_fine = |sol: &FuzzyGridFn, step: usize| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..17 {
            for j in 0..17 {
                let gap = sol
                    .value(i * step, j * step)
                    .hausdorff(fine.value(i * 4, j * 4))
                    .unwrap();
                worst = worst.max(gap);
            }
        }
        worst
    };

    let e17 = against_fine(&coarse, 1);
    let e33 = against_fine(&mid, 2);
    assert!(e33 < e17, "solution error grew under refinement: {e17} -> {e33}");
    let order = (e17 / e33).log2();
    assert!(order >= 1.0, "observed solution order {order} below 1");
}
