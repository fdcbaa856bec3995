//! Independent references the production operators are tested against.
//!
//! Nothing in this module is used by the solvers. The routines here compute
//! the same quantities along structurally different paths — closed forms,
//! a singularity-removing brute-force quadrature, and operator identities —
//! so that agreement is meaningful evidence rather than a tautology.

use crate::error::{Error, Result};
use crate::gamma::gamma_fn;
use crate::grid::{FuzzyGridFn, Grid2};
use crate::operators::{ck_derivative, katugampola_integral, FracOrder};

/// One named cross-check with its observed and allowed errors.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    /// Whether `tolerance` applies to the relative error (else absolute).
    pub relative: bool,
    pub passed: bool,
}

impl OracleReport {
    pub fn check(
        name: impl Into<String>,
        computed: f64,
        reference: f64,
        tolerance: f64,
        relative: bool,
    ) -> Self {
        let abs_err = (computed - reference).abs();
        let rel_err = if reference != 0.0 {
            abs_err / reference.abs()
        } else {
            f64::INFINITY
        };
        let passed = if relative {
            rel_err <= tolerance
        } else {
            abs_err <= tolerance
        };
        Self {
            name: name.into(),
            computed,
            reference,
            abs_err,
            rel_err,
            tolerance,
            relative,
            passed,
        }
    }
}

/// Closed form of the fractional integral of the constant `c`:
///
/// ```text
/// I^{φ,ρ} c (x, y) = c · (x^ρ₁/ρ₁)^φ₁ (y^ρ₂/ρ₂)^φ₂ / (Γ(φ₁+1) Γ(φ₂+1))
/// ```
pub fn closed_form_const_integral(c: f64, x: f64, y: f64, order: FracOrder) -> Result<f64> {
    let (p1, p2) = order.phi();
    let (r1, r2) = order.rho();
    let g = gamma_fn(p1 + 1.0)? * gamma_fn(p2 + 1.0)?;
    Ok(c * (x.powf(r1) / r1).powf(p1) * (y.powf(r2) / r2).powf(p2) / g)
}

/// Closed form of the fractional integral of `f(s,t) = s^ρ₁ t^ρ₂` via the
/// Beta identity: per axis `ρ^{-φ} · (x^ρ)^{φ+1} / Γ(φ+2)`.
pub fn closed_form_power_integral(x: f64, y: f64, order: FracOrder) -> Result<f64> {
    let (p1, p2) = order.phi();
    let (r1, r2) = order.rho();
    let ax = r1.powf(-p1) * x.powf(r1).powf(p1 + 1.0) / gamma_fn(p1 + 2.0)?;
    let ay = r2.powf(-p2) * y.powf(r2).powf(p2 + 1.0) / gamma_fn(p2 + 2.0)?;
    Ok(ax * ay)
}

/// Brute-force evaluation of the fractional integral of a crisp function
/// at one point, independent of the production weight tables.
///
/// Two substitutions remove the kernel singularities: `u = s^ρ` flattens
/// the scale, then `w = (U − u)^φ` absorbs the Abel kernel, leaving
///
/// ```text
/// I = ρ₁^{-φ₁} ρ₂^{-φ₂} / (Γ(φ₁+1) Γ(φ₂+1))
///     · ∫₀^{U^φ₁} ∫₀^{V^φ₂} f((U − w₁^{1/φ₁})^{1/ρ₁}, (V − w₂^{1/φ₂})^{1/ρ₂}) dw₂ dw₁
/// ```
///
/// with a bounded, O(h²)-friendly integrand handled by the composite
/// trapezoid rule on `panels × panels` cells.
pub fn brute_force_integral(
    f: &dyn Fn(f64, f64) -> f64,
    x: f64,
    y: f64,
    order: FracOrder,
    panels: usize,
) -> Result<f64> {
    if panels == 0 {
        return Err(Error::InvalidParameter(
            "brute-force quadrature needs at least one panel".into(),
        ));
    }
    if !(x >= 0.0) || !(y >= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "evaluation point must be finite and nonnegative, got ({x}, {y})"
        )));
    }
    if x == 0.0 || y == 0.0 {
        return Ok(0.0);
    }
    let (p1, p2) = order.phi();
    let (r1, r2) = order.rho();
    let uu = x.powf(r1);
    let vv = y.powf(r2);
    let w1_top = uu.powf(p1);
    let w2_top = vv.powf(p2);
    let h1 = w1_top / panels as f64;
    let h2 = w2_top / panels as f64;
    let scale = r1.powf(-p1) * r2.powf(-p2) / (gamma_fn(p1 + 1.0)? * gamma_fn(p2 + 1.0)?);

    let coord = |w: f64, top: f64, phi: f64, rho: f64| -> f64 {
        let back = (top - w.powf(1.0 / phi)).max(0.0);
        back.powf(1.0 / rho)
    };

    let mut total = 0.0;
    for i in 0..=panels {
        let w1 = if i == panels { w1_top } else { i as f64 * h1 };
        let s = coord(w1, uu, p1, r1);
        let cw1 = if i == 0 || i == panels { 0.5 } else { 1.0 };
        let mut row = 0.0;
        for j in 0..=panels {
            let w2 = if j == panels { w2_top } else { j as f64 * h2 };
            let t = coord(w2, vv, p2, r2);
            let cw2 = if j == 0 || j == panels { 0.5 } else { 1.0 };
            row += cw2 * f(s, t);
        }
        total += cw1 * row;
    }
    Ok(scale * total * h1 * h2)
}

/// Exact node values of the crisp Darboux solution for a constant
/// right-hand side `F ≡ λ`:
///
/// ```text
/// υ(x, y) = ξ₁(x) + ξ₂(y) − ξ₁(0) + λ · I^{φ,ρ}1(x, y)
/// ```
///
/// Returned row-major (`i * m + j`), for comparison against the solver.
pub fn crisp_darboux_reference(
    xi1: &dyn Fn(f64) -> f64,
    xi2: &dyn Fn(f64) -> f64,
    lambda: f64,
    order: FracOrder,
    grid: &Grid2,
) -> Result<Vec<f64>> {
    let base = xi1(0.0);
    let gap = (base - xi2(0.0)).abs();
    if gap > crate::problem::CORNER_TOL {
        return Err(Error::CornerMismatch(gap));
    }
    let (n, m) = (grid.n(), grid.m());
    let mut out = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let (x, y) = (grid.x(i), grid.y(j));
            let v = xi1(x) + xi2(y) - base + lambda * closed_form_const_integral(1.0, x, y, order)?;
            out.push(v);
        }
    }
    Ok(out)
}

fn crisp_sup_gap(f: &FuzzyGridFn, reference: &dyn Fn(f64, f64) -> f64, interior: bool) -> f64 {
    let grid = f.grid();
    let (n, m) = (grid.n(), grid.m());
    let (lo_i, hi_i) = if interior { (1, n - 1) } else { (0, n) };
    let (lo_j, hi_j) = if interior { (1, m - 1) } else { (0, m) };
    let mut worst: f64 = 0.0;
    for i in lo_i..hi_i {
        for j in lo_j..hi_j {
            let want = reference(grid.x(i), grid.y(j));
            let cell = f.value(i, j).level(0);
            worst = worst
                .max((cell.lo() - want).abs())
                .max((cell.hi() - want).abs());
        }
    }
    worst
}

/// Runs the fixed battery of cross-checks and returns one report per check.
///
/// The battery pits the weight tables, the grid operators, the closed
/// forms, and the brute-force quadrature against each other; the operator
/// identities (semigroup, inversion) are measured at the resolutions the
/// defect bounds are stated for.
pub fn oracle_battery() -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();

    out.push(OracleReport::check(
        "gamma(1.5) vs sqrt(pi)/2",
        gamma_fn(1.5)?,
        0.88622692545275801365,
        1e-12,
        true,
    ));
    out.push(OracleReport::check(
        "gamma(2/3) vs high-precision reference",
        gamma_fn(2.0 / 3.0)?,
        1.3541179394264004169,
        1e-12,
        true,
    ));

    // Weight-table row sums integrate the constant density exactly.
    {
        let wt = crate::quadrature::quad_weights_1d(33, 1.0 / 32.0, 0.5)?;
        let sum: f64 = wt.row(32).iter().sum();
        out.push(OracleReport::check(
            "abel weights: constant density row sum",
            sum,
            1.0 / gamma_fn(1.5)?,
            1e-12,
            true,
        ));
    }
    // ... and linear densities exactly.
    {
        let wt = crate::quadrature::quad_weights_1d(33, 1.0 / 32.0, 0.5)?;
        let val: f64 = wt
            .row(32)
            .iter()
            .enumerate()
            .map(|(j, w)| w * (j as f64 / 32.0))
            .sum();
        out.push(OracleReport::check(
            "abel weights: linear density moment",
            val,
            0.75225277806367504926, // 1/Γ(2.5)
            1e-12,
            true,
        ));
    }

    // Grid operator vs closed form on the constant 1.
    {
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0))?;
        let grid = Grid2::new(1.0, 1.0, 33, 33, order.rho())?;
        let f = FuzzyGridFn::from_crisp_fn(&grid, 1, |_, _| 1.0)?;
        let fi = katugampola_integral(&f, order)?;
        out.push(OracleReport::check(
            "operator vs closed form: constant field",
            fi.value(32, 32).level(0).lo(),
            closed_form_const_integral(1.0, 1.0, 1.0, order)?,
            1e-11,
            true,
        ));
    }

    // Brute force vs closed form, constant integrand (trapezoid is exact).
    {
        let order = FracOrder::new((0.5, 0.75), (1.5, 1.2))?;
        out.push(OracleReport::check(
            "brute force vs closed form: constant field",
            brute_force_integral(&|_, _| 2.0, 0.5, 1.0, order, 128)?,
            closed_form_const_integral(2.0, 0.5, 1.0, order)?,
            1e-12,
            true,
        ));
    }

    // Brute force vs closed form on the power function s^ρ₁ t^ρ₂.
    {
        let order = FracOrder::new((0.5, 0.75), (1.5, 1.2))?;
        let (r1, r2) = order.rho();
        let f = move |s: f64, t: f64| s.powf(r1) * t.powf(r2);
        out.push(OracleReport::check(
            "brute force vs closed form: power field",
            brute_force_integral(&f, 0.5, 0.75, order, 512)?,
            closed_form_power_integral(0.5, 0.75, order)?,
            1e-5,
            true,
        ));
    }

    // Grid operator vs closed form on the same power function (the density
    // is linear per transformed axis, so the tables are exact on it).
    {
        let order = FracOrder::new((0.5, 0.75), (1.5, 1.2))?;
        let (r1, r2) = order.rho();
        let grid = Grid2::new(0.5, 0.75, 33, 33, order.rho())?;
        let f = FuzzyGridFn::from_crisp_fn(&grid, 1, |x, y| x.powf(r1) * y.powf(r2))?;
        let fi = katugampola_integral(&f, order)?;
        out.push(OracleReport::check(
            "operator vs closed form: power field",
            fi.value(32, 32).level(0).lo(),
            closed_form_power_integral(0.5, 0.75, order)?,
            1e-11,
            true,
        ));
    }

    // Semigroup identity I^φ I^ψ = I^{φ+ψ} on g = x^ρ₁ y^ρ₂.
    {
        let rho = (1.5, 1.5);
        let phi = FracOrder::new((0.25, 0.25), rho)?;
        let both = FracOrder::new((0.5, 0.5), rho)?;
        let grid = Grid2::new(1.0, 1.0, 65, 65, rho)?;
        let g = FuzzyGridFn::from_crisp_fn(&grid, 1, |x, y| x.powf(rho.0) * y.powf(rho.1))?;
        let two_step = katugampola_integral(&katugampola_integral(&g, phi)?, phi)?;
        let one_step = katugampola_integral(&g, both)?;
        let defect = crate::grid::h_star_distance(&two_step, &one_step)?;
        out.push(OracleReport::check(
            "semigroup defect at 65 nodes",
            defect,
            0.0,
            5e-3,
            false,
        ));
    }

    // Inversion identity D^φ I^φ g = g on interior nodes.
    {
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0))?;
        let grid = Grid2::new(1.0, 1.0, 65, 65, order.rho())?;
        let g = FuzzyGridFn::from_crisp_fn(&grid, 1, |x, y| x * y)?;
        let gi = katugampola_integral(&g, order)?;
        let back = ck_derivative(&gi, order)?;
        let defect = crisp_sup_gap(&back, &|x, y| x * y, true);
        out.push(OracleReport::check(
            "inversion defect on interior nodes at 65",
            defect,
            0.0,
            1e-2,
            false,
        ));
    }

    // Full solver on a crisp constant-source problem vs the exact solution.
    {
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0))?;
        let grid = Grid2::new(1.0, 1.0, 33, 33, order.rho())?;
        let reference = crisp_darboux_reference(&|x| x, &|y| y * y, 0.5, order, &grid)?;
        let problem = crate::problem::DarbouxProblem {
            order,
            domain: (1.0, 1.0),
            xi1: Box::new(|x, k| crate::deck::LevelDeck::crisp(x, k)),
            xi2: Box::new(|y, k| crate::deck::LevelDeck::crisp(y * y, k)),
            rhs: crate::rhs::SingleRhs::constant(crate::deck::LevelDeck::crisp(0.5, 1)?),
            branch: crate::problem::Branch::FirstKind,
        };
        let options = crate::problem::SolverOptions {
            n: 33,
            m: 33,
            levels: 1,
            ..Default::default()
        };
        let report = crate::solver::picard_solve_single(&problem, &options)?;
        let mut worst: f64 = 0.0;
        for i in 0..33 {
            for j in 0..33 {
                let got = report.solution.value(i, j).level(0).lo();
                worst = worst.max((got - reference[i * 33 + j]).abs());
            }
        }
        out.push(OracleReport::check(
            "crisp solver vs exact constant-source solution",
            worst,
            0.0,
            1e-3,
            false,
        ));
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms_match_frozen_values() {
        let o1 = FracOrder::new((0.5, 0.5), (1.5, 1.5)).unwrap();
        assert_relative_eq!(
            closed_form_const_integral(2.0, 0.5, 1.0, o1).unwrap(),
            1.0094303504679205512,
            max_relative = 1e-13
        );
        let o2 = FracOrder::new((0.5, 0.75), (1.5, 1.2)).unwrap();
        assert_relative_eq!(
            closed_form_power_integral(0.5, 0.75, o2).unwrap(),
            0.038270161197349268546,
            max_relative = 1e-13
        );
    }

    #[test]
    fn brute_force_is_exact_on_constants() {
        let order = FracOrder::new((0.5, 0.75), (1.5, 1.2)).unwrap();
        let got = brute_force_integral(&|_, _| 2.0, 0.5, 1.0, order, 64).unwrap();
        let want = closed_form_const_integral(2.0, 0.5, 1.0, order).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }

    #[test]
    fn brute_force_converges_on_the_power_field() {
        let order = FracOrder::new((0.5, 0.75), (1.5, 1.2)).unwrap();
        let (r1, r2) = order.rho();
        let f = move |s: f64, t: f64| s.powf(r1) * t.powf(r2);
        let want = closed_form_power_integral(0.5, 0.75, order).unwrap();
        let coarse = (brute_force_integral(&f, 0.5, 0.75, order, 128).unwrap() - want).abs();
        let fine = (brute_force_integral(&f, 0.5, 0.75, order, 512).unwrap() - want).abs();
        assert!(fine < coarse, "no refinement: {coarse} -> {fine}");
        assert!(fine / want.abs() <= 1e-5, "relative error {}", fine / want);
    }

    #[test]
    fn brute_force_vanishes_on_the_axes() {
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
        assert_eq!(
            brute_force_integral(&|_, _| 3.0, 0.0, 1.0, order, 16).unwrap(),
            0.0
        );
        assert_eq!(
            brute_force_integral(&|_, _| 3.0, 1.0, 0.0, order, 16).unwrap(),
            0.0
        );
    }

    #[test]
    fn reference_solution_respects_the_boundary_data() {
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
        let grid = Grid2::new(1.0, 1.0, 9, 9, order.rho()).unwrap();
        let vals = crisp_darboux_reference(&|x| x, &|y| y * y, 2.0, order, &grid).unwrap();
        for i in 0..9 {
            assert_relative_eq!(vals[i * 9], grid.x(i), max_relative = 1e-14);
        }
        for j in 0..9 {
            let want = grid.y(j) * grid.y(j);
            let got = vals[j];
            assert!((got - want).abs() <= 1e-14, "column data off: {got} vs {want}");
        }
    }

    #[test]
    fn battery_passes_end_to_end() {
        for report in oracle_battery().unwrap() {
            assert!(
                report.passed,
                "oracle `{}` failed: computed {:.6e}, reference {:.6e}, abs {:.3e}, rel {:.3e}",
                report.name, report.computed, report.reference, report.abs_err, report.rel_err
            );
        }
    }
}
