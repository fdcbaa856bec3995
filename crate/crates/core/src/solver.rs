//! Picard iteration for single and coupled Darboux problems, plus the
//! contraction certificates that back the fixed-point argument.
//!
//! The iteration solves the integral form of the problem:
//!
//! ```text
//! υ₀ = h,    υ_{n+1} = h + I^{φ,ρ} F(·, ·, υ_n)        (first kind)
//! υ₀ = h,    υ_{n+1} = h ⊖ (-1) I^{φ,ρ} F(·, ·, υ_n)   (second kind)
//! ```
//!
//! and stops when the sup-Hausdorff distance between consecutive iterates
//! drops to the tolerance. Non-convergence within the iteration cap is an
//! outcome, not an error: the report carries `converged: false` together
//! with the full residual history. As a final guard the solver applies the
//! operator once more to the accepted iterate and reports the fixed-point
//! residual; `converged` requires both distances to pass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deck::LevelDeck;
use crate::error::{Error, Result};
use crate::gamma::gamma_fn;
use crate::grid::{h_star_distance, FuzzyGridFn, Grid2};
use crate::operators::{FracIntegralOp, FracOrder};
use crate::problem::{build_h, Branch, CoupledProblem, DarbouxProblem, SolverOptions};
use crate::rhs::{CoupledRhs, SingleRhs};

/// Where a Lipschitz constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzSource {
    /// Supplied by the right-hand side.
    Hint,
    /// Sampled by the randomized estimator.
    Estimated,
}

/// A Lipschitz constant and its provenance.
#[derive(Debug, Clone, Copy)]
pub struct LipschitzInfo {
    pub value: f64,
    pub source: LipschitzSource,
}

/// Outcome of a single-equation solve.
#[derive(Debug)]
pub struct SolveReport {
    /// Final iterate.
    pub solution: FuzzyGridFn,
    /// Sup-Hausdorff distance of each update, in iteration order.
    pub residuals: Vec<f64>,
    /// Distance between the final iterate and its image under one more
    /// operator application.
    pub fixed_point_residual: f64,
    /// Contraction constant for the solve, when a Lipschitz value is known.
    pub xi_constant: Option<f64>,
    /// Lipschitz constant used for the certificate.
    pub lipschitz: Option<LipschitzInfo>,
    /// Iterations actually performed.
    pub iterations: usize,
    /// Whether both the last update and the fixed-point residual passed
    /// the tolerance.
    pub converged: bool,
}

/// Outcome of a coupled solve.
#[derive(Debug)]
pub struct CoupledSolveReport {
    pub solution_u: FuzzyGridFn,
    pub solution_w: FuzzyGridFn,
    /// Max of the two per-component update distances, per iteration.
    pub residuals: Vec<f64>,
    /// Max of the two fixed-point residuals.
    pub fixed_point_residual: f64,
    /// `(Ξ₁, Ξ₂, Ξ*)` when both Lipschitz values are known.
    pub xi_constants: Option<(f64, f64, f64)>,
    pub lipschitz_u: Option<LipschitzInfo>,
    pub lipschitz_w: Option<LipschitzInfo>,
    pub iterations: usize,
    pub converged: bool,
}

/// Contraction constant of the integral operator on `[0,a] × [0,b]`:
///
/// ```text
/// Ξ = R / (Γ(φ₁+1) Γ(φ₂+1)) · (a^ρ₁/ρ₁)^φ₁ · (b^ρ₂/ρ₂)^φ₂
/// ```
///
/// `Ξ < 1` certifies a unique solution and geometric convergence of the
/// iteration at rate `Ξ`.
pub fn contraction_constant(r: f64, a: f64, b: f64, order: FracOrder) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Lipschitz constant must be finite and nonnegative, got {r}"
        )));
    }
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "domain extents must be positive and finite, got ({a}, {b})"
        )));
    }
    let (p1, p2) = order.phi();
    let (r1, r2) = order.rho();
    let g = gamma_fn(p1 + 1.0)? * gamma_fn(p2 + 1.0)?;
    Ok(r / g * (a.powf(r1) / r1).powf(p1) * (b.powf(r2) / r2).powf(p2))
}

/// Contraction constants `(Ξ₁, Ξ₂, Ξ*)` for a coupled pair sharing one
/// rectangle and one scale pair `ρ`.
pub fn contraction_constants_coupled(
    r1: f64,
    r2: f64,
    a: f64,
    b: f64,
    order_u: FracOrder,
    order_w: FracOrder,
) -> Result<(f64, f64, f64)> {
    if order_u.rho() != order_w.rho() {
        return Err(Error::GridMismatch(
            "coupled equations must share the scale pair rho",
        ));
    }
    let xi1 = contraction_constant(r1, a, b, order_u)?;
    let xi2 = contraction_constant(r2, a, b, order_w)?;
    Ok((xi1, xi2, xi1.max(xi2)))
}

/// Shrinks the rectangle to a sub-rectangle `[0,S] × [0,T]` on which the
/// local existence argument applies:
///
/// ```text
/// x₁^ρ₁ · y₁^ρ₂ ≤ [k Γ(1+φ₁) Γ(1+φ₂) ρ₁^φ₁ ρ₂^φ₂ / (2M)]^{1/(φ₁ φ₂)}
/// ```
///
/// with the budget split evenly between the axes in the transformed
/// measure: `x₁^ρ₁ = y₁^ρ₂ = √bound`. Returns `(min(x₁,a), min(y₁,b))`.
/// With `big_m = 0` the bound is vacuous and the full rectangle returns
/// unchanged.
pub fn domain_shrink(k: f64, big_m: f64, order: FracOrder, a: f64, b: f64) -> Result<(f64, f64)> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "shrink factor k must be positive, got {k}"
        )));
    }
    if !big_m.is_finite() || big_m < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Lipschitz bound M must be nonnegative, got {big_m}"
        )));
    }
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "domain extents must be positive, got ({a}, {b})"
        )));
    }
    if big_m == 0.0 {
        return Ok((a, b));
    }
    let (p1, p2) = order.phi();
    let (r1, r2) = order.rho();
    let g = gamma_fn(p1 + 1.0)? * gamma_fn(p2 + 1.0)?;
    let bound =
        (k * g * r1.powf(p1) * r2.powf(p2) / (2.0 * big_m)).powf(1.0 / (p1 * p2));
    let x1 = bound.powf(1.0 / (2.0 * r1));
    let y1 = bound.powf(1.0 / (2.0 * r2));
    Ok((x1.min(a), y1.min(b)))
}

const EST_LEVELS: usize = 8;

fn random_deck(rng: &mut ChaCha8Rng) -> Result<LevelDeck> {
    let mut v = [
        rng.gen::<f64>(),
        rng.gen::<f64>(),
        rng.gen::<f64>(),
        rng.gen::<f64>(),
    ];
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let levels = (0..=EST_LEVELS)
        .map(|k| {
            let r = k as f64 / EST_LEVELS as f64;
            crate::interval::Interval::new(v[0] + (v[1] - v[0]) * r, v[3] - (v[3] - v[2]) * r)
        })
        .collect::<Result<Vec<_>>>()?;
    LevelDeck::from_levels(levels)
}

/// Estimates a Lipschitz constant for `F` by sampling trapezoidal deck
/// pairs with supports in `[0, 1]` at random points of the rectangle.
///
/// This is a lower bound on the true constant; it is reported as an
/// estimate, never treated as a proof.
pub fn estimate_lipschitz(
    rhs: &SingleRhs,
    domain: (f64, f64),
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::EstimationFailed(
            "estimator needs at least one sample",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    let mut usable = 0usize;
    for _ in 0..samples {
        let x = rng.gen::<f64>() * domain.0;
        let y = rng.gen::<f64>() * domain.1;
        let p = random_deck(&mut rng)?;
        let q = random_deck(&mut rng)?;
        let d = p.hausdorff(&q)?;
        if d < 1e-12 {
            continue;
        }
        let fp = rhs.eval(x, y, &p)?;
        let fq = rhs.eval(x, y, &q)?;
        best = best.max(fp.hausdorff(&fq)? / d);
        usable += 1;
    }
    if usable == 0 {
        return Err(Error::EstimationFailed(
            "all sampled deck pairs were degenerate",
        ));
    }
    Ok(best)
}

/// Joint-Lipschitz estimator for one component of a coupled right-hand
/// side, with respect to the sum of the two argument distances.
pub fn estimate_lipschitz_coupled(
    rhs: &CoupledRhs,
    domain: (f64, f64),
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::EstimationFailed(
            "estimator needs at least one sample",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    let mut usable = 0usize;
    for _ in 0..samples {
        let x = rng.gen::<f64>() * domain.0;
        let y = rng.gen::<f64>() * domain.1;
        let p = random_deck(&mut rng)?;
        let q = random_deck(&mut rng)?;
        let p2 = random_deck(&mut rng)?;
        let q2 = random_deck(&mut rng)?;
        let d = p.hausdorff(&p2)? + q.hausdorff(&q2)?;
        if d < 1e-12 {
            continue;
        }
        let f1 = rhs.eval(x, y, &p, &q)?;
        let f2 = rhs.eval(x, y, &p2, &q2)?;
        best = best.max(f1.hausdorff(&f2)? / d);
        usable += 1;
    }
    if usable == 0 {
        return Err(Error::EstimationFailed(
            "all sampled deck pairs were degenerate",
        ));
    }
    Ok(best)
}

fn check_options(options: &SolverOptions) -> Result<()> {
    if !(options.tol > 0.0) || !options.tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive and finite, got {}",
            options.tol
        )));
    }
    if options.max_iter == 0 {
        return Err(Error::InvalidParameter(
            "max_iter must be at least 1".into(),
        ));
    }
    if options.levels == 0 {
        return Err(Error::TooFewLevels(options.levels));
    }
    Ok(())
}

fn attach_node(x: f64, y: f64, e: Error) -> Error {
    match e {
        already @ Error::RhsDomain { .. } => already,
        other => Error::RhsDomain {
            x,
            y,
            reason: other.to_string(),
        },
    }
}

fn eval_field_single(
    rhs: &SingleRhs,
    cur: &FuzzyGridFn,
    levels: usize,
) -> Result<FuzzyGridFn> {
    let grid = cur.grid();
    let (n, m) = (grid.n(), grid.m());
    let mut vals = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let (x, y) = (grid.x(i), grid.y(j));
            let d = rhs
                .eval(x, y, cur.value(i, j))
                .map_err(|e| attach_node(x, y, e))?;
            if d.resolution() != levels {
                return Err(Error::ResolutionMismatch(levels, d.resolution()));
            }
            vals.push(d);
        }
    }
    Ok(FuzzyGridFn::from_values(grid.clone(), levels, vals))
}

fn eval_field_coupled(
    rhs: &CoupledRhs,
    u: &FuzzyGridFn,
    w: &FuzzyGridFn,
    levels: usize,
) -> Result<FuzzyGridFn> {
    let grid = u.grid();
    let (n, m) = (grid.n(), grid.m());
    let mut vals = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let (x, y) = (grid.x(i), grid.y(j));
            let d = rhs
                .eval(x, y, u.value(i, j), w.value(i, j))
                .map_err(|e| attach_node(x, y, e))?;
            if d.resolution() != levels {
                return Err(Error::ResolutionMismatch(levels, d.resolution()));
            }
            vals.push(d);
        }
    }
    Ok(FuzzyGridFn::from_values(grid.clone(), levels, vals))
}

/// Combines the boundary surface with the integral of the field according
/// to the branch.
fn combine(h: &FuzzyGridFn, integ: &FuzzyGridFn, branch: Branch) -> Result<FuzzyGridFn> {
    match branch {
        Branch::FirstKind => h.add(integ),
        Branch::SecondKind => {
            let grid = h.grid();
            let (n, m) = (grid.n(), grid.m());
            let levels = h.levels();
            let mut vals = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    let neg = integ.value(i, j).scale(-1.0)?;
                    let diff = h
                        .value(i, j)
                        .hukuhara_sub(&neg)
                        .map_err(|_| Error::BranchInfeasible { i, j })?;
                    vals.push(diff);
                }
            }
            Ok(FuzzyGridFn::from_values(grid.clone(), levels, vals))
        }
    }
}

fn lipschitz_for_single(
    rhs: &SingleRhs,
    domain: (f64, f64),
    options: &SolverOptions,
) -> Result<LipschitzInfo> {
    match rhs.lipschitz_hint() {
        Some(v) => Ok(LipschitzInfo {
            value: v,
            source: LipschitzSource::Hint,
        }),
        None => Ok(LipschitzInfo {
            value: estimate_lipschitz(rhs, domain, options.lipschitz_samples, options.seed)?,
            source: LipschitzSource::Estimated,
        }),
    }
}

fn lipschitz_for_coupled(
    rhs: &CoupledRhs,
    domain: (f64, f64),
    options: &SolverOptions,
    seed_shift: u64,
) -> Result<LipschitzInfo> {
    match rhs.lipschitz_hint() {
        Some(v) => Ok(LipschitzInfo {
            value: v,
            source: LipschitzSource::Hint,
        }),
        None => Ok(LipschitzInfo {
            value: estimate_lipschitz_coupled(
                rhs,
                domain,
                options.lipschitz_samples,
                options.seed.wrapping_add(seed_shift),
            )?,
            source: LipschitzSource::Estimated,
        }),
    }
}

/// Solves a single Darboux problem by Picard iteration.
pub fn picard_solve_single(
    problem: &DarbouxProblem,
    options: &SolverOptions,
) -> Result<SolveReport> {
    check_options(options)?;
    let (a, b) = problem.domain;
    let grid = Grid2::new(a, b, options.n, options.m, problem.order.rho())?;
    let h = build_h(&problem.xi1, &problem.xi2, &grid, options.levels)?;
    let op = FracIntegralOp::new(&grid, problem.order)?;

    let lip = lipschitz_for_single(&problem.rhs, problem.domain, options)?;
    let xi = contraction_constant(lip.value, a, b, problem.order)?;

    let mut cur = h.clone();
    let mut residuals = Vec::new();
    for _ in 0..options.max_iter {
        let field = eval_field_single(&problem.rhs, &cur, options.levels)?;
        let next = combine(&h, &op.apply(&field)?, problem.branch)?;
        let r = h_star_distance(&next, &cur)?;
        residuals.push(r);
        cur = next;
        if r <= options.tol {
            break;
        }
    }

    let field = eval_field_single(&problem.rhs, &cur, options.levels)?;
    let image = combine(&h, &op.apply(&field)?, problem.branch)?;
    let fpr = h_star_distance(&image, &cur)?;
    let iterations = residuals.len();
    let converged =
        residuals.last().is_some_and(|&r| r <= options.tol) && fpr <= options.tol;

    Ok(SolveReport {
        solution: cur,
        residuals,
        fixed_point_residual: fpr,
        xi_constant: Some(xi),
        lipschitz: Some(lip),
        iterations,
        converged,
    })
}

/// Solves a coupled pair of Darboux problems by joint Picard iteration.
///
/// Both components are advanced from the same previous pair (Jacobi-style),
/// and the stopping rule uses the max of the two update distances.
pub fn picard_solve_coupled(
    problem: &CoupledProblem,
    options: &SolverOptions,
) -> Result<CoupledSolveReport> {
    check_options(options)?;
    if problem.order_u.rho() != problem.order_w.rho() {
        return Err(Error::GridMismatch(
            "coupled equations must share the scale pair rho",
        ));
    }
    let (a, b) = problem.domain;
    let grid = Grid2::new(a, b, options.n, options.m, problem.order_u.rho())?;
    let h_u = build_h(&problem.xi1, &problem.xi2, &grid, options.levels)?;
    let h_w = build_h(&problem.eta1, &problem.eta2, &grid, options.levels)?;
    let op_u = FracIntegralOp::new(&grid, problem.order_u)?;
    let op_w = FracIntegralOp::new(&grid, problem.order_w)?;

    let lip_u = lipschitz_for_coupled(&problem.rhs_f, problem.domain, options, 0)?;
    let lip_w = lipschitz_for_coupled(&problem.rhs_g, problem.domain, options, 1)?;
    let xi = contraction_constants_coupled(
        lip_u.value,
        lip_w.value,
        a,
        b,
        problem.order_u,
        problem.order_w,
    )?;

    let mut cur_u = h_u.clone();
    let mut cur_w = h_w.clone();
    let mut residuals = Vec::new();
    for _ in 0..options.max_iter {
        let field_u = eval_field_coupled(&problem.rhs_f, &cur_u, &cur_w, options.levels)?;
        let field_w = eval_field_coupled(&problem.rhs_g, &cur_u, &cur_w, options.levels)?;
        let next_u = combine(&h_u, &op_u.apply(&field_u)?, problem.branch)?;
        let next_w = combine(&h_w, &op_w.apply(&field_w)?, problem.branch)?;
        let r = h_star_distance(&next_u, &cur_u)?.max(h_star_distance(&next_w, &cur_w)?);
        residuals.push(r);
        cur_u = next_u;
        cur_w = next_w;
        if r <= options.tol {
            break;
        }
    }

    let field_u = eval_field_coupled(&problem.rhs_f, &cur_u, &cur_w, options.levels)?;
    let field_w = eval_field_coupled(&problem.rhs_g, &cur_u, &cur_w, options.levels)?;
    let image_u = combine(&h_u, &op_u.apply(&field_u)?, problem.branch)?;
    let image_w = combine(&h_w, &op_w.apply(&field_w)?, problem.branch)?;
    let fpr = h_star_distance(&image_u, &cur_u)?.max(h_star_distance(&image_w, &cur_w)?);
    let iterations = residuals.len();
    let converged =
        residuals.last().is_some_and(|&r| r <= options.tol) && fpr <= options.tol;

    Ok(CoupledSolveReport {
        solution_u: cur_u,
        solution_w: cur_w,
        residuals,
        fixed_point_residual: fpr,
        xi_constants: Some(xi),
        lipschitz_u: Some(lip_u),
        lipschitz_w: Some(lip_w),
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::monomial_curve;
    use approx::assert_relative_eq;

    #[test]
    fn zero_rhs_fixes_the_boundary_surface() {
        let problem = DarbouxProblem {
            order: FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap(),
            domain: (1.0, 1.0),
            xi1: monomial_curve(0.5, 1.0, 2.0, 1.0),
            xi2: monomial_curve(0.5, 1.0, 2.0, 2.0),
            rhs: SingleRhs::zero(),
            branch: Branch::FirstKind,
        };
        let options = SolverOptions {
            n: 9,
            m: 9,
            levels: 4,
            ..SolverOptions::default()
        };
        let report = picard_solve_single(&problem, &options).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterations, 1);
        assert_eq!(report.residuals[0], 0.0);
        assert_eq!(report.fixed_point_residual, 0.0);
        assert_eq!(report.xi_constant, Some(0.0));
        // υ = h exactly.
        let grid = report.solution.grid();
        let xi1 = monomial_curve(0.5, 1.0, 2.0, 1.0);
        let expect = xi1(grid.x(4), 4).unwrap();
        assert_eq!(report.solution.value(4, 0).hausdorff(&expect).unwrap(), 0.0);
    }

    #[test]
    fn constant_rhs_converges_in_two_steps() {
        // υ = h + I(c): the first update lands on the fixed point, the
        // second confirms it.
        let c = LevelDeck::triangular(1.0, 2.0, 3.0, 4).unwrap();
        let problem = DarbouxProblem {
            order: FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap(),
            domain: (1.0, 1.0),
            xi1: monomial_curve(0.0, 0.0, 0.0, 0.0),
            xi2: monomial_curve(0.0, 0.0, 0.0, 0.0),
            rhs: SingleRhs::constant(c),
            branch: Branch::FirstKind,
        };
        let options = SolverOptions {
            n: 9,
            m: 9,
            levels: 4,
            ..SolverOptions::default()
        };
        let report = picard_solve_single(&problem, &options).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterations, 2);
        assert!(report.residuals[0] > 0.1);
        assert_eq!(report.residuals[1], 0.0);
        // Interior value matches the closed form c·(4/π)·√(xy) per endpoint.
        let grid = report.solution.grid();
        let (i, j) = (8, 8);
        let factor = crate::oracle::closed_form_const_integral(
            1.0,
            grid.x(i),
            grid.y(j),
            FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap(),
        )
        .unwrap();
        let got = report.solution.value(i, j);
        assert_relative_eq!(got.level(0).lo(), factor, max_relative = 1e-10);
        assert_relative_eq!(got.level(0).hi(), 3.0 * factor, max_relative = 1e-10);
        assert_relative_eq!(got.level(4).lo(), 2.0 * factor, max_relative = 1e-10);
    }

    #[test]
    fn second_kind_branch_fails_fast_on_widening_integral() {
        // With crisp-zero boundary data, h ⊖ (-1)·I(c) needs h to be at
        // least as wide as the integral — impossible for a genuinely fuzzy c.
        let c = LevelDeck::triangular(1.0, 2.0, 3.0, 4).unwrap();
        let problem = DarbouxProblem {
            order: FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap(),
            domain: (1.0, 1.0),
            xi1: monomial_curve(0.0, 0.0, 0.0, 0.0),
            xi2: monomial_curve(0.0, 0.0, 0.0, 0.0),
            rhs: SingleRhs::constant(c),
            branch: Branch::SecondKind,
        };
        let options = SolverOptions {
            n: 9,
            m: 9,
            levels: 4,
            ..SolverOptions::default()
        };
        let err = picard_solve_single(&problem, &options).unwrap_err();
        assert!(matches!(err, Error::BranchInfeasible { .. }));
    }

    #[test]
    fn second_kind_branch_handles_crisp_problems() {
        // Crisp decks have zero diameter everywhere, so the Hukuhara
        // difference h ⊖ (-1)·I always exists and both branches agree.
        let make_problem = |branch| DarbouxProblem {
            order: FracOrder::new((0.5, 0.75), (1.0, 1.0)).unwrap(),
            domain: (1.0, 1.0),
            xi1: monomial_curve(1.0, 1.0, 1.0, 0.0),
            xi2: monomial_curve(1.0, 1.0, 1.0, 0.0),
            rhs: SingleRhs::new(|_, _, u: &LevelDeck| u.scale(0.5)).with_hint(0.5),
            branch,
        };
        let options = SolverOptions {
            n: 9,
            m: 9,
            levels: 4,
            ..SolverOptions::default()
        };
        let first = picard_solve_single(&make_problem(Branch::FirstKind), &options).unwrap();
        let second = picard_solve_single(&make_problem(Branch::SecondKind), &options).unwrap();
        assert!(first.converged && second.converged);
        let gap = h_star_distance(&first.solution, &second.solution).unwrap();
        assert!(gap <= 1e-10, "branches disagree by {gap}");
    }

    #[test]
    fn contraction_constant_matches_hand_value() {
        // R=1, φ=(0.5,0.5), ρ=(1,1), a=b=1: Ξ = 1/Γ(1.5)² = 4/π.
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
        let xi = contraction_constant(1.0, 1.0, 1.0, order).unwrap();
        assert_relative_eq!(xi, 4.0 / std::f64::consts::PI, max_relative = 1e-14);
    }

    #[test]
    fn domain_shrink_leaves_room_when_m_is_zero() {
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
        assert_eq!(domain_shrink(2.0, 0.0, order, 3.0, 4.0).unwrap(), (3.0, 4.0));
    }

    #[test]
    fn domain_shrink_matches_frozen_value() {
        // k=2, M=1, φ=(0.5,0.5), ρ=(1,1): the transformed-measure budget is
        // (Γ(1.5)·Γ(1.5))⁴ ≈ 0.380504 and each axis takes its square root.
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
        let (x1, y1) = domain_shrink(2.0, 1.0, order, 10.0, 10.0).unwrap();
        assert_relative_eq!(x1, 0.61685027506808491368, max_relative = 1e-13);
        assert_relative_eq!(y1, x1);
        // Clipping to the rectangle.
        let (cx, cy) = domain_shrink(2.0, 1.0, order, 0.25, 10.0).unwrap();
        assert_eq!(cx, 0.25);
        assert_relative_eq!(cy, y1);
    }

    #[test]
    fn domain_shrink_limits_behave() {
        // φ=(1,1), ρ=(1,1), k=2M: the budget is exactly 1, covering the
        // unit square.
        let unit = FracOrder::new((1.0, 1.0), (1.0, 1.0)).unwrap();
        assert_eq!(domain_shrink(2.0, 1.0, unit, 1.0, 1.0).unwrap(), (1.0, 1.0));
        // Growing M shrinks the rectangle monotonically.
        let order = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
        let (s1, _) = domain_shrink(2.0, 10.0, order, 10.0, 10.0).unwrap();
        let (s2, _) = domain_shrink(2.0, 1000.0, order, 10.0, 10.0).unwrap();
        assert!(s2 < s1 && s1 < 0.61685027506808491368);
    }

    #[test]
    fn lipschitz_estimate_recovers_linear_rate() {
        let rhs = SingleRhs::new(|_, _, u: &LevelDeck| u.scale(0.75));
        let est = estimate_lipschitz(&rhs, (1.0, 1.0), 64, 7).unwrap();
        assert_relative_eq!(est, 0.75, max_relative = 1e-12);
    }

    #[test]
    fn lipschitz_estimate_is_deterministic_per_seed() {
        let rhs = || SingleRhs::new(|_, _, u: &LevelDeck| crate::rhs::saturating_deck(u));
        let a = estimate_lipschitz(&rhs(), (1.0, 1.0), 64, 7).unwrap();
        let b = estimate_lipschitz(&rhs(), (1.0, 1.0), 64, 7).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        // Saturating map on [0,1] has slope ≤ 1 and ≥ 1/4.
        assert!(a <= 1.0 && a >= 0.25, "estimate {a} outside expected band");
    }

    #[test]
    fn coupled_solver_reduces_to_two_independent_solves() {
        // F depends only on υ and G only on ω, so the coupled solve must
        // match the two single solves node for node.
        let order_u = FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap();
        let order_w = FracOrder::new((0.75, 0.75), (1.0, 1.0)).unwrap();
        let coupled = CoupledProblem {
            order_u,
            order_w,
            domain: (1.0, 1.0),
            xi1: monomial_curve(0.5, 1.0, 1.5, 1.0),
            xi2: monomial_curve(0.5, 1.0, 1.5, 1.0),
            eta1: monomial_curve(1.0, 2.0, 3.0, 2.0),
            eta2: monomial_curve(1.0, 2.0, 3.0, 2.0),
            rhs_f: CoupledRhs::new(|_, _, u: &LevelDeck, _: &LevelDeck| u.scale(0.5))
                .with_hint(0.5),
            rhs_g: CoupledRhs::new(|_, _, _: &LevelDeck, w: &LevelDeck| w.scale(0.25))
                .with_hint(0.25),
            branch: Branch::FirstKind,
        };
        let options = SolverOptions {
            n: 9,
            m: 9,
            levels: 4,
            ..SolverOptions::default()
        };
        let joint = picard_solve_coupled(&coupled, &options).unwrap();
        assert!(joint.converged);

        let single_u = DarbouxProblem {
            order: order_u,
            domain: (1.0, 1.0),
            xi1: monomial_curve(0.5, 1.0, 1.5, 1.0),
            xi2: monomial_curve(0.5, 1.0, 1.5, 1.0),
            rhs: SingleRhs::new(|_, _, u: &LevelDeck| u.scale(0.5)).with_hint(0.5),
            branch: Branch::FirstKind,
        };
        let single_w = DarbouxProblem {
            order: order_w,
            domain: (1.0, 1.0),
            xi1: monomial_curve(1.0, 2.0, 3.0, 2.0),
            xi2: monomial_curve(1.0, 2.0, 3.0, 2.0),
            rhs: SingleRhs::new(|_, _, w: &LevelDeck| w.scale(0.25)).with_hint(0.25),
            branch: Branch::FirstKind,
        };
        let ru = picard_solve_single(&single_u, &options).unwrap();
        let rw = picard_solve_single(&single_w, &options).unwrap();
        // The joint stopping rule follows the slower component, so the
        // faster one may pick up a few extra refinement steps of size
        // at most tol each — agreement holds to a small multiple of tol.
        let du = h_star_distance(&joint.solution_u, &ru.solution).unwrap();
        let dw = h_star_distance(&joint.solution_w, &rw.solution).unwrap();
        assert!(du <= 1e-7, "first component drifts by {du}");
        assert!(dw <= 1e-7, "second component drifts by {dw}");
    }

    #[test]
    fn residual_history_is_monotone_for_contractive_problems() {
        let problem = DarbouxProblem {
            order: FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap(),
            domain: (1.0, 1.0),
            xi1: monomial_curve(0.5, 1.0, 2.0, 1.0),
            xi2: monomial_curve(0.5, 1.0, 2.0, 1.0),
            rhs: SingleRhs::new(|_, _, u: &LevelDeck| u.scale(0.5)).with_hint(0.5),
            branch: Branch::FirstKind,
        };
        let options = SolverOptions {
            n: 9,
            m: 9,
            levels: 4,
            ..SolverOptions::default()
        };
        let report = picard_solve_single(&problem, &options).unwrap();
        assert!(report.converged);
        for w in report.residuals.windows(2) {
            assert!(
                w[1] <= w[0] * 1.0000000001,
                "residuals increased: {} -> {}",
                w[0],
                w[1]
            );
        }
        // The certificate bounds the per-step decay from above.
        let xi = report.xi_constant.unwrap();
        assert!(xi < 1.0);
        for w in report.residuals.windows(2) {
            if w[0] > 1e-13 {
                assert!(w[1] / w[0] <= xi + 0.05, "ratio {} vs Ξ {}", w[1] / w[0], xi);
            }
        }
    }

    #[test]
    fn iteration_cap_reports_rather_than_errors() {
        let problem = DarbouxProblem {
            order: FracOrder::new((0.5, 0.5), (1.0, 1.0)).unwrap(),
            domain: (1.0, 1.0),
            xi1: monomial_curve(0.5, 1.0, 2.0, 1.0),
            xi2: monomial_curve(0.5, 1.0, 2.0, 1.0),
            rhs: SingleRhs::new(|_, _, u: &LevelDeck| u.scale(0.5)).with_hint(0.5),
            branch: Branch::FirstKind,
        };
        let options = SolverOptions {
            n: 9,
            m: 9,
            levels: 4,
            max_iter: 2,
            ..SolverOptions::default()
        };
        let report = picard_solve_single(&problem, &options).unwrap();
        assert!(!report.converged);
        assert_eq!(report.iterations, 2);
        assert!(report.fixed_point_residual > 0.0);
    }
}
