//! Darboux-type problem definitions and assembly of the initial surface.
//!
//! A problem on `[0, a] × [0, b]` prescribes the solution along both axes:
//! `υ(x, 0) = ξ₁(x)` and `υ(0, y) = ξ₂(y)`, compatible at the corner. The
//! induced boundary surface is
//!
//! ```text
//! h(x, y) = ξ₁(x) + (ξ₂(y) ⊖ ξ₁(0))
//! ```
//!
//! where `⊖` is the Hukuhara difference — which must exist for every `y`,
//! i.e. `ξ₂(y)` may only widen relative to the corner value. On the axes
//! `h` reproduces the data exactly (no arithmetic round-off): the rows
//! `h(x, 0)` and columns `h(0, y)` are copied from the curves directly.

use crate::deck::LevelDeck;
use crate::error::{Error, Result};
use crate::grid::{FuzzyGridFn, Grid2};
use crate::operators::FracOrder;
use crate::rhs::{CoupledRhs, SingleRhs};

/// Tolerance for the corner-compatibility check `ξ₁(0) = ξ₂(0)`.
pub const CORNER_TOL: f64 = 1e-12;

/// Which integral-equation form the Picard iteration targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `υ = h + I F`; always well-defined (solutions widen with the data).
    FirstKind,
    /// `υ = h ⊖ (-1) I F`; needs the Hukuhara difference to exist at every
    /// node of every iterate, and the solver fails fast when it does not.
    SecondKind,
}

/// A fuzzy curve: maps a coordinate and a deck resolution to a deck.
pub type CurveFn = Box<dyn Fn(f64, usize) -> Result<LevelDeck> + Send + Sync>;

/// Curve `t ↦ (a, b, c)·t^p` with a triangular coefficient.
pub fn monomial_curve(a: f64, b: f64, c: f64, power: f64) -> CurveFn {
    Box::new(move |t, k| {
        if !power.is_finite() || power < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "curve exponent must be finite and nonnegative, got {power}"
            )));
        }
        LevelDeck::triangular(a, b, c, k)?.scale(t.powf(power))
    })
}

/// Single Darboux problem `D^{φ,ρ} υ = F(x, y, υ)` with axis data.
pub struct DarbouxProblem {
    /// Fractional order of the mixed derivative.
    pub order: FracOrder,
    /// Rectangle extent `(a, b)`; the domain is `[0, a] × [0, b]`.
    pub domain: (f64, f64),
    /// Data along `y = 0`.
    pub xi1: CurveFn,
    /// Data along `x = 0`.
    pub xi2: CurveFn,
    /// Right-hand side.
    pub rhs: SingleRhs,
    /// Integral-equation form the solution is sought in.
    pub branch: Branch,
}

/// Coupled pair of Darboux problems sharing one grid.
///
/// The two equations `D^{φ,ρ} υ = F(x, y, υ, ω)` and
/// `D^{ψ,ρ} ω = G(x, y, υ, ω)` may carry different fractional orders but
/// must share the scale pair `ρ`, since both are discretised on the same
/// transformed mesh.
pub struct CoupledProblem {
    /// Order of the first equation.
    pub order_u: FracOrder,
    /// Order of the second equation (same `ρ` as `order_u`).
    pub order_w: FracOrder,
    /// Rectangle extent `(a, b)`.
    pub domain: (f64, f64),
    /// First-component data along `y = 0`.
    pub xi1: CurveFn,
    /// First-component data along `x = 0`.
    pub xi2: CurveFn,
    /// Second-component data along `y = 0`.
    pub eta1: CurveFn,
    /// Second-component data along `x = 0`.
    pub eta2: CurveFn,
    /// Right-hand side of the first equation.
    pub rhs_f: CoupledRhs,
    /// Right-hand side of the second equation.
    pub rhs_g: CoupledRhs,
    /// Integral-equation form, shared by both components.
    pub branch: Branch,
}

/// Numerical knobs shared by the solvers.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Grid nodes along `x`.
    pub n: usize,
    /// Grid nodes along `y`.
    pub m: usize,
    /// Number of r-cut subdivisions per deck.
    pub levels: usize,
    /// Stopping tolerance on the sup-Hausdorff update distance.
    pub tol: f64,
    /// Iteration cap; hitting it is reported, not an error.
    pub max_iter: usize,
    /// Seed for the Lipschitz sampling estimator.
    pub seed: u64,
    /// Sample pairs drawn when no Lipschitz hint is available.
    pub lipschitz_samples: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            n: 33,
            m: 33,
            levels: crate::deck::DEFAULT_LEVELS,
            tol: 1e-8,
            max_iter: 200,
            seed: 0,
            lipschitz_samples: 64,
        }
    }
}

/// Assembles the boundary surface `h` on a grid.
///
/// Fails with [`Error::CornerMismatch`] when the two curves disagree at the
/// origin beyond [`CORNER_TOL`], and with [`Error::IncompatibleInitialData`]
/// when some `ξ₂(y) ⊖ ξ₁(0)` does not exist. Axis rows and columns are the
/// curve samples themselves; at the corner the `ξ₁` sample wins.
pub fn build_h(xi1: &CurveFn, xi2: &CurveFn, grid: &Grid2, levels: usize) -> Result<FuzzyGridFn> {
    let xi1_0 = xi1(0.0, levels)?;
    let xi2_0 = xi2(0.0, levels)?;
    let gap = xi1_0.hausdorff(&xi2_0)?;
    if gap > CORNER_TOL {
        return Err(Error::CornerMismatch(gap));
    }

    // Column offsets ξ₂(y_j) ⊖ ξ₁(0), computed once per column.
    let mut offsets = Vec::with_capacity(grid.m());
    for j in 0..grid.m() {
        let xi2_y = xi2(grid.y(j), levels)?;
        let w = xi2_y
            .hukuhara_sub(&xi1_0)
            .map_err(|_| Error::IncompatibleInitialData { y: grid.y(j) })?;
        offsets.push((xi2_y, w));
    }

    let (n, m) = (grid.n(), grid.m());
    let mut values = Vec::with_capacity(n * m);
    for i in 0..n {
        let xi1_x = xi1(grid.x(i), levels)?;
        if xi1_x.resolution() != levels {
            return Err(Error::ResolutionMismatch(levels, xi1_x.resolution()));
        }
        for j in 0..m {
            let value = if j == 0 {
                xi1_x.clone()
            } else if i == 0 {
                offsets[j].0.clone()
            } else {
                xi1_x.add(&offsets[j].1)?
            };
            values.push(value);
        }
    }
    Ok(FuzzyGridFn::from_values(grid.clone(), levels, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Grid2 {
        Grid2::new(1.0, 1.0, 5, 5, (1.0, 1.0)).unwrap()
    }

    #[test]
    fn boundary_rows_are_exact_curve_samples() {
        let xi1 = monomial_curve(0.5, 1.0, 1.5, 1.0);
        let xi2 = monomial_curve(1.0, 2.0, 3.0, 2.0);
        // Both curves vanish at the origin, so the corner is compatible
        // even though the coefficients differ.
        let g = grid();
        let h = build_h(&xi1, &xi2, &g, 8).unwrap();
        for i in 0..g.n() {
            let expect = xi1(g.x(i), 8).unwrap();
            assert_eq!(h.value(i, 0).hausdorff(&expect).unwrap(), 0.0);
        }
        for j in 0..g.m() {
            let expect = xi2(g.y(j), 8).unwrap();
            assert_eq!(h.value(0, j).hausdorff(&expect).unwrap(), 0.0);
        }
    }

    #[test]
    fn interior_is_sum_of_row_and_column_offset() {
        let xi1 = monomial_curve(1.0, 2.0, 3.0, 0.0); // constant triangular row
        let xi2: CurveFn = Box::new(|y, k| {
            // Widens with y, so the Hukuhara offset exists.
            let base = LevelDeck::triangular(1.0, 2.0, 3.0, k)?;
            base.add(&LevelDeck::triangular(-y, 0.0, y, k)?)
        });
        let g = grid();
        let h = build_h(&xi1, &xi2, &g, 8).unwrap();
        let y = g.y(2);
        let expect = LevelDeck::triangular(1.0 - y, 2.0, 3.0 + y, 8).unwrap();
        assert_relative_eq!(h.value(3, 2).hausdorff(&expect).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn corner_mismatch_is_rejected() {
        let xi1 = monomial_curve(1.0, 2.0, 3.0, 0.0);
        let xi2 = monomial_curve(1.0, 2.0, 4.0, 0.0);
        let err = build_h(&xi1, &xi2, &grid(), 8).unwrap_err();
        assert!(matches!(err, Error::CornerMismatch(_)));
    }

    #[test]
    fn narrowing_column_data_is_rejected() {
        let xi1 = monomial_curve(1.0, 2.0, 3.0, 0.0);
        let xi2: CurveFn = Box::new(|y, k| {
            // Shrinks with y: the Hukuhara difference against ξ₁(0) fails.
            let lo = 1.0 + 0.4 * y;
            let hi = 3.0 - 0.4 * y;
            LevelDeck::triangular(lo, 2.0, hi, k)
        });
        let err = build_h(&xi1, &xi2, &grid(), 8).unwrap_err();
        match err {
            Error::IncompatibleInitialData { y } => assert!(y > 0.0),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
