//! Level-set fuzzy arithmetic and mixed Caputo–Katugampola fractional
//! calculus on rectangular grids.
//!
//! The crate models fuzzy numbers as decks of nested r-cuts
//! ([`LevelDeck`]), fuzzy surfaces as grids of decks ([`FuzzyGridFn`]), and
//! provides the two-dimensional fractional integral and derivative of
//! Katugampola type with independent per-axis orders and scales. On top of
//! those operators sit Picard solvers for Darboux-type initial value
//! problems — single equations and coupled pairs — together with the
//! contraction constants that certify existence and uniqueness of the
//! solution being approximated.
//!
//! # Layout
//!
//! - [`interval`], [`deck`] — interval and fuzzy-number arithmetic
//!   (addition, scaling, Hukuhara and generalized-Hukuhara differences,
//!   the Hausdorff metric).
//! - [`gamma`], [`quadrature`], [`grid`] — the Gamma function, product
//!   trapezoid weights for the weakly singular Abel kernel, and the
//!   rectangular mesh that is uniform in the transformed coordinates
//!   `u = x^ρ₁`, `v = y^ρ₂`.
//! - [`operators`] — the fractional integral, d-monotonicity
//!   classification, the gH mixed partial, and the Caputo-type fractional
//!   derivative.
//! - [`problem`], [`solver`], [`rhs`] — problem definitions, boundary
//!   surface assembly, Picard iteration, contraction certificates, and a
//!   randomized Lipschitz estimator.
//! - [`oracle`] — closed forms and a brute-force quadrature used purely
//!   for cross-checking.
//!
//! # Example
//!
//! Solve `D^{(½,½)} υ = ½·υ` on the unit square with triangular boundary
//! data and check the contraction certificate:
//!
//! ```
//! use fuzzy_ck::{
//!     contraction_constant, monomial_curve, picard_solve_single, Branch, DarbouxProblem,
//!     FracOrder, SingleRhs, SolverOptions,
//! };
//!
//! let order = FracOrder::new((0.5, 0.5), (1.0, 1.0))?;
//! let problem = DarbouxProblem {
//!     order,
//!     domain: (1.0, 1.0),
//!     xi1: monomial_curve(0.5, 1.0, 2.0, 1.0), // υ(x,0) = (0.5,1,2)·x
//!     xi2: monomial_curve(0.5, 1.0, 2.0, 1.0), // υ(0,y) = (0.5,1,2)·y
//!     rhs: SingleRhs::new(|_, _, u| u.scale(0.5)).with_hint(0.5),
//!     branch: Branch::FirstKind,
//! };
//! let options = SolverOptions { n: 9, m: 9, levels: 8, ..Default::default() };
//! let report = picard_solve_single(&problem, &options)?;
//! assert!(report.converged);
//!
//! let xi = contraction_constant(0.5, 1.0, 1.0, order)?;
//! assert!(xi < 1.0); // unique solution, geometric convergence
//! # Ok::<(), fuzzy_ck::Error>(())
//! ```

pub mod deck;
pub mod error;
pub mod gamma;
pub mod grid;
pub mod interval;
pub mod operators;
pub mod oracle;
pub mod problem;
pub mod quadrature;
pub mod rhs;
pub mod solver;

pub use deck::{
    add, diam, gh_diff, hausdorff_dist, hukuhara_diff, make_triangular, scalar_mul, GHCase,
    LevelDeck, Monotonicity, DEFAULT_LEVELS, NEST_BUDGET,
};
pub use error::{Error, Result};
pub use gamma::gamma_fn;
pub use grid::{h_star_distance, FuzzyGridFn, Grid2};
pub use interval::Interval;
pub use operators::{
    ck_derivative, classify_d_monotone, katugampola_integral, mixed_partial_gh, FracIntegralOp,
    FracOrder, GhSurfaceKind, REPAIR_BUDGET,
};
pub use oracle::{
    brute_force_integral, closed_form_const_integral, closed_form_power_integral,
    crisp_darboux_reference, oracle_battery, OracleReport,
};
pub use problem::{
    build_h, monomial_curve, Branch, CoupledProblem, CurveFn, DarbouxProblem, SolverOptions,
    CORNER_TOL,
};
pub use quadrature::{quad_weights_1d, WeightTable, MIN_ORDER};
pub use rhs::{saturating_deck, CoupledRhs, SingleRhs};
pub use solver::{
    contraction_constant, contraction_constants_coupled, domain_shrink, estimate_lipschitz,
    estimate_lipschitz_coupled, picard_solve_coupled, picard_solve_single, CoupledSolveReport,
    LipschitzInfo, LipschitzSource, SolveReport,
};
