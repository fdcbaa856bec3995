use thiserror::Error;

/// Everything that can go wrong across deck arithmetic, the fractional
/// operators, and the Picard solvers.
///
/// Numerical non-convergence is deliberately *not* an error: the solvers
/// report it through their `converged` flag instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("interval endpoints out of order: lo = {lo}, hi = {hi}")]
    IntervalOrder { lo: f64, hi: f64 },

    #[error("a level deck needs at least two levels, got {0}")]
    TooFewLevels(usize),

    #[error("level decks have different resolutions: {0} vs {1}")]
    ResolutionMismatch(usize, usize),

    #[error("nestedness violated by {magnitude:.3e} at level {level} (budget {budget:.1e})")]
    Nestedness {
        level: usize,
        magnitude: f64,
        budget: f64,
    },

    #[error("Hukuhara difference does not exist at level {level}")]
    HukuharaUndefined { level: usize },

    #[error("gH difference is not a fuzzy number for these operands")]
    GhUndefined,

    #[error("gamma is defined here for positive arguments only, got {0}")]
    GammaDomain(f64),

    #[error("fractional order {0} lies outside [{1:.0e}, 1]")]
    OrderRange(f64, f64),

    #[error("scale exponent must be positive and finite, got {0}")]
    ScaleRange(f64),

    #[error("grid needs at least 3 nodes per axis, got {n} x {m}")]
    GridTooSmall { n: usize, m: usize },

    #[error("operands live on different grids: {0}")]
    GridMismatch(&'static str),

    #[error("endpoint diameters are not monotone along the axes; no d-monotone class fits")]
    MixedMonotonicity,

    #[error("mixed partial needed nestedness repairs of {0:.3e}, above the {1:.1e} budget")]
    RepairTooLarge(f64, f64),

    #[error("initial curves disagree at the corner by {0:.3e}")]
    CornerMismatch(f64),

    #[error("initial curves are incompatible: no Hukuhara difference at y = {y}")]
    IncompatibleInitialData { y: f64 },

    #[error("right-hand side rejected its argument at (x, y) = ({x}, {y}): {reason}")]
    RhsDomain { x: f64, y: f64, reason: String },

    #[error("solution branch needs a Hukuhara difference that does not exist at node ({i}, {j})")]
    BranchInfeasible { i: usize, j: usize },

    #[error("Lipschitz estimation failed: {0}")]
    EstimationFailed(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
