//! Right-hand sides of the fuzzy integral equations.
//!
//! A right-hand side maps a point of the rectangle and the current fuzzy
//! value (a pair of values for coupled systems) to a new deck. Evaluation is
//! endpoint-wise per r-cut, which is sound exactly when the underlying real
//! map is monotone non-decreasing on the range of the cuts — the atoms
//! provided here guard their own domains and the solvers attach node
//! coordinates to any rejection.

use crate::deck::LevelDeck;
use crate::error::{Error, Result};

type SingleEval = dyn Fn(f64, f64, &LevelDeck) -> Result<LevelDeck> + Send + Sync;
type CoupledEval = dyn Fn(f64, f64, &LevelDeck, &LevelDeck) -> Result<LevelDeck> + Send + Sync;

/// Right-hand side `F(x, y, υ)` of a single equation.
pub struct SingleRhs {
    eval: Box<SingleEval>,
    lipschitz_hint: Option<f64>,
}

impl SingleRhs {
    pub fn new(
        eval: impl Fn(f64, f64, &LevelDeck) -> Result<LevelDeck> + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Box::new(eval),
            lipschitz_hint: None,
        }
    }

    /// Attaches a known Lipschitz bound, skipping runtime estimation.
    pub fn with_hint(mut self, r: f64) -> Self {
        self.lipschitz_hint = Some(r);
        self
    }

    pub fn eval(&self, x: f64, y: f64, u: &LevelDeck) -> Result<LevelDeck> {
        (self.eval)(x, y, u)
    }

    pub fn lipschitz_hint(&self) -> Option<f64> {
        self.lipschitz_hint
    }

    /// `F ≡ 0`.
    pub fn zero() -> Self {
        Self::new(|_, _, u: &LevelDeck| LevelDeck::crisp(0.0, u.resolution())).with_hint(0.0)
    }

    /// `F ≡ value`, independent of the state.
    pub fn constant(value: LevelDeck) -> Self {
        Self::new(move |_, _, u: &LevelDeck| {
            if u.resolution() != value.resolution() {
                return Err(Error::ResolutionMismatch(
                    value.resolution(),
                    u.resolution(),
                ));
            }
            Ok(value.clone())
        })
        .with_hint(0.0)
    }
}

impl std::fmt::Debug for SingleRhs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingleRhs")
            .field("lipschitz_hint", &self.lipschitz_hint)
            .finish_non_exhaustive()
    }
}

/// Right-hand side `F(x, y, υ, ω)` of one component of a coupled system.
pub struct CoupledRhs {
    eval: Box<CoupledEval>,
    lipschitz_hint: Option<f64>,
}

impl CoupledRhs {
    pub fn new(
        eval: impl Fn(f64, f64, &LevelDeck, &LevelDeck) -> Result<LevelDeck> + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Box::new(eval),
            lipschitz_hint: None,
        }
    }

    /// Attaches a known joint Lipschitz bound (with respect to the sum of
    /// the two argument distances).
    pub fn with_hint(mut self, r: f64) -> Self {
        self.lipschitz_hint = Some(r);
        self
    }

    pub fn eval(&self, x: f64, y: f64, u: &LevelDeck, w: &LevelDeck) -> Result<LevelDeck> {
        (self.eval)(x, y, u, w)
    }

    pub fn lipschitz_hint(&self) -> Option<f64> {
        self.lipschitz_hint
    }
}

impl std::fmt::Debug for CoupledRhs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoupledRhs")
            .field("lipschitz_hint", &self.lipschitz_hint)
            .finish_non_exhaustive()
    }
}

/// `t ↦ t / (1 + t)` applied endpoint-wise.
///
/// Increasing on `t > -1`, so cuts map to cuts and nestedness survives.
/// Decks whose support reaches -1 or below are outside the domain.
pub fn saturating_deck(d: &LevelDeck) -> Result<LevelDeck> {
    let floor = d.support().lo();
    if !(floor > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "saturating map needs cut endpoints above -1, deck reaches {floor}"
        )));
    }
    d.map_endpoints(|t| t / (1.0 + t))
}
