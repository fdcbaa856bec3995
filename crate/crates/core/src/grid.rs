//! Rectangular solution grids and fuzzy-valued grid functions.
//!
//! Nodes are uniform in the *transformed* coordinates `u = x^{ρ1}`,
//! `v = y^{ρ2}`. Every fractional operator in this crate integrates against
//! the kernel `(x^{ρ1} - s^{ρ1})^{φ1-1}`, which the substitution turns into
//! a plain Abel kernel on a uniform mesh — that single choice is what makes
//! the quadrature weights reusable convolution tables. The original
//! coordinates are kept alongside for sampling data and reporting.

use crate::deck::LevelDeck;
use crate::error::{Error, Result};

/// A rectangular grid on `[0, a] x [0, b]`, uniform in transformed
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    a: f64,
    b: f64,
    rho: (f64, f64),
    x: Vec<f64>,
    y: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl Grid2 {
    pub fn new(a: f64, b: f64, n: usize, m: usize, rho: (f64, f64)) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "domain extents must be positive and finite, got a = {a}, b = {b}"
            )));
        }
        for r in [rho.0, rho.1] {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::ScaleRange(r));
            }
        }
        if n < 3 || m < 3 {
            return Err(Error::GridTooSmall { n, m });
        }

        let build = |len: usize, extent: f64, rho: f64| {
            let top = extent.powf(rho);
            let step = top / (len - 1) as f64;
            let mut t = Vec::with_capacity(len);
            let mut orig = Vec::with_capacity(len);
            for i in 0..len {
                let ti = if i == len - 1 { top } else { i as f64 * step };
                t.push(ti);
                orig.push(if i == 0 {
                    0.0
                } else if i == len - 1 {
                    extent
                } else {
                    ti.powf(1.0 / rho)
                });
            }
            (t, orig)
        };

        let (u, x) = build(n, a, rho.0);
        let (v, y) = build(m, b, rho.1);
        Ok(Self { a, b, rho, x, y, u, v })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn rho(&self) -> (f64, f64) {
        self.rho
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x[i]
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y[j]
    }

    /// Transformed abscissa `x_i^{ρ1}` (uniformly spaced).
    pub fn u(&self, i: usize) -> f64 {
        self.u[i]
    }

    /// Transformed ordinate `y_j^{ρ2}` (uniformly spaced).
    pub fn v(&self, j: usize) -> f64 {
        self.v[j]
    }

    /// Mesh width along the transformed x-axis.
    pub fn du(&self) -> f64 {
        self.u[1] - self.u[0]
    }

    /// Mesh width along the transformed y-axis.
    pub fn dv(&self) -> f64 {
        self.v[1] - self.v[0]
    }

    pub(crate) fn same_mesh(&self, other: &Self) -> bool {
        self == other
    }
}

/// A fuzzy number attached to every node of a [`Grid2`].
///
/// Values are stored row-major (`x` index outer), and all decks share one
/// r-grid resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyGridFn {
    grid: Grid2,
    levels: usize,
    values: Vec<LevelDeck>,
}

impl FuzzyGridFn {
    /// Samples a fallible node function over the grid.
    pub fn try_from_fn(
        grid: &Grid2,
        levels: usize,
        mut f: impl FnMut(f64, f64) -> Result<LevelDeck>,
    ) -> Result<Self> {
        if levels < 1 {
            return Err(Error::TooFewLevels(levels + 1));
        }
        let mut values = Vec::with_capacity(grid.n() * grid.m());
        for i in 0..grid.n() {
            for j in 0..grid.m() {
                let deck = f(grid.x(i), grid.y(j))?;
                if deck.resolution() != levels {
                    return Err(Error::ResolutionMismatch(levels, deck.resolution()));
                }
                values.push(deck);
            }
        }
        Ok(Self {
            grid: grid.clone(),
            levels,
            values,
        })
    }

    /// Samples an infallible node function over the grid.
    pub fn from_fn(
        grid: &Grid2,
        levels: usize,
        mut f: impl FnMut(f64, f64) -> LevelDeck,
    ) -> Result<Self> {
        Self::try_from_fn(grid, levels, |x, y| Ok(f(x, y)))
    }

    /// Samples a real-valued function as crisp decks.
    pub fn from_crisp_fn(
        grid: &Grid2,
        levels: usize,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        Self::try_from_fn(grid, levels, |x, y| LevelDeck::crisp(f(x, y), levels))
    }

    pub(crate) fn from_values(grid: Grid2, levels: usize, values: Vec<LevelDeck>) -> Self {
        debug_assert_eq!(values.len(), grid.n() * grid.m());
        debug_assert!(values.iter().all(|d| d.resolution() == levels));
        Self { grid, levels, values }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    /// Shared r-grid resolution of every node deck.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn value(&self, i: usize, j: usize) -> &LevelDeck {
        &self.values[i * self.grid.m() + j]
    }

    pub(crate) fn values(&self) -> &[LevelDeck] {
        &self.values
    }

    /// Lower and upper endpoint surfaces of the `k`-th cut, row-major.
    pub fn endpoint_surfaces(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        let lower = self.values.iter().map(|d| d.level(k).lo()).collect();
        let upper = self.values.iter().map(|d| d.level(k).hi()).collect();
        (lower, upper)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.grid.same_mesh(&other.grid) {
            return Err(Error::GridMismatch("node meshes differ"));
        }
        if self.levels != other.levels {
            return Err(Error::ResolutionMismatch(self.levels, other.levels));
        }
        Ok(())
    }

    /// Node-wise level-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(p, q)| p.add(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_values(self.grid.clone(), self.levels, values))
    }

    /// Largest node deck distance to the crisp zero.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|d| d.level(0).lo().abs().max(d.level(0).hi().abs()))
            .fold(0.0, f64::max)
    }
}

/// Supremum over grid nodes of the deck Hausdorff distance — the metric the
/// Picard iterations contract under.
pub fn h_star_distance(f: &FuzzyGridFn, g: &FuzzyGridFn) -> Result<f64> {
    f.check_compatible(g)?;
    let mut worst = 0.0f64;
    for (p, q) in f.values().iter().zip(g.values()) {
        worst = worst.max(p.hausdorff(q)?);
    }
    Ok(worst)
}
