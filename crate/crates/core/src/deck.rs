//! Fuzzy numbers as stacks of nested r-cuts.
//!
//! A fuzzy number is stored by sampling its r-cuts on the uniform grid
//! `r_k = k / K`, `k = 0..=K`. Each cut is an [`Interval`], and the stack
//! must be *nested*: lower endpoints never decrease and upper endpoints
//! never increase as `r` grows. All arithmetic here is level-wise interval
//! arithmetic, so nestedness is preserved by construction and re-validated
//! whenever a deck is assembled.
//!
//! Tiny nestedness violations (up to [`NEST_BUDGET`]) caused by rounding
//! are absorbed by widening the enclosing cuts; anything larger is an error.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Default r-grid resolution: cuts at `r = k / 40`.
pub const DEFAULT_LEVELS: usize = 40;

/// Accumulated-rounding budget for silent nestedness repair.
pub const NEST_BUDGET: f64 = 1e-12;

/// Which generalized-Hukuhara case produced a difference.
///
/// `CaseI`: `p = q + w`. `CaseII`: `q = p + (-1) * w`. When both hold the
/// difference is reported as `CaseI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GHCase {
    CaseI,
    CaseII,
}

/// Diameter behaviour of a fuzzy-valued surface along both axes.
///
/// Constant diameters (crisp surfaces in particular) satisfy both
/// directions and are classified as `DIncreasing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    DIncreasing,
    DDecreasing,
}

/// A fuzzy number sampled on the uniform r-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelDeck {
    levels: Vec<Interval>,
}

impl LevelDeck {
    /// Builds a deck from raw cuts, fixing violations up to [`NEST_BUDGET`].
    pub fn from_levels(levels: Vec<Interval>) -> Result<Self> {
        Self::from_levels_with_repair(levels, NEST_BUDGET).map(|(deck, _)| deck)
    }

    /// Builds a deck from raw cuts, widening enclosing levels where nestedness
    /// fails by at most `budget`. Returns the deck together with the largest
    /// endpoint adjustment that was applied.
    pub fn from_levels_with_repair(levels: Vec<Interval>, budget: f64) -> Result<(Self, f64)> {
        if levels.len() < 2 {
            return Err(Error::TooFewLevels(levels.len()));
        }
        let n = levels.len();

        // Envelope from the innermost cut outward: level k must contain
        // every level m > k.
        let mut env_lo = vec![0.0; n];
        let mut env_hi = vec![0.0; n];
        env_lo[n - 1] = levels[n - 1].lo();
        env_hi[n - 1] = levels[n - 1].hi();
        for k in (0..n - 1).rev() {
            env_lo[k] = levels[k].lo().min(env_lo[k + 1]);
            env_hi[k] = levels[k].hi().max(env_hi[k + 1]);
        }

        let mut repair: f64 = 0.0;
        let mut worst_level = 0usize;
        for k in 0..n {
            let adj = (levels[k].lo() - env_lo[k]).max(env_hi[k] - levels[k].hi());
            if adj > repair {
                repair = adj;
                worst_level = k;
            }
        }
        if repair > budget {
            return Err(Error::Nestedness {
                level: worst_level,
                magnitude: repair,
                budget,
            });
        }

        let repaired = (0..n)
            .map(|k| Interval::raw(env_lo[k], env_hi[k]))
            .collect();
        Ok((Self { levels: repaired }, repair))
    }

    /// Builds a deck from `(lo, hi)` pairs, collapsing inverted pairs within
    /// `budget` to their midpoint before the nestedness pass.
    pub fn from_endpoints_with_repair(
        pairs: impl IntoIterator<Item = (f64, f64)>,
        budget: f64,
    ) -> Result<(Self, f64)> {
        let mut inversion: f64 = 0.0;
        let mut levels = Vec::new();
        for (lo, hi) in pairs {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::NonFinite("deck endpoint"));
            }
            if lo > hi {
                let gap = lo - hi;
                if gap > budget {
                    return Err(Error::IntervalOrder { lo, hi });
                }
                inversion = inversion.max(0.5 * gap);
                let mid = 0.5 * (lo + hi);
                levels.push(Interval::raw(mid, mid));
            } else {
                levels.push(Interval::raw(lo, hi));
            }
        }
        let (deck, nest) = Self::from_levels_with_repair(levels, budget)?;
        Ok((deck, nest.max(inversion)))
    }

    /// Triangular fuzzy number `(a, b, c)`: cut `[a(1-r) + br, c(1-r) + br]`.
    pub fn triangular(a: f64, b: f64, c: f64, k: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite("triangular vertex"));
        }
        if a > b || b > c {
            return Err(Error::InvalidParameter(format!(
                "triangular vertices must satisfy a <= b <= c, got ({a}, {b}, {c})"
            )));
        }
        if k < 1 {
            return Err(Error::TooFewLevels(k + 1));
        }
        let kf = k as f64;
        let levels = (0..=k)
            .map(|j| {
                let r = j as f64 / kf;
                Interval::raw(a * (1.0 - r) + b * r, c * (1.0 - r) + b * r)
            })
            .collect();
        Self::from_levels(levels)
    }

    /// The crisp number `c` as a deck of point intervals.
    pub fn crisp(c: f64, k: usize) -> Result<Self> {
        Self::triangular(c, c, c, k)
    }

    /// Number of levels minus one: cuts sit at `r = k / resolution()`.
    pub fn resolution(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Interval] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> Interval {
        self.levels[k]
    }

    /// Membership grade of the `k`-th cut.
    pub fn r_value(&self, k: usize) -> f64 {
        k as f64 / self.resolution() as f64
    }

    /// Cut diameters, outermost first.
    pub fn diams(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.diam()).collect()
    }

    pub fn diam_at(&self, k: usize) -> f64 {
        self.levels[k].diam()
    }

    /// The support-level (r = 0) cut.
    pub fn support(&self) -> Interval {
        self.levels[0]
    }

    /// The core (r = 1) cut.
    pub fn core(&self) -> Interval {
        self.levels[self.levels.len() - 1]
    }

    fn check_resolution(&self, other: &Self) -> Result<()> {
        if self.resolution() != other.resolution() {
            return Err(Error::ResolutionMismatch(
                self.resolution(),
                other.resolution(),
            ));
        }
        Ok(())
    }

    /// Level-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_resolution(other)?;
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(p, q)| Interval::raw(p.lo() + q.lo(), p.hi() + q.hi()))
            .collect();
        Self::from_levels(levels)
    }

    /// Level-wise scaling; negative factors swap endpoints, zero collapses
    /// to the crisp zero.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite("scalar factor"));
        }
        if lambda == 0.0 {
            return Self::crisp(0.0, self.resolution());
        }
        let levels = self
            .levels
            .iter()
            .map(|l| {
                if lambda > 0.0 {
                    Interval::raw(lambda * l.lo(), lambda * l.hi())
                } else {
                    Interval::raw(lambda * l.hi(), lambda * l.lo())
                }
            })
            .collect();
        Self::from_levels(levels)
    }

    /// Hukuhara difference: the deck `w` with `other + w = self`, i.e.
    /// `[lo - lo', hi - hi']` per level. Errors when any cut inverts or the
    /// stack fails to nest.
    pub fn hukuhara_sub(&self, other: &Self) -> Result<Self> {
        self.check_resolution(other)?;
        let mut levels = Vec::with_capacity(self.levels.len());
        for (k, (p, q)) in self.levels.iter().zip(&other.levels).enumerate() {
            let lo = p.lo() - q.lo();
            let hi = p.hi() - q.hi();
            if lo > hi + NEST_BUDGET {
                return Err(Error::HukuharaUndefined { level: k });
            }
            let (lo, hi) = if lo > hi {
                let mid = 0.5 * (lo + hi);
                (mid, mid)
            } else {
                (lo, hi)
            };
            levels.push(Interval::raw(lo, hi));
        }
        Self::from_levels(levels)
    }

    /// Generalized Hukuhara difference.
    ///
    /// Case I is `self = other + w`, case II is `other = self + (-1) * w`;
    /// case I wins ties. When the cut-wise candidate flips orientation
    /// across levels, or the winning candidate is not nested, there is no
    /// gH difference and the call fails.
    pub fn gh_sub(&self, other: &Self) -> Result<(Self, GHCase)> {
        self.check_resolution(other)?;
        let mut case1 = true;
        let mut case2 = true;
        let mut dl = Vec::with_capacity(self.levels.len());
        let mut dh = Vec::with_capacity(self.levels.len());
        for (p, q) in self.levels.iter().zip(&other.levels) {
            let l = p.lo() - q.lo();
            let h = p.hi() - q.hi();
            if l > h + NEST_BUDGET {
                case1 = false;
            }
            if h > l + NEST_BUDGET {
                case2 = false;
            }
            dl.push(l);
            dh.push(h);
        }

        let (pairs, case): (Vec<(f64, f64)>, GHCase) = if case1 {
            (dl.into_iter().zip(dh).collect(), GHCase::CaseI)
        } else if case2 {
            (dh.into_iter().zip(dl).collect(), GHCase::CaseII)
        } else {
            return Err(Error::GhUndefined);
        };

        let deck = Self::from_endpoints_with_repair(pairs, NEST_BUDGET)
            .map_err(|_| Error::GhUndefined)?
            .0;
        Ok((deck, case))
    }

    /// Supremum over the r-grid of the cut-wise Hausdorff distance.
    pub fn hausdorff(&self, other: &Self) -> Result<f64> {
        self.check_resolution(other)?;
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(p, q)| p.hausdorff(*q))
            .fold(0.0, f64::max))
    }

    /// Applies a monotone non-decreasing map to both endpoint families.
    pub(crate) fn map_endpoints(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let pairs = self.levels.iter().map(|l| (f(l.lo()), f(l.hi())));
        Self::from_endpoints_with_repair(pairs.collect::<Vec<_>>(), NEST_BUDGET)
            .map(|(deck, _)| deck)
    }
}

/// Triangular fuzzy number `(a, b, c)` on `k + 1` cuts.
pub fn make_triangular(a: f64, b: f64, c: f64, k: usize) -> Result<LevelDeck> {
    LevelDeck::triangular(a, b, c, k)
}

/// Level-wise sum of two decks.
pub fn add(p: &LevelDeck, q: &LevelDeck) -> Result<LevelDeck> {
    p.add(q)
}

/// Scales a deck by `lambda`, swapping endpoints when `lambda < 0`.
pub fn scalar_mul(lambda: f64, p: &LevelDeck) -> Result<LevelDeck> {
    p.scale(lambda)
}

/// Hukuhara difference `p - q` (the `w` with `q + w = p`), when it exists.
pub fn hukuhara_diff(p: &LevelDeck, q: &LevelDeck) -> Result<LevelDeck> {
    p.hukuhara_sub(q)
}

/// Generalized Hukuhara difference and the case that produced it.
pub fn gh_diff(p: &LevelDeck, q: &LevelDeck) -> Result<(LevelDeck, GHCase)> {
    p.gh_sub(q)
}

/// Supremum Hausdorff distance over the shared r-grid.
pub fn hausdorff_dist(p: &LevelDeck, q: &LevelDeck) -> Result<f64> {
    p.hausdorff(q)
}

/// Cut diameters of `p`, outermost first.
pub fn diam(p: &LevelDeck) -> Vec<f64> {
    p.diams()
}
