use crate::error::{Error, Result};

/// A closed real interval `[lo, hi]`.
///
/// One r-cut of a fuzzy number. Endpoints are always finite and ordered;
/// construction through [`Interval::new`] enforces both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite("interval endpoint"));
        }
        if lo > hi {
            return Err(Error::IntervalOrder { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The degenerate interval `[c, c]`.
    pub fn point(c: f64) -> Result<Self> {
        Self::new(c, c)
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    /// Width `hi - lo`; zero exactly for point intervals.
    pub fn diam(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// True when `other` lies inside `self` (non-strict).
    pub fn contains(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Hausdorff distance between two intervals:
    /// `max(|lo - lo'|, |hi - hi'|)`.
    pub fn hausdorff(self, other: Interval) -> f64 {
        let dl = (self.lo - other.lo).abs();
        let dh = (self.hi - other.hi).abs();
        dl.max(dh)
    }

    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }
}
