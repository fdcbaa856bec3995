//! Product-trapezoid weights for the Abel kernel on a uniform mesh.
//!
//! For a density `g` sampled at `s_j = j·Δ` the weighted integrals
//!
//! ```text
//! I_i = (1/Γ(α)) ∫_0^{s_i} (s_i - s)^{α-1} g(s) ds,   0 < α ≤ 1,
//! ```
//!
//! are approximated by replacing `g` with its piecewise-linear interpolant
//! and integrating each panel against the kernel exactly. Writing
//! `c = Δ^α / Γ(α+2)`, the resulting weights are
//!
//! ```text
//! W[i][0] = c · ((i-1)^{α+1} - i^α (i - α - 1))
//! W[i][j] = c · ((i-j+1)^{α+1} - 2 (i-j)^{α+1} + (i-j-1)^{α+1}),  0 < j < i
//! W[i][i] = c
//! ```
//!
//! Every weight is the integral of the kernel against a non-negative hat
//! function, hence non-negative, and the rule reproduces constants exactly:
//! `Σ_j W[i][j] = s_i^α / Γ(α+1)`. Interior weights depend only on the lag
//! `i - j`, so one shared second-difference table serves every row. At
//! `α = 1` the formula collapses to the composite trapezoid rule, which is
//! filled in directly to keep those weights exact.

use crate::error::{Error, Result};
use crate::gamma::gamma_fn;

/// Smallest admissible fractional order; the kernel becomes too singular to
/// quadrature meaningfully below it.
pub const MIN_ORDER: f64 = 1e-3;

/// Lower-triangular Abel quadrature weights for one axis.
#[derive(Debug, Clone)]
pub struct WeightTable {
    order: f64,
    delta: f64,
    rows: Vec<Vec<f64>>,
}

impl WeightTable {
    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of mesh nodes the table covers.
    pub fn nodes(&self) -> usize {
        self.rows.len()
    }

    /// Weights for target node `i`; `row(0)` is empty since the integral
    /// from 0 to 0 vanishes.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Multiplies every weight by `factor` (used to fold in the constant
    /// prefactor of the transformed kernel).
    pub(crate) fn scaled(mut self, factor: f64) -> Self {
        for row in &mut self.rows {
            for w in row.iter_mut() {
                *w *= factor;
            }
        }
        self
    }
}

fn check_order(order: f64) -> Result<()> {
    if !order.is_finite() || !(MIN_ORDER..=1.0).contains(&order) {
        return Err(Error::OrderRange(order, MIN_ORDER));
    }
    Ok(())
}

/// Builds the weight table for `nodes` mesh points with spacing `delta`.
pub fn quad_weights_1d(nodes: usize, delta: f64, order: f64) -> Result<WeightTable> {
    check_order(order)?;
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mesh spacing must be positive, got {delta}"
        )));
    }
    if nodes < 2 {
        return Err(Error::InvalidParameter(format!(
            "a weight table needs at least 2 nodes, got {nodes}"
        )));
    }

    let mut rows = Vec::with_capacity(nodes);
    rows.push(Vec::new());

    if order == 1.0 {
        // Plain composite trapezoid, written out to stay exact.
        let half = 0.5 * delta;
        for i in 1..nodes {
            let mut row = vec![delta; i + 1];
            row[0] = half;
            row[i] = half;
            rows.push(row);
        }
        return Ok(WeightTable { order, delta, rows });
    }

    let scale = delta.powf(order) / gamma_fn(order + 2.0)?;
    // pw[m] = m^{α+1}; lag[m] = second difference of pw at m (the hat-function
    // moments for interior nodes).
    let pw: Vec<f64> = (0..=nodes).map(|m| (m as f64).powf(order + 1.0)).collect();
    let ex: Vec<f64> = (0..=nodes).map(|m| (m as f64).powf(order)).collect();
    let lag: Vec<f64> = (0..nodes)
        .map(|m| {
            if m == 0 {
                1.0
            } else {
                (pw[m + 1] - 2.0 * pw[m] + pw[m - 1]).max(0.0)
            }
        })
        .collect();

    for i in 1..nodes {
        let mut row = Vec::with_capacity(i + 1);
        let first = (pw[i - 1] - ex[i] * (i as f64 - order - 1.0)).max(0.0);
        row.push(scale * first);
        for j in 1..i {
            row.push(scale * lag[i - j]);
        }
        row.push(scale);
        rows.push(row);
    }
    Ok(WeightTable { order, delta, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_out_of_range_orders() {
        assert!(quad_weights_1d(5, 0.1, 0.5e-3).is_err());
        assert!(quad_weights_1d(5, 0.1, 1.5).is_err());
        assert!(quad_weights_1d(5, 0.1, f64::NAN).is_err());
        assert!(quad_weights_1d(5, 0.0, 0.5).is_err());
    }

    #[test]
    fn weights_are_nonnegative() {
        for &order in &[MIN_ORDER, 0.25, 0.5, 0.75, 0.999, 1.0] {
            let t = quad_weights_1d(65, 0.03, order).unwrap();
            for i in 0..t.nodes() {
                assert!(t.row(i).iter().all(|&w| w >= 0.0), "order {order}, row {i}");
            }
        }
    }

    #[test]
    fn constants_integrate_exactly() {
        // Σ_j W[i][j] must equal s_i^α / Γ(α+1) up to rounding.
        for &order in &[0.25, 0.5, 0.9, 1.0] {
            let delta = 1.0 / 64.0;
            let t = quad_weights_1d(65, delta, order).unwrap();
            for i in 1..t.nodes() {
                let s: f64 = t.row(i).iter().sum();
                let want = (i as f64 * delta).powf(order) / gamma_fn(order + 1.0).unwrap();
                assert_relative_eq!(s, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn linear_density_reference_value() {
        // (1/Γ(α)) ∫_0^1 (1-s)^{α-1} s ds = 1/Γ(α+2); at α = 1/2 that is
        // 0.75225277806367504926, confirmed independently by a
        // singularity-removing brute-force quadrature.
        let nodes = 33;
        let delta = 1.0 / (nodes - 1) as f64;
        let t = quad_weights_1d(nodes, delta, 0.5).unwrap();
        let last = nodes - 1;
        let val: f64 = t
            .row(last)
            .iter()
            .enumerate()
            .map(|(j, w)| w * (j as f64 * delta))
            .sum();
        assert_relative_eq!(val, 0.752_252_778_063_675_049_26, max_relative = 1e-12);
    }

    #[test]
    fn unit_order_is_plain_trapezoid() {
        let t = quad_weights_1d(5, 0.25, 1.0).unwrap();
        assert_eq!(t.row(3), &[0.125, 0.25, 0.25, 0.125]);
        assert_eq!(t.row(1), &[0.125, 0.125]);
    }

    #[test]
    fn first_row_is_empty() {
        let t = quad_weights_1d(5, 0.25, 0.5).unwrap();
        assert!(t.row(0).is_empty());
    }
}
