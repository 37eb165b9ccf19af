//! Composite quadrature over knot subintervals.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::spline::grid::KnotGrid;

/// Per-subinterval rule; both are exact for cubic integrands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Two-point Gauss–Legendre (default).
    Gauss2,
    /// Simpson's rule.
    Simpson,
}

impl QuadRule {
    /// Nodes and weights on `[p, q]`.
    pub fn nodes(self, p: f64, q: f64) -> ([f64; 3], [f64; 3], usize) {
        let h2 = 0.5 * (q - p);
        let mid = 0.5 * (p + q);
        match self {
            QuadRule::Gauss2 => {
                let d = h2 / 3.0f64.sqrt();
                ([mid - d, mid + d, 0.0], [h2, h2, 0.0], 2)
            }
            QuadRule::Simpson => (
                [p, mid, q],
                [(q - p) / 6.0, 4.0 * (q - p) / 6.0, (q - p) / 6.0],
                3,
            ),
        }
    }
}

/// Breakpoints of `[a, b]` at the (virtual) knots of `grid`, endpoints
/// included.
pub(crate) fn knot_breakpoints(grid: &KnotGrid, a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a];
    if grid.is_periodic() {
        let p = grid.period();
        let n = grid.n_intervals() as isize;
        let offset = ((a - grid.start()) / p).floor() as isize;
        let l = grid.interval_index(grid.wrap(a)) as isize;
        let mut i = offset * n + l + 1;
        // guard against a sitting exactly on a knot boundary
        while grid.knot(i - 1) > a {
            i -= 1;
        }
        while grid.knot(i) < b {
            if grid.knot(i) > a {
                pts.push(grid.knot(i));
            }
            i += 1;
        }
    } else {
        for &k in grid.knots() {
            if k > a && k < b {
                pts.push(k);
            }
        }
    }
    pts.push(b);
    pts
}

/// Composite quadrature of a vector-valued integrand over `[a, b]`,
/// splitting at every knot so piecewise-smooth integrands are handled at
/// full order.
pub fn integrate<F>(mut f: F, a: f64, b: f64, grid: &KnotGrid, rule: QuadRule) -> Result<DVector<f64>>
where
    F: FnMut(f64) -> DVector<f64>,
{
    if !(a < b) {
        return Err(Error::InvalidArgument(format!(
            "integration bounds must satisfy a < b (got {a}, {b})"
        )));
    }
    let pts = knot_breakpoints(grid, a, b);
    let mut acc: Option<DVector<f64>> = None;
    for w in pts.windows(2) {
        let (nodes, weights, count) = rule.nodes(w[0], w[1]);
        for k in 0..count {
            let val = f(nodes[k]);
            match &mut acc {
                Some(acc) => acc.axpy(weights[k], &val, 1.0),
                None => acc = Some(val * weights[k]),
            }
        }
    }
    acc.ok_or_else(|| Error::InvalidArgument("empty integration range".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> DVector<f64> {
        move |t| DVector::from_element(1, f(t))
    }

    #[test]
    fn constant_over_period_gives_period() {
        let grid = KnotGrid::periodic(vec![0.0, 0.2, 0.5, 0.6, 1.5, 2.0], 3).unwrap();
        for rule in [QuadRule::Gauss2, QuadRule::Simpson] {
            let v = integrate(scalar(|_| 1.0), 0.0, 2.0, &grid, rule).unwrap();
            assert!((v[0] - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gauss2_exact_for_cubic() {
        let grid = KnotGrid::open(vec![0.0, 0.25, 0.5, 0.75, 1.0], 2).unwrap();
        let v = integrate(scalar(|t| t * t * t), 0.0, 1.0, &grid, QuadRule::Gauss2).unwrap();
        assert!((v[0] - 0.25).abs() < 1e-15);
        let v = integrate(scalar(|t| t * t * t), 0.0, 1.0, &grid, QuadRule::Simpson).unwrap();
        assert!((v[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn simpson_sine_over_full_period_vanishes() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 16, 4).unwrap();
        let tau = std::f64::consts::TAU;
        let v = integrate(scalar(|t| (tau * t).sin()), 0.0, 1.0, &grid, QuadRule::Simpson).unwrap();
        assert!(v[0].abs() < 1e-10);
    }

    #[test]
    fn wrapped_range_splits_at_virtual_knots() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 4, 2).unwrap();
        // integrate across the period seam; breakpoints must include 1.0 and 1.25
        let pts = knot_breakpoints(&grid, 0.9, 1.3);
        assert_eq!(pts.len(), 4);
        assert!((pts[1] - 1.0).abs() < 1e-15);
        assert!((pts[2] - 1.25).abs() < 1e-15);
        let v = integrate(scalar(|t| t), 0.9, 1.3, &grid, QuadRule::Gauss2).unwrap();
        assert!((v[0] - 0.5 * (1.3f64.powi(2) - 0.9f64.powi(2))).abs() < 1e-14);
    }
}
