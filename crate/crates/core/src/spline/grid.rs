//! Knot grids for non-uniform and periodic B-spline spaces.

use crate::error::{Error, Result};

/// A strictly increasing knot sequence with spline order `m`.
///
/// Periodic grids store one full period of knots `t_0 < t_1 < ... < t_N`
/// with `t_N - t_0 = P`; every virtual knot index is resolved through the
/// extension rule `t_{kN+l} = t_l + k*P`. Open grids store the raw sequence
/// and carry `len - m` basis functions.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotGrid {
    knots: Vec<f64>,
    order: usize,
    periodic: bool,
}

impl KnotGrid {
    /// Periodic grid from one period of knots, endpoint included
    /// (`knots.last() - knots[0]` is the period).
    pub fn periodic(knots: Vec<f64>, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidArgument(format!(
                "spline order must be >= 2, got {order}"
            )));
        }
        if knots.len() < 2 {
            return Err(Error::GridTooSmall {
                need: order,
                got: knots.len().saturating_sub(1),
            });
        }
        check_increasing(&knots)?;
        let n = knots.len() - 1;
        if n < order {
            return Err(Error::GridTooSmall { need: order, got: n });
        }
        Ok(Self {
            knots,
            order,
            periodic: true,
        })
    }

    /// Open (non-periodic) grid over the raw knot sequence.
    pub fn open(knots: Vec<f64>, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidArgument(format!(
                "spline order must be >= 2, got {order}"
            )));
        }
        if knots.len() < order + 1 {
            return Err(Error::GridTooSmall {
                need: order,
                got: knots.len(),
            });
        }
        check_increasing(&knots)?;
        Ok(Self {
            knots,
            order,
            periodic: false,
        })
    }

    /// Uniform periodic grid with `n` intervals on `[t0, t0 + period]`.
    pub fn uniform_periodic(t0: f64, period: f64, n: usize, order: usize) -> Result<Self> {
        if period <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "period must be positive, got {period}"
            )));
        }
        let h = period / n as f64;
        let mut knots: Vec<f64> = (0..n).map(|i| t0 + i as f64 * h).collect();
        knots.push(t0 + period);
        Self::periodic(knots, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Number of knot intervals in one period (periodic) or overall (open).
    pub fn n_intervals(&self) -> usize {
        self.knots.len() - 1
    }

    /// Dimension of the spline space: N periodized B-splines for a periodic
    /// grid, `len - m` for an open one.
    pub fn n_basis(&self) -> usize {
        if self.periodic {
            self.knots.len() - 1
        } else {
            self.knots.len() - self.order
        }
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn end(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    /// Period length (periodic grids only).
    pub fn period(&self) -> f64 {
        debug_assert!(self.periodic);
        self.end() - self.start()
    }

    /// Stored knots, including the period endpoint for periodic grids.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Knot at any virtual index. Periodic grids apply the extension rule;
    /// open grids continue linearly past either end (the evaluation
    /// recursion needs a full local window, and in-range basis values do
    /// not depend on the continuation).
    pub fn knot(&self, i: isize) -> f64 {
        if !self.periodic {
            let last = (self.knots.len() - 1) as isize;
            if i < 0 {
                let h = self.knots[1] - self.knots[0];
                return self.knots[0] + i as f64 * h;
            }
            if i > last {
                let h = self.knots[last as usize] - self.knots[last as usize - 1];
                return self.knots[last as usize] + (i - last) as f64 * h;
            }
            return self.knots[i as usize];
        }
        let n = (self.knots.len() - 1) as isize;
        let q = i.div_euclid(n);
        let r = i.rem_euclid(n) as usize;
        self.knots[r] + q as f64 * self.period()
    }

    /// Reduce `t` into the principal period `[t_0, t_0 + P)`.
    pub fn wrap(&self, t: f64) -> f64 {
        if !self.periodic {
            return t;
        }
        let p = self.period();
        let mut u = (t - self.start()).rem_euclid(p) + self.start();
        // rem_euclid can round up to the period end for tiny negatives
        if u >= self.start() + p {
            u -= p;
        }
        u
    }

    /// Index `l` with `t in [t_l, t_{l+1})` for `t` already inside the
    /// principal period (or the open-grid span).
    pub fn interval_index(&self, t: f64) -> usize {
        let n = self.knots.len() - 1;
        match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&t).expect("non-finite knot"))
        {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }

    /// Greville abscissa of basis function `i`: the average of the `m - 1`
    /// knots interior to its support.
    pub fn greville(&self, i: isize) -> f64 {
        let m = self.order as isize;
        let mut acc = 0.0;
        for j in (i + 1)..(i + m) {
            acc += self.knot(j);
        }
        acc / (self.order - 1) as f64
    }

    /// Splitting points pairing the N integral conditions with the N
    /// periodic basis functions; knot averages with the period constraint
    /// `t̂_N - t̂_0 = P` enforced exactly.
    pub fn splitting_points(&self) -> SplittingPoints {
        debug_assert!(self.periodic, "splitting points require a periodic grid");
        let n = self.n_basis();
        let mut points: Vec<f64> = (0..n as isize).map(|i| self.greville(i)).collect();
        points.push(points[0] + self.period());
        SplittingPoints { points }
    }
}

fn check_increasing(knots: &[f64]) -> Result<()> {
    for w in knots.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidArgument(format!(
                "knots must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::Numeric("non-finite knot".into()));
        }
    }
    Ok(())
}

/// `N + 1` splitting points `t̂_0 < ... < t̂_N` with `t̂_N - t̂_0 = P`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingPoints {
    points: Vec<f64>,
}

impl SplittingPoints {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of integration subintervals (= basis functions).
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    /// Point `t̂_l`, wrapping below zero by the period.
    pub fn point(&self, l: isize) -> f64 {
        let n = self.n() as isize;
        let p = self.points[n as usize] - self.points[0];
        let q = l.div_euclid(n);
        let r = l.rem_euclid(n) as usize;
        self.points[r] + q as f64 * p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_increasing_knots() {
        assert!(KnotGrid::periodic(vec![0.0, 1.0, 1.0, 2.0, 3.0], 2).is_err());
        assert!(KnotGrid::periodic(vec![0.0, 2.0, 1.0, 3.0], 2).is_err());
    }

    #[test]
    fn rejects_too_few_intervals() {
        // N = 3 intervals < m = 4
        assert!(KnotGrid::periodic(vec![0.0, 1.0, 2.0, 3.0], 4).is_err());
    }

    #[test]
    fn virtual_knots_extend_periodically() {
        let g = KnotGrid::uniform_periodic(0.0, 1.0, 4, 2).unwrap();
        assert_eq!(g.knot(0), 0.0);
        assert_eq!(g.knot(4), 1.0);
        assert_eq!(g.knot(5), 1.25);
        assert_eq!(g.knot(-1), -0.25);
        assert_eq!(g.knot(-4), -1.0);
    }

    #[test]
    fn wrap_reduces_to_principal_period() {
        let g = KnotGrid::uniform_periodic(0.0, 2.0, 4, 2).unwrap();
        assert!((g.wrap(2.5) - 0.5).abs() < 1e-15);
        assert!((g.wrap(-0.5) - 1.5).abs() < 1e-15);
        assert_eq!(g.wrap(0.0), 0.0);
    }

    #[test]
    fn splitting_points_m2_are_knots() {
        let g = KnotGrid::uniform_periodic(0.0, 1.0, 4, 2).unwrap();
        let sp = g.splitting_points();
        // one-point averages: t̂_l = t_{l+1}
        assert_eq!(sp.points(), &[0.25, 0.5, 0.75, 1.0, 1.25]);
        assert_eq!(sp.point(-1), 0.0);
    }

    #[test]
    fn splitting_points_m4_uniform_spacing_and_period() {
        let g = KnotGrid::uniform_periodic(0.0, 1.0, 8, 4).unwrap();
        let sp = g.splitting_points();
        let pts = sp.points();
        assert_eq!(pts.len(), 9);
        // knot averages: t̂_l = (t_{l+1}+t_{l+2}+t_{l+3})/3 = t_{l+2} on a uniform grid
        for (l, &p) in pts.iter().enumerate().take(8) {
            assert!((p - g.knot(l as isize + 2)).abs() < 1e-14, "l={l}");
        }
        for w in pts.windows(2) {
            assert!((w[1] - w[0] - 0.125).abs() < 1e-14);
        }
        // period constraint holds exactly
        assert_eq!(pts[8] - pts[0], 1.0);
    }

    #[test]
    fn splitting_points_m3_nonuniform_pair_averages() {
        let g = KnotGrid::periodic(vec![0.0, 0.1, 0.5, 1.0], 3).unwrap();
        let sp = g.splitting_points();
        let pts = sp.points();
        assert!((pts[0] - 0.3).abs() < 1e-15);
        assert!((pts[1] - 0.75).abs() < 1e-15);
        assert!((pts[2] - 1.05).abs() < 1e-15);
        assert_eq!(pts[3] - pts[0], 1.0);
    }
}
