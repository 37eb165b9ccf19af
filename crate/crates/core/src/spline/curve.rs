//! Vector-valued spline curves and stable B-spline evaluation.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spline::grid::KnotGrid;

/// Values (or `deriv`-th derivatives) of the `m` B-splines that are nonzero
/// on the interval `[t_l, t_{l+1})` containing `t`.
///
/// `out[j]` corresponds to basis index `l - m + 1 + j`. Uses the convex
/// de Boor recursion for values and the two-term difference recurrence for
/// derivatives; no divided differences anywhere.
pub(crate) fn basis_values(grid: &KnotGrid, l: isize, t: f64, deriv: usize, out: &mut [f64]) {
    let m = grid.order();
    debug_assert!(out.len() >= m);
    debug_assert!(deriv < m);
    out[..m].fill(0.0);

    // plain values of order `mu = m - deriv`
    let mu = m - deriv;
    let mut deltal = [0.0f64; 16];
    let mut deltar = [0.0f64; 16];
    let mut b = [0.0f64; 16];
    b[0] = 1.0;
    for j in 1..mu {
        deltar[j] = grid.knot(l + j as isize) - t;
        deltal[j] = t - grid.knot(l + 1 - j as isize);
        let mut saved = 0.0;
        for i in 0..j {
            let term = b[i] / (deltar[i + 1] + deltal[j - i]);
            b[i] = saved + deltar[i + 1] * term;
            saved = deltal[j - i] * term;
        }
        b[j] = saved;
    }

    if deriv == 0 {
        out[..m].copy_from_slice(&b[..m]);
        return;
    }

    // raise the order `deriv` times, differentiating at each step:
    // D^r N^ord_i = (ord-1) (D^{r-1}N^{ord-1}_i / (t_{i+ord-1}-t_i)
    //               - D^{r-1}N^{ord-1}_{i+1} / (t_{i+ord}-t_{i+1}))
    let mut cur = [0.0f64; 16];
    cur[..mu].copy_from_slice(&b[..mu]);
    let mut len = mu;
    for ord in (mu + 1)..=m {
        let mut next = [0.0f64; 16];
        for (pos, slot) in next.iter_mut().enumerate().take(ord) {
            let i = l - ord as isize + 1 + pos as isize;
            let left = if pos >= 1 { cur[pos - 1] } else { 0.0 };
            let right = if pos <= len - 1 { cur[pos] } else { 0.0 };
            let dl = grid.knot(i + ord as isize - 1) - grid.knot(i);
            let dr = grid.knot(i + ord as isize) - grid.knot(i + 1);
            *slot = (ord - 1) as f64 * (left / dl - right / dr);
        }
        cur = next;
        len = ord;
    }
    out[..m].copy_from_slice(&cur[..m]);
}

/// Nonzero basis row at `t`: wraps `t`, locates the interval and returns the
/// first active basis index together with the `m` values.
pub(crate) fn basis_row(grid: &KnotGrid, t: f64, deriv: usize, out: &mut [f64]) -> isize {
    let u = grid.wrap(t);
    let l = grid.interval_index(u) as isize;
    basis_values(grid, l, u, deriv, out);
    l - grid.order() as isize + 1
}

/// A vector-valued spline curve: one coefficient row per basis function.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineCurve {
    grid: KnotGrid,
    /// `n_basis x n` coefficient matrix; row `k` is the vector coefficient `c_k`.
    coeffs: DMatrix<f64>,
}

impl SplineCurve {
    pub fn new(grid: KnotGrid, coeffs: DMatrix<f64>) -> Result<Self> {
        if coeffs.nrows() != grid.n_basis() {
            return Err(Error::InvalidArgument(format!(
                "coefficient count {} does not match basis dimension {}",
                coeffs.nrows(),
                grid.n_basis()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    /// Constant curve equal to `x` everywhere (partition of unity).
    pub fn constant(grid: KnotGrid, x: &DVector<f64>) -> Self {
        let n_basis = grid.n_basis();
        let coeffs = DMatrix::from_fn(n_basis, x.len(), |_, j| x[j]);
        Self { grid, coeffs }
    }

    pub fn zeros(grid: KnotGrid, dim: usize) -> Self {
        let n_basis = grid.n_basis();
        Self {
            grid,
            coeffs: DMatrix::zeros(n_basis, dim),
        }
    }

    pub fn grid(&self) -> &KnotGrid {
        &self.grid
    }

    /// Circuit dimension `n` (columns of the coefficient matrix).
    pub fn dim(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.coeffs
    }

    /// Evaluate the curve (or a derivative) at any real `t`.
    pub fn eval(&self, t: f64, deriv: usize) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.dim());
        self.eval_into(t, deriv, &mut out)?;
        Ok(out)
    }

    pub fn eval_into(&self, t: f64, deriv: usize, out: &mut DVector<f64>) -> Result<()> {
        let m = self.grid.order();
        if deriv >= m {
            return Err(Error::InvalidArgument(format!(
                "derivative order {deriv} must be below the spline order {m}"
            )));
        }
        let mut basis = [0.0f64; 16];
        let first = basis_row(&self.grid, t, deriv, &mut basis);
        out.fill(0.0);
        let nb = self.grid.n_basis() as isize;
        for (j, &w) in basis.iter().enumerate().take(m) {
            if w == 0.0 {
                continue;
            }
            let idx = first + j as isize;
            let k = if self.grid.is_periodic() {
                idx.rem_euclid(nb) as usize
            } else {
                if idx < 0 || idx >= nb {
                    continue;
                }
                idx as usize
            };
            for v in 0..self.dim() {
                out[v] += w * self.coeffs[(k, v)];
            }
        }
        Ok(())
    }

    /// Per-variable spread of the coefficients, used to scale mixed-unit
    /// vectors (node voltages vs branch currents).
    pub fn value_ranges(&self) -> DVector<f64> {
        let n = self.dim();
        let mut out = DVector::zeros(n);
        for v in 0..n {
            let col = self.coeffs.column(v);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &x in col.iter() {
                lo = lo.min(x);
                hi = hi.max(x);
            }
            out[v] = hi - lo;
        }
        out
    }
}
