//! Knot insertion for periodic spline curves.
//!
//! Multiple knots are inserted one at a time through the local blending
//! rule; the refined curve is pointwise identical to the input.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spline::curve::SplineCurve;
use crate::spline::grid::KnotGrid;

/// Relative tolerance below which an inserted knot is considered a duplicate.
const KNOT_COINCIDENCE_REL: f64 = 1e-12;

/// Blend window for inserting `u` into `grid`: affected basis indices
/// `lo..=l` with weights `beta_i = (u - t_i)/(t_{i+m-1} - t_i)`.
#[derive(Debug)]
pub(crate) struct InsertWindow {
    pub l: isize,
    pub lo: isize,
    pub betas: Vec<f64>,
}

pub(crate) fn insert_window(grid: &KnotGrid, u: f64) -> Result<InsertWindow> {
    let m = grid.order() as isize;
    let uw = grid.wrap(u);
    let l = grid.interval_index(uw) as isize;
    let scale = grid.period().abs().max(1.0);
    if (uw - grid.knot(l)).abs() <= KNOT_COINCIDENCE_REL * scale
        || (grid.knot(l + 1) - uw).abs() <= KNOT_COINCIDENCE_REL * scale
    {
        return Err(Error::DuplicateKnot { value: u });
    }
    let lo = l - m + 2;
    let betas = (lo..=l)
        .map(|i| {
            let t_i = grid.knot(i);
            let t_im = grid.knot(i + m - 1);
            (uw - t_i) / (t_im - t_i)
        })
        .collect();
    Ok(InsertWindow { l, lo, betas })
}

/// Grid with the wrapped copy of `u` inserted.
pub(crate) fn grid_with_knot(grid: &KnotGrid, u: f64, l: isize) -> KnotGrid {
    let uw = grid.wrap(u);
    let mut knots = grid.knots().to_vec();
    knots.insert(l as usize + 1, uw);
    KnotGrid::periodic(knots, grid.order()).expect("insertion keeps the grid valid")
}

pub(crate) fn insert_single(curve: &SplineCurve, u: f64) -> Result<SplineCurve> {
    let grid = curve.grid();
    if !grid.is_periodic() {
        return Err(Error::InvalidArgument(
            "knot insertion is implemented for periodic grids".into(),
        ));
    }
    let w = insert_window(grid, u)?;
    let n_old = grid.n_basis() as isize;
    let n_new = n_old + 1;
    let dim = curve.dim();
    let old = curve.coeffs();
    let fetch = |i: isize, v: usize| old[(i.rem_euclid(n_old) as usize, v)];

    let mut coeffs = DMatrix::zeros(n_new as usize, dim);
    for jj in 0..n_new {
        // the blend window may wrap below index 0; check both representatives
        let j = if jj >= w.lo && jj <= w.l {
            Some(jj)
        } else if jj - n_new >= w.lo {
            Some(jj - n_new)
        } else {
            None
        };
        match j {
            Some(j) => {
                let beta = w.betas[(j - w.lo) as usize];
                for v in 0..dim {
                    coeffs[(jj as usize, v)] = beta * fetch(j, v) + (1.0 - beta) * fetch(j - 1, v);
                }
            }
            None if jj <= w.l - grid.order() as isize + 1 => {
                for v in 0..dim {
                    coeffs[(jj as usize, v)] = fetch(jj, v);
                }
            }
            None => {
                for v in 0..dim {
                    coeffs[(jj as usize, v)] = fetch(jj - 1, v);
                }
            }
        }
    }
    SplineCurve::new(grid_with_knot(grid, u, w.l), coeffs)
}

impl SplineCurve {
    /// Refine the grid by the sorted knots in `new_knots` without changing
    /// the represented function. Duplicates of existing knots are rejected
    /// (only simple knots are supported).
    pub fn insert_knots(&self, new_knots: &[f64]) -> Result<SplineCurve> {
        let mut out = self.clone();
        for &u in new_knots {
            out = insert_single(&out, u)?;
        }
        Ok(out)
    }
}
