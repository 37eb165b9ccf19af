//! Fast wavelet transform on non-uniform periodic spline grids.
//!
//! One transform level removes every odd knot `t_{2k+1}` in turn. Each
//! removal inverts the knot-insertion blend locally: a forward sweep from
//! the left of the affected window and a backward sweep from the right meet
//! at the best-conditioned blend index, and the mismatch there is the detail
//! coefficient `d_k`. Re-inserting the knot and adding `d_k` back at the
//! same index restores the curve exactly, so the decomposition reconstructs
//! to machine precision by construction, and `d_k` measures what the coarse
//! grid cannot represent near `t_{2k+1}`: dropping the detail is the same
//! as removing the knot.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spline::{grid_with_knot, insert_window, KnotGrid, SplineCurve};

/// Absolute floor added to per-variable coefficient ranges when scaling
/// detail norms, so zero-range variables do not blow up the threshold test.
pub const DETAIL_SCALE_FLOOR: f64 = 1e-9;

/// Detail coefficient attached to one removed odd knot.
#[derive(Debug, Clone, PartialEq)]
pub struct Detail {
    /// Index `2k + 1` of the removed knot in the decomposed grid.
    pub odd_index: usize,
    /// Knot location.
    pub knot: f64,
    /// Detail vector (one entry per circuit variable).
    pub coeffs: DVector<f64>,
}

/// One level of a wavelet decomposition: a coarse curve on the even-knot
/// subgrid plus one detail vector per removed odd knot.
#[derive(Debug, Clone)]
pub struct WaveletDecomposition {
    coarse: SplineCurve,
    details: Vec<Detail>,
    fine_grid: KnotGrid,
    scales: DVector<f64>,
}

impl WaveletDecomposition {
    pub fn coarse(&self) -> &SplineCurve {
        &self.coarse
    }

    pub fn details(&self) -> &[Detail] {
        &self.details
    }

    /// Grid the decomposition was taken from.
    pub fn fine_grid(&self) -> &KnotGrid {
        &self.fine_grid
    }

    /// Scaled infinity norm of detail `k`: per-variable magnitudes divided
    /// by the variable's coefficient range in the decomposed curve (node
    /// voltages and branch currents have incomparable units).
    pub fn detail_norm(&self, k: usize) -> f64 {
        let d = &self.details[k].coeffs;
        let mut worst = 0.0f64;
        for v in 0..d.len() {
            worst = worst.max(d[v].abs() / self.scales[v]);
        }
        worst
    }

    /// Assemble a decomposition from parts (used by superposition tests and
    /// by callers that manipulate details directly).
    pub fn from_parts(
        coarse: SplineCurve,
        details: Vec<Detail>,
        fine_grid: KnotGrid,
        scales: DVector<f64>,
    ) -> Self {
        Self {
            coarse,
            details,
            fine_grid,
            scales,
        }
    }
}

/// Window data for removing / re-inserting one knot `v` relative to the
/// coarse grid that lacks it.
struct RemovalWindow {
    /// Coarse interval index containing `v`.
    l: isize,
    /// First blended index `l - m + 2`.
    lo: isize,
    betas: Vec<f64>,
    /// Meeting index of the two sweeps (best-conditioned blend).
    mu: isize,
}

fn removal_window(coarse: &KnotGrid, v: f64) -> Result<RemovalWindow> {
    let w = insert_window(coarse, v)?;
    let mut mu = w.lo;
    let mut best = f64::INFINITY;
    for (k, &beta) in w.betas.iter().enumerate() {
        let dist = (beta - 0.5).abs();
        if dist < best {
            best = dist;
            mu = w.lo + k as isize;
        }
    }
    Ok(RemovalWindow {
        l: w.l,
        lo: w.lo,
        betas: w.betas,
        mu,
    })
}

/// Remove the knot at grid position `r` (1-based interior index), returning
/// the coarse curve and the one detail vector the removal could not match.
fn remove_knot(curve: &SplineCurve, r: usize) -> Result<(SplineCurve, DVector<f64>)> {
    let grid = curve.grid();
    let n_fine = grid.n_basis() as isize;
    let dim = curve.dim();
    let v = grid.knots()[r];

    let mut coarse_knots = grid.knots().to_vec();
    coarse_knots.remove(r);
    let coarse_grid = KnotGrid::periodic(coarse_knots, grid.order())?;
    let n_coarse = coarse_grid.n_basis() as isize;

    let w = removal_window(&coarse_grid, v)?;
    let fine = curve.coeffs();
    let f = |j: isize, v: usize| fine[(j.rem_euclid(n_fine) as usize, v)];
    let beta = |i: isize| w.betas[(i - w.lo) as usize];

    // unknown coarse coefficients sit strictly inside [lo, l-1]; both
    // neighbours are plain copies of fine coefficients
    let span = (w.l - w.lo + 2) as usize; // indices lo-1 ..= l
    let mut cvals = vec![DVector::zeros(dim); span];
    let at = |i: isize| (i - (w.lo - 1)) as usize;
    for vv in 0..dim {
        cvals[at(w.lo - 1)][vv] = f(w.lo - 1, vv);
        cvals[at(w.l)][vv] = f(w.l + 1, vv);
    }
    // forward sweep: divide by beta while it is the larger factor
    for i in w.lo..w.mu {
        let b = beta(i);
        for vv in 0..dim {
            cvals[at(i)][vv] = (f(i, vv) - (1.0 - b) * cvals[at(i - 1)][vv]) / b;
        }
    }
    // backward sweep from the right boundary
    for i in ((w.mu + 1)..=w.l).rev() {
        let b = beta(i);
        for vv in 0..dim {
            cvals[at(i - 1)][vv] = (f(i, vv) - b * cvals[at(i)][vv]) / (1.0 - b);
        }
    }
    let bmu = beta(w.mu);
    let mut detail = DVector::zeros(dim);
    for vv in 0..dim {
        detail[vv] = f(w.mu, vv) - (bmu * cvals[at(w.mu)][vv] + (1.0 - bmu) * cvals[at(w.mu - 1)][vv]);
    }

    let mut coeffs = DMatrix::zeros(n_coarse as usize, dim);
    for ii in 0..n_coarse {
        let in_window =
            (ii >= w.lo && ii <= w.l - 1) || (ii - n_coarse >= w.lo && ii - n_coarse <= w.l - 1);
        for vv in 0..dim {
            coeffs[(ii as usize, vv)] = if in_window {
                let i = if ii >= w.lo && ii <= w.l - 1 { ii } else { ii - n_coarse };
                cvals[at(i)][vv]
            } else if ii <= w.lo - 1 {
                f(ii, vv)
            } else {
                f(ii + 1, vv)
            };
        }
    }
    Ok((SplineCurve::new(coarse_grid, coeffs)?, detail))
}

/// Insert knot `v` into `curve` and add `detail` at the blend index the
/// matching removal would have used.
fn insert_knot_with_detail(
    curve: &SplineCurve,
    v: f64,
    detail: &DVector<f64>,
) -> Result<SplineCurve> {
    let coarse_grid = curve.grid();
    let n_coarse = coarse_grid.n_basis() as isize;
    let w = removal_window(coarse_grid, v)?;
    let dim = curve.dim();
    let old = curve.coeffs();
    let fetch = |i: isize, vv: usize| old[(i.rem_euclid(n_coarse) as usize, vv)];

    let n_fine = n_coarse + 1;
    let mut coeffs = DMatrix::zeros(n_fine as usize, dim);
    for jj in 0..n_fine {
        let j = if jj >= w.lo && jj <= w.l {
            Some(jj)
        } else if jj - n_fine >= w.lo {
            Some(jj - n_fine)
        } else {
            None
        };
        match j {
            Some(j) => {
                let b = w.betas[(j - w.lo) as usize];
                for vv in 0..dim {
                    coeffs[(jj as usize, vv)] = b * fetch(j, vv) + (1.0 - b) * fetch(j - 1, vv);
                }
            }
            None if jj <= w.l - coarse_grid.order() as isize + 1 => {
                for vv in 0..dim {
                    coeffs[(jj as usize, vv)] = fetch(jj, vv);
                }
            }
            None => {
                for vv in 0..dim {
                    coeffs[(jj as usize, vv)] = fetch(jj - 1, vv);
                }
            }
        }
    }
    let mu_fine = w.mu.rem_euclid(n_fine) as usize;
    for vv in 0..dim {
        coeffs[(mu_fine, vv)] += detail[vv];
    }
    SplineCurve::new(grid_with_knot(coarse_grid, v, w.l), coeffs)
}

/// One transform level: split `curve` into its even-knot coarse part and
/// one detail per odd knot.
pub fn fwt_step(curve: &SplineCurve) -> Result<WaveletDecomposition> {
    let grid = curve.grid();
    if !grid.is_periodic() {
        return Err(Error::InvalidArgument(
            "wavelet transform requires a periodic grid".into(),
        ));
    }
    let n = grid.n_intervals();
    let m = grid.order();
    if n < 2 * m {
        return Err(Error::GridTooSmall { need: 2 * m, got: n });
    }
    if n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "grid has an odd number of intervals ({n}); pad it first"
        )));
    }

    let mut scales = curve.value_ranges();
    for v in 0..scales.len() {
        scales[v] += DETAIL_SCALE_FLOOR;
    }

    let fine_grid = grid.clone();
    let mut work = curve.clone();
    let mut details = vec![
        Detail {
            odd_index: 0,
            knot: 0.0,
            coeffs: DVector::zeros(curve.dim()),
        };
        n / 2
    ];
    // remove from the highest odd knot down so lower indices stay put
    for k in (0..n / 2).rev() {
        let idx = 2 * k + 1;
        let knot = fine_grid.knots()[idx];
        let (coarser, d) = remove_knot(&work, idx)?;
        work = coarser;
        details[k] = Detail {
            odd_index: idx,
            knot,
            coeffs: d,
        };
    }
    Ok(WaveletDecomposition {
        coarse: work,
        details,
        fine_grid,
        scales,
    })
}

/// Inverse transform: prolong the coarse curve and re-apply every detail.
pub fn reconstruct(dec: &WaveletDecomposition) -> Result<SplineCurve> {
    reconstruct_subset(dec, |_| true)
}

fn reconstruct_subset(
    dec: &WaveletDecomposition,
    keep: impl Fn(usize) -> bool,
) -> Result<SplineCurve> {
    let mut work = dec.coarse.clone();
    for (k, d) in dec.details.iter().enumerate() {
        if keep(k) {
            work = insert_knot_with_detail(&work, d.knot, &d.coeffs)?;
        }
    }
    Ok(work)
}

/// Knots to insert near every odd knot whose scaled detail exceeds `eps`:
/// the midpoints of the `width` fine-grid intervals closest to it.
pub fn refine_grid(dec: &WaveletDecomposition, eps: f64, width: usize) -> Vec<f64> {
    let grid = &dec.fine_grid;
    let p = grid.period();
    let mut out: Vec<f64> = Vec::new();
    for (k, d) in dec.details.iter().enumerate() {
        if dec.detail_norm(k) <= eps {
            continue;
        }
        let idx = d.odd_index as isize;
        // interval start offsets ordered by distance from the knot
        for j in 0..width {
            let start = if j % 2 == 0 {
                idx - 1 - (j as isize / 2)
            } else {
                idx + (j as isize / 2)
            };
            let mid = 0.5 * (grid.knot(start) + grid.knot(start + 1));
            out.push(grid.wrap(mid));
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * p);
    out
}

/// Insert one knot at the midpoint of the widest interval (used before
/// decomposing grids with an odd interval count).
pub fn pad_to_even(curve: &SplineCurve) -> Result<SplineCurve> {
    let grid = curve.grid();
    if grid.n_intervals() % 2 == 0 {
        return Ok(curve.clone());
    }
    let mut widest = 0usize;
    let mut len = 0.0f64;
    for i in 0..grid.n_intervals() {
        let w = grid.knot(i as isize + 1) - grid.knot(i as isize);
        if w > len {
            len = w;
            widest = i;
        }
    }
    let mid = 0.5 * (grid.knot(widest as isize) + grid.knot(widest as isize + 1));
    curve.insert_knots(&[mid])
}

/// Predictor coarsening: drop every odd knot whose detail is at most `eps`
/// and re-apply the retained details, so kept features survive. The result
/// deviates from the input by at most about `2^(m/2) * eps * n_removed`
/// in the scaled norm (each dropped detail perturbs the sweeps of later
/// windows by at most the sweep amplification).
pub fn coarsen_predictor(curve: &SplineCurve, eps: f64) -> Result<SplineCurve> {
    let padded = pad_to_even(curve)?;
    if padded.grid().n_intervals() < 2 * padded.grid().order() {
        return Ok(padded);
    }
    let dec = fwt_step(&padded)?;
    let keep: Vec<bool> = (0..dec.details.len())
        .map(|k| dec.detail_norm(k) > eps)
        .collect();
    if keep.iter().all(|&k| k) {
        return Ok(padded);
    }
    reconstruct_subset(&dec, |k| keep[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_curve(grid: KnotGrid, dim: usize, seed: u64) -> SplineCurve {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let n = grid.n_basis();
        let coeffs = DMatrix::from_fn(n, dim, |_, _| next());
        SplineCurve::new(grid, coeffs).unwrap()
    }

    fn max_rel_dev(a: &SplineCurve, b: &SplineCurve, samples: usize) -> f64 {
        let p = a.grid().period();
        let t0 = a.grid().start();
        let mut dev: f64 = 0.0;
        let mut scale: f64 = 1e-30;
        for k in 0..samples {
            let t = t0 + p * k as f64 / samples as f64;
            let va = a.eval(t, 0).unwrap();
            let vb = b.eval(t, 0).unwrap();
            for v in 0..va.len() {
                dev = dev.max((va[v] - vb[v]).abs());
                scale = scale.max(va[v].abs());
            }
        }
        dev / scale
    }

    #[test]
    fn round_trip_is_exact() {
        let grid = KnotGrid::periodic(
            vec![
                0.0, 0.03, 0.1, 0.14, 0.2, 0.29, 0.33, 0.40, 0.45, 0.52, 0.6, 0.61, 0.7, 0.74,
                0.8, 0.9, 1.0,
            ],
            4,
        )
        .unwrap();
        assert_eq!(grid.n_intervals(), 16);
        let curve = lcg_curve(grid, 3, 7);
        let dec = fwt_step(&curve).unwrap();
        let back = reconstruct(&dec).unwrap();
        assert_eq!(back.grid(), curve.grid());
        assert!((back.coeffs() - curve.coeffs()).amax() < 1e-12);
        assert!(max_rel_dev(&curve, &back, 1000) < 1e-12);
    }

    #[test]
    fn coarse_representable_curve_has_zero_details() {
        let coarse_grid = KnotGrid::uniform_periodic(0.0, 1.0, 16, 4).unwrap();
        let coarse = lcg_curve(coarse_grid.clone(), 2, 3);
        // refine by the odd midpoints so the fine curve lives in the coarse space
        let mids: Vec<f64> = (0..16)
            .map(|i| 0.5 * (coarse_grid.knot(i) + coarse_grid.knot(i + 1)))
            .collect();
        let fine = coarse.insert_knots(&mids).unwrap();
        let dec = fwt_step(&fine).unwrap();
        for (k, d) in dec.details().iter().enumerate() {
            assert!(d.coeffs.amax() < 1e-12, "detail {k} = {:?}", d.coeffs);
        }
    }

    #[test]
    fn spike_detail_localizes_to_its_odd_knot() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 32, 4).unwrap();
        let mut curve = SplineCurve::zeros(grid.clone(), 1);
        // fine B-spline whose support is centered nearest t_{2j+1}:
        // greville(i) = t_{i+2} for cubics, so i = 2j - 1
        let j = 7usize;
        let i = 2 * j - 1;
        curve.coeffs_mut()[(i, 0)] = 1.0;
        let dec = fwt_step(&curve).unwrap();
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for k in 0..dec.details().len() {
            let n = dec.detail_norm(k);
            if n > best_norm {
                best_norm = n;
                best = k;
            }
        }
        assert_eq!(best, j);
    }

    #[test]
    fn reconstruct_with_zero_details_is_prolonged_coarse() {
        let grid = KnotGrid::uniform_periodic(0.0, 2.0, 12, 3).unwrap();
        let curve = lcg_curve(grid, 2, 9);
        let mut dec = fwt_step(&curve).unwrap();
        for d in dec.details.iter_mut() {
            d.coeffs.fill(0.0);
        }
        let rec = reconstruct(&dec).unwrap();
        // same function as the coarse curve, expressed on the fine grid
        assert!(max_rel_dev(&rec, dec.coarse(), 800) < 1e-12);
    }

    #[test]
    fn transform_is_linear() {
        let grid = KnotGrid::periodic(
            vec![0.0, 0.05, 0.13, 0.22, 0.3, 0.41, 0.5, 0.55, 0.63, 0.72, 0.8, 0.94, 1.0],
            3,
        )
        .unwrap();
        let a = lcg_curve(grid.clone(), 2, 21);
        let b = lcg_curve(grid.clone(), 2, 22);
        let sum = SplineCurve::new(grid, a.coeffs() + b.coeffs()).unwrap();

        let da = fwt_step(&a).unwrap();
        let db = fwt_step(&b).unwrap();
        let dsum = fwt_step(&sum).unwrap();
        for k in 0..da.details().len() {
            let lin = &da.details()[k].coeffs + &db.details()[k].coeffs;
            assert!((&dsum.details()[k].coeffs - lin).amax() < 1e-12);
        }
        // reconstruct(dec_a + dec_b) == reconstruct(dec_a) + reconstruct(dec_b)
        let combined = WaveletDecomposition::from_parts(
            SplineCurve::new(
                da.coarse().grid().clone(),
                da.coarse().coeffs() + db.coarse().coeffs(),
            )
            .unwrap(),
            da.details()
                .iter()
                .zip(db.details())
                .map(|(x, y)| Detail {
                    odd_index: x.odd_index,
                    knot: x.knot,
                    coeffs: &x.coeffs + &y.coeffs,
                })
                .collect(),
            da.fine_grid().clone(),
            da.scales.clone(),
        );
        let rec_combined = reconstruct(&combined).unwrap();
        let ra = reconstruct(&da).unwrap();
        let rb = reconstruct(&db).unwrap();
        let rec_sum = SplineCurve::new(ra.grid().clone(), ra.coeffs() + rb.coeffs()).unwrap();
        assert!(max_rel_dev(&rec_combined, &rec_sum, 700) < 1e-12);
    }

    #[test]
    fn refine_grid_emits_adjacent_midpoints() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 16, 4).unwrap();
        let h = 1.0 / 16.0;
        let curve = lcg_curve(grid.clone(), 1, 2);
        let mut dec = fwt_step(&curve).unwrap();
        // force exactly one flagged detail
        for d in dec.details.iter_mut() {
            d.coeffs.fill(0.0);
        }
        dec.details[3].coeffs[0] = 1.0; // odd knot t_7
        let knots = refine_grid(&dec, 0.5, 2);
        let t7 = grid.knot(7);
        assert_eq!(knots.len(), 2);
        assert!((knots[0] - (t7 - 0.5 * h)).abs() < 1e-14);
        assert!((knots[1] - (t7 + 0.5 * h)).abs() < 1e-14);
    }

    #[test]
    fn refine_grid_dedups_shared_midpoints() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 16, 4).unwrap();
        let curve = lcg_curve(grid.clone(), 1, 2);
        let mut dec = fwt_step(&curve).unwrap();
        for d in dec.details.iter_mut() {
            d.coeffs.fill(0.0);
        }
        // adjacent flagged wavelets; width 4 reaches the shared intervals
        dec.details[3].coeffs[0] = 1.0;
        dec.details[4].coeffs[0] = 1.0;
        let knots = refine_grid(&dec, 0.5, 4);
        // 8 candidates, two shared -> 6 unique (intervals 6..10 once each, plus 5 and 10)
        assert_eq!(knots.len(), 6);
        for w in knots.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn no_flags_gives_empty_refinement() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 16, 4).unwrap();
        let curve = lcg_curve(grid, 1, 4);
        let dec = fwt_step(&curve).unwrap();
        let big = dec
            .details()
            .iter()
            .enumerate()
            .map(|(k, _)| dec.detail_norm(k))
            .fold(0.0f64, f64::max);
        assert!(refine_grid(&dec, big * 1.001, 2).is_empty());
    }

    #[test]
    fn coarsen_below_threshold_keeps_curve() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 16, 4).unwrap();
        let curve = lcg_curve(grid, 2, 13);
        let dec = fwt_step(&curve).unwrap();
        let min_norm = (0..dec.details().len())
            .map(|k| dec.detail_norm(k))
            .fold(f64::INFINITY, f64::min);
        let out = coarsen_predictor(&curve, min_norm * 0.5).unwrap();
        assert_eq!(out.grid(), curve.grid());
        assert!((out.coeffs() - curve.coeffs()).amax() < 1e-12);
    }

    #[test]
    fn coarsen_removes_all_odd_knots_for_smooth_curve() {
        let coarse_grid = KnotGrid::uniform_periodic(0.0, 1.0, 12, 4).unwrap();
        let coarse = lcg_curve(coarse_grid.clone(), 1, 5);
        let mids: Vec<f64> = (0..12)
            .map(|i| 0.5 * (coarse_grid.knot(i) + coarse_grid.knot(i + 1)))
            .collect();
        let fine = coarse.insert_knots(&mids).unwrap();
        let out = coarsen_predictor(&fine, 1e-8).unwrap();
        assert_eq!(out.grid().n_intervals(), 12);
        assert!(max_rel_dev(&out, &fine, 600) < 1e-12);
    }

    #[test]
    fn coarsen_keeps_spike_knot() {
        // smooth part lives in the coarse space, spike enters as one detail
        let coarse_grid = KnotGrid::uniform_periodic(0.0, 1.0, 16, 4).unwrap();
        let smooth = lcg_curve(coarse_grid.clone(), 1, 31);
        let mids: Vec<f64> = (0..16)
            .map(|i| 0.5 * (coarse_grid.knot(i) + coarse_grid.knot(i + 1)))
            .collect();
        let fine = smooth.insert_knots(&mids).unwrap();
        let mut dec = fwt_step(&fine).unwrap();
        let j = 5usize;
        let range = dec.scales[0];
        dec.details[j].coeffs[0] = 0.5 * range;
        let spiked = reconstruct(&dec).unwrap();

        // the round trip sees exactly one detail ten times above threshold
        let dec2 = fwt_step(&spiked).unwrap();
        let eps = dec2.detail_norm(j) / 10.0;
        for k in 0..dec2.details().len() {
            if k != j {
                assert!(dec2.detail_norm(k) < eps, "detail {k} above threshold");
            }
        }
        let out = coarsen_predictor(&spiked, eps).unwrap();
        assert_eq!(out.grid().n_intervals(), 17);
        let kept: Vec<f64> = out
            .grid()
            .knots()
            .iter()
            .copied()
            .filter(|k| !coarse_grid.knots().contains(k))
            .collect();
        assert_eq!(kept.len(), 1);
        assert!((kept[0] - dec.fine_grid().knot(2 * j as isize + 1)).abs() < 1e-14);
    }

    #[test]
    fn coarsening_is_monotone_in_threshold() {
        let grid = KnotGrid::periodic(
            vec![
                0.0, 0.05, 0.1, 0.18, 0.25, 0.33, 0.4, 0.47, 0.55, 0.61, 0.7, 0.78, 0.85, 0.9,
                0.95, 0.98, 1.0,
            ],
            4,
        )
        .unwrap();
        let curve = lcg_curve(grid, 2, 77);
        let eps1 = 0.05;
        let eps2 = 0.3;
        let a = coarsen_predictor(&curve, eps1).unwrap();
        let b = coarsen_predictor(&curve, eps2).unwrap();
        // knots removed with eps2 are a superset: surviving knots are a subset
        for k in b.grid().knots() {
            assert!(
                a.grid().knots().iter().any(|x| (x - k).abs() < 1e-14),
                "knot {k} survived eps2 but not eps1"
            );
        }
    }

    #[test]
    fn small_grid_cannot_decompose() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 6, 4).unwrap();
        let curve = lcg_curve(grid, 1, 1);
        assert!(matches!(fwt_step(&curve), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn odd_interval_count_errors_and_padding_fixes_it() {
        let grid = KnotGrid::uniform_periodic(0.0, 1.0, 9, 3).unwrap();
        let curve = lcg_curve(grid, 1, 6);
        assert!(fwt_step(&curve).is_err());
        let padded = pad_to_even(&curve).unwrap();
        assert_eq!(padded.grid().n_intervals(), 10);
        assert!(fwt_step(&padded).is_ok());
    }
}
