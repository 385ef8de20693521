//! Deterministic extremum scans: uniform grid plus local refinement.
//!
//! The kernels and bound envelopes in this crate are piecewise monotone, so a
//! grid scan followed by golden-section refinement on the winning cell locates
//! extrema to the refinement tolerance. The 2-D variant used by certification
//! zooms a small patch around the winning grid point instead.

use crate::error::Result;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const REFINE_TOL: f64 = 1e-10;

/// Minimum of `f` on `[a, b]`: `n`-point scan, then golden-section on the
/// bracketing cells. Returns `(argmin, min)`.
pub fn min_scan_1d<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> (f64, f64) {
    let n = n.max(3);
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let t = a + (b - a) * i as f64 / (n - 1) as f64;
        let v = f(t);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let step = (b - a) / (n - 1) as f64;
    let lo = (a + step * best_i.saturating_sub(1) as f64).max(a);
    let hi = (a + step * (best_i + 1) as f64).min(b);
    golden_min(&mut f, lo, hi)
}

/// Maximum of `f` on `[a, b]`; same scheme as [`min_scan_1d`].
pub fn max_scan_1d<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> (f64, f64) {
    let (t, v) = min_scan_1d(|t| -f(t), a, b, n);
    (t, -v)
}

fn golden_min<F: FnMut(f64) -> f64>(f: &mut F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > REFINE_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Extremum of a fallible two-variable function over a rectangle.
///
/// `n1 x n2` grid scan, then repeated 11x11 rescans of the 3x3 cell patch
/// around the running winner until the patch shrinks below tolerance.
/// Returns `(s, x, value)`; evaluation order is fixed, so results are
/// bit-reproducible.
pub fn extremum_scan_2d<F: FnMut(f64, f64) -> Result<f64>>(
    mut f: F,
    s_range: (f64, f64),
    x_range: (f64, f64),
    n1: usize,
    n2: usize,
    maximize: bool,
) -> Result<(f64, f64, f64)> {
    let sign = if maximize { -1.0 } else { 1.0 };
    let (mut s_lo, mut s_hi) = s_range;
    let (mut x_lo, mut x_hi) = x_range;
    let mut cols = n1.max(3);
    let mut rows = n2.max(3);
    let mut best = (s_lo, x_lo, f64::INFINITY);
    loop {
        let mut winner = (0usize, 0usize);
        let mut local_best = f64::INFINITY;
        for i in 0..cols {
            let s = if cols == 1 {
                s_lo
            } else {
                s_lo + (s_hi - s_lo) * i as f64 / (cols - 1) as f64
            };
            for j in 0..rows {
                let x = if rows == 1 {
                    x_lo
                } else {
                    x_lo + (x_hi - x_lo) * j as f64 / (rows - 1) as f64
                };
                let v = sign * f(s, x)?;
                if v < local_best {
                    local_best = v;
                    winner = (i, j);
                    if v < best.2 {
                        best = (s, x, v);
                    }
                }
            }
        }
        let ds = if cols > 1 { (s_hi - s_lo) / (cols - 1) as f64 } else { 0.0 };
        let dx = if rows > 1 { (x_hi - x_lo) / (rows - 1) as f64 } else { 0.0 };
        if ds.max(dx) < REFINE_TOL {
            break;
        }
        let sc = s_lo + ds * winner.0 as f64;
        let xc = x_lo + dx * winner.1 as f64;
        s_lo = (sc - ds).max(s_range.0);
        s_hi = (sc + ds).min(s_range.1);
        x_lo = (xc - dx).max(x_range.0);
        x_hi = (xc + dx).min(x_range.1);
        cols = 11;
        rows = 11;
        if s_hi - s_lo < REFINE_TOL && x_hi - x_lo < REFINE_TOL {
            break;
        }
    }
    Ok((best.0, best.1, sign * best.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_parabola_minimum() {
        let (t, v) = min_scan_1d(|t| (t - 0.37).powi(2) + 1.0, 0.0, 1.0, 101);
        // argmin of a flat quadratic is only resolvable to ~sqrt(eps)
        assert_abs_diff_eq!(t, 0.37, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn finds_boundary_maximum() {
        let (t, v) = max_scan_1d(|t| t, 0.0, 1.0, 51);
        assert_abs_diff_eq!(t, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn two_dim_scan_refines() {
        let (s, x, v) = extremum_scan_2d(
            |s, x| Ok((s - 0.3).powi(2) + (x - 0.6).powi(2)),
            (0.0, 1.0),
            (0.0, 1.0),
            21,
            21,
            false,
        )
        .unwrap();
        assert_abs_diff_eq!(s, 0.3, epsilon = 1e-6);
        assert_abs_diff_eq!(x, 0.6, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn two_dim_scan_maximizes() {
        let (_, _, v) = extremum_scan_2d(
            |s, x| Ok(1.0 + 0.25 * libm::sin(s) + x * x),
            (0.0, 1.0),
            (0.0, 0.36),
            101,
            101,
            true,
        )
        .unwrap();
        // sup over [0,1]x[0, 9/25] of the worked nonlinearity
        let exact = 1.0 + 0.25 * libm::sin(1.0) + 0.36f64 * 0.36;
        assert_abs_diff_eq!(v, exact, epsilon = 1e-9);
    }
}
