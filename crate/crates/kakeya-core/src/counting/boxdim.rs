//! Finite proxies for lower and upper box-counting dimension from a table of
//! `(delta, count)` pairs at decreasing scales.

use crate::math;
use crate::{invalid, Result};
use alloc::vec::Vec;

/// Box-dimension estimates from multiscale counts.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDimEstimate {
    /// Two-point slopes `log(M_{j+1}/M_j) / log(delta_j/delta_{j+1})`,
    /// ordered coarse to fine.
    pub slopes: Vec<f64>,
    /// Minimum slope over the finest window (liminf proxy).
    pub lower: f64,
    /// Maximum slope over the finest window (limsup proxy).
    pub upper: f64,
    /// Least-squares slope of `log M` against `-log delta` over all scales.
    pub least_squares: f64,
    /// Number of finest slopes the min/max ran over.
    pub window: usize,
}

/// Estimates with the default window: the finest half of the slopes.
pub fn estimate_box_dimensions(counts: &[(f64, u64)]) -> Result<BoxDimEstimate> {
    let window = counts.len().saturating_sub(1).div_ceil(2);
    estimate_box_dimensions_with_window(counts, window)
}

/// Estimates with an explicit window of finest slopes for the min/max.
pub fn estimate_box_dimensions_with_window(
    counts: &[(f64, u64)],
    window: usize,
) -> Result<BoxDimEstimate> {
    if counts.len() < 3 {
        return Err(invalid("box-dimension estimation needs at least 3 scales"));
    }
    for w in counts.windows(2) {
        if !(w[1].0 < w[0].0) {
            return Err(invalid("deltas must be strictly decreasing"));
        }
    }
    for &(delta, m) in counts {
        if !(delta > 0.0) {
            return Err(invalid("deltas must be positive"));
        }
        if m == 0 {
            return Err(invalid("counts must be positive"));
        }
    }
    let window = window.clamp(1, counts.len() - 1);

    let slopes: Vec<f64> = counts
        .windows(2)
        .map(|w| {
            let (d0, m0) = w[0];
            let (d1, m1) = w[1];
            (math::ln(m1 as f64) - math::ln(m0 as f64)) / (math::ln(d0) - math::ln(d1))
        })
        .collect();

    let fine = &slopes[slopes.len() - window..];
    let lower = fine.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = fine.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Least squares of y = log M over x = -log delta.
    let n = counts.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(delta, m) in counts {
        let x = -math::ln(delta);
        let y = math::ln(m as f64);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    let least_squares = if denom == 0.0 {
        0.0
    } else {
        (n * sxy - sx * sy) / denom
    };

    Ok(BoxDimEstimate {
        slopes,
        lower,
        upper,
        least_squares,
        window,
    })
}
