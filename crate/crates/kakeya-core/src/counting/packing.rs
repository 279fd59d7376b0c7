//! Greedy maximal packings by disjoint closed balls, and their stability
//! under small perturbations of the centre set.

use super::hausdorff::hausdorff_distance;
use crate::geometry::Point;
use crate::{invalid, Result};
use alloc::vec::Vec;

/// A greedy maximal packing of disjoint closed `epsilon`-balls with centres
/// in the scanned point set.
#[derive(Debug, Clone)]
pub struct Packing {
    pub epsilon: f64,
    /// Accepted centres, in scan (lexicographic) order.
    pub centres: Vec<Point>,
    /// `min (|a_i - a_j| - 2 epsilon)` over accepted pairs; infinite when
    /// fewer than two balls were accepted.
    pub min_gap: f64,
}

impl Packing {
    pub fn count(&self) -> usize {
        self.centres.len()
    }
}

/// Greedy lower bound for `N_disj(A, epsilon)`: scan `A` in lexicographic
/// order and accept a point iff its distance to every accepted centre
/// exceeds `2 epsilon` (closed balls are disjoint iff centres are more than
/// `2 epsilon` apart). The result is maximal: no rejected point can be added.
/// The scan order is part of the contract; rerunning is reproducible.
pub fn disjoint_packing_count(points: &[Point], epsilon: f64) -> Result<Packing> {
    if points.is_empty() {
        return Err(invalid("packing requires a nonempty point set"));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(invalid(alloc::format!(
            "packing epsilon must be positive, got {epsilon}"
        )));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].lex_cmp(&points[j]));

    let threshold = 2.0 * epsilon;
    let mut centres: Vec<Point> = Vec::new();
    for &i in &order {
        let p = &points[i];
        if centres.iter().all(|c| c.dist(p) > threshold) {
            centres.push(*p);
        }
    }

    let mut min_gap = f64::INFINITY;
    for i in 0..centres.len() {
        for j in i + 1..centres.len() {
            let gap = centres[i].dist(&centres[j]) - threshold;
            if gap < min_gap {
                min_gap = gap;
            }
        }
    }

    Ok(Packing {
        epsilon,
        centres,
        min_gap,
    })
}

/// Outcome of re-checking a packing against a perturbed point set.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// True iff the accepted centres, each moved to its nearest point of the
    /// perturbed set, are still pairwise more than `2 epsilon` apart; this
    /// witnesses `N_disj(B, epsilon) >= N_disj(A, epsilon)`.
    pub holds: bool,
    /// True iff `dist_H(A, B) < min_gap / 2`, in which case `holds` is a
    /// theorem, not an observation.
    pub guaranteed: bool,
    pub hausdorff: f64,
    /// The moved centres.
    pub moved: Vec<Point>,
}

/// Moves each accepted centre to its nearest point of `perturbed` and
/// re-checks disjointness. When the Hausdorff distance between the original
/// and perturbed sets is below half the packing's minimum gap the re-check
/// is guaranteed to hold; beyond that threshold the result is reported but
/// flagged as not guaranteed.
pub fn packing_stability(
    packing: &Packing,
    original: &[Point],
    perturbed: &[Point],
) -> Result<StabilityReport> {
    if perturbed.is_empty() {
        return Err(invalid("perturbed point set must be nonempty"));
    }
    let moved: Vec<Point> = packing
        .centres
        .iter()
        .map(|a| {
            *perturbed
                .iter()
                .min_by(|p, q| a.dist_sq(p).total_cmp(&a.dist_sq(q)))
                .expect("nonempty")
        })
        .collect();

    let threshold = 2.0 * packing.epsilon;
    let mut holds = true;
    'outer: for i in 0..moved.len() {
        for j in i + 1..moved.len() {
            if !(moved[i].dist(&moved[j]) > threshold) {
                holds = false;
                break 'outer;
            }
        }
    }

    let hausdorff = hausdorff_distance(original, perturbed)?;
    let guaranteed = hausdorff < packing.min_gap / 2.0;
    Ok(StabilityReport {
        holds,
        guaranteed,
        hausdorff,
        moved,
    })
}
