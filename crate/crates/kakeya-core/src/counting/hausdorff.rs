//! Exact Hausdorff distance between finite point sets.

use crate::geometry::{Point, MAX_DIM};
use crate::math;
use crate::{invalid, Result};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Above this size (points per set) the directed distance switches from the
/// early-exit double loop to a grid-bucketed nearest-neighbour search.
const BRUTE_LIMIT: usize = 10_000;

/// `max(rho(A, B), rho(B, A))` with `rho(A, B) = max_a min_b |a - b|`.
/// Exact for finite sets; errors on empty input.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("hausdorff distance requires nonempty point sets"));
    }
    Ok(directed(a, b).max(directed(b, a)))
}

/// Directed distance `rho(A, B)`; exposed for tests.
pub(crate) fn directed(a: &[Point], b: &[Point]) -> f64 {
    if a.len() <= BRUTE_LIMIT && b.len() <= BRUTE_LIMIT {
        directed_brute(a, b)
    } else {
        directed_bucketed(a, b)
    }
}

fn directed_brute(a: &[Point], b: &[Point]) -> f64 {
    let mut worst_sq = 0.0f64;
    for p in a {
        let mut best_sq = f64::INFINITY;
        for q in b {
            let d = p.dist_sq(q);
            if d < best_sq {
                best_sq = d;
                // This point can no longer raise the max.
                if best_sq <= worst_sq {
                    break;
                }
            }
        }
        if best_sq > worst_sq {
            worst_sq = best_sq;
        }
    }
    math::sqrt(worst_sq)
}

fn directed_bucketed(a: &[Point], b: &[Point]) -> f64 {
    let grid = Grid::build(b);
    let mut worst_sq = 0.0f64;
    for p in a {
        let d = grid.nearest_sq(p, worst_sq);
        if d > worst_sq {
            worst_sq = d;
        }
    }
    math::sqrt(worst_sq)
}

/// Uniform grid over a point set for nearest-neighbour queries.
struct Grid<'a> {
    points: &'a [Point],
    buckets: BTreeMap<[i32; MAX_DIM], Vec<u32>>,
    h: f64,
    anchor: [f64; MAX_DIM],
    lo: [i32; MAX_DIM],
    hi: [i32; MAX_DIM],
    dim: usize,
}

impl<'a> Grid<'a> {
    fn build(points: &'a [Point]) -> Grid<'a> {
        let dim = points[0].dim();
        let mut min = [f64::INFINITY; MAX_DIM];
        let mut max = [f64::NEG_INFINITY; MAX_DIM];
        for p in points {
            for i in 0..dim {
                min[i] = min[i].min(p.coord(i));
                max[i] = max[i].max(p.coord(i));
            }
        }
        let extent = (0..dim).map(|i| max[i] - min[i]).fold(0.0f64, f64::max);
        // Aim for roughly n^(1/d) bins per axis.
        let bins = math::powf(points.len() as f64, 1.0 / dim as f64).max(1.0);
        let h = if extent > 0.0 { extent / bins } else { 1.0 };

        let key = |p: &Point| -> [i32; MAX_DIM] {
            let mut k = [0i32; MAX_DIM];
            for i in 0..dim {
                k[i] = math::floor((p.coord(i) - min[i]) / h) as i32;
            }
            k
        };

        let mut buckets: BTreeMap<[i32; MAX_DIM], Vec<u32>> = BTreeMap::new();
        let mut lo = [i32::MAX; MAX_DIM];
        let mut hi = [i32::MIN; MAX_DIM];
        for (idx, p) in points.iter().enumerate() {
            let k = key(p);
            for i in 0..dim {
                lo[i] = lo[i].min(k[i]);
                hi[i] = hi[i].max(k[i]);
            }
            buckets.entry(k).or_default().push(idx as u32);
        }
        for i in dim..MAX_DIM {
            lo[i] = 0;
            hi[i] = 0;
        }
        Grid {
            points,
            buckets,
            h,
            anchor: min,
            lo,
            hi,
            dim,
        }
    }

    /// Reproduces the build-time point-to-bucket mapping.
    fn key_of(&self, p: &Point) -> [i32; MAX_DIM] {
        let mut k = [0i32; MAX_DIM];
        for i in 0..self.dim {
            k[i] = math::floor((p.coord(i) - self.anchor[i]) / self.h) as i32;
        }
        k
    }

    /// Squared distance from `p` to its nearest point, with early exit once
    /// the result is known to be <= `floor_sq` (it cannot raise the max).
    fn nearest_sq(&self, p: &Point, floor_sq: f64) -> f64 {
        let centre = self.key_of(p);
        // Ring range that can intersect the populated index window.
        let mut ring_min = 0i32;
        let mut ring_max = 0i32;
        for i in 0..self.dim {
            let gap = (self.lo[i] - centre[i]).max(centre[i] - self.hi[i]).max(0);
            ring_min = ring_min.max(gap);
            let far = (self.hi[i] - centre[i]).max(centre[i] - self.lo[i]);
            ring_max = ring_max.max(far);
        }
        let mut best_sq = f64::INFINITY;
        for ring in ring_min..=ring_max {
            // Cells at Chebyshev ring m hold points no closer than (m-1)h
            // from a query inside its own cell.
            let ring_bound = (ring - 1).max(0) as f64 * self.h;
            if ring_bound * ring_bound > best_sq {
                break;
            }
            self.for_ring(&centre, ring, |members| {
                for &m in members {
                    let d = p.dist_sq(&self.points[m as usize]);
                    if d < best_sq {
                        best_sq = d;
                    }
                }
            });
            if best_sq <= floor_sq {
                break;
            }
        }
        best_sq
    }

    /// Visits the members of every bucket at exactly Chebyshev distance
    /// `ring` from `centre` (clipped to the populated index window).
    fn for_ring(&self, centre: &[i32; MAX_DIM], ring: i32, mut f: impl FnMut(&[u32])) {
        let mut key = [0i32; MAX_DIM];
        self.ring_rec(centre, ring, 0, false, &mut key, &mut f);
    }

    fn ring_rec(
        &self,
        centre: &[i32; MAX_DIM],
        ring: i32,
        axis: usize,
        pinned: bool,
        key: &mut [i32; MAX_DIM],
        f: &mut impl FnMut(&[u32]),
    ) {
        if axis == self.dim {
            if pinned || ring == 0 {
                if let Some(members) = self.buckets.get(key) {
                    f(members);
                }
            }
            return;
        }
        for off in -ring..=ring {
            let k = centre[axis] + off;
            if k < self.lo[axis] || k > self.hi[axis] {
                continue;
            }
            key[axis] = k;
            self.ring_rec(centre, ring, axis + 1, pinned || off.abs() == ring, key, f);
        }
    }
}
