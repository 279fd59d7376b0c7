//! Supercover rasterization onto the half-open mesh.
//!
//! A cell is occupied iff the set contains a point of the cell's half-open
//! cube. For segments this is the image of the parametric point under
//! `cell_of`, traced by a grid walk that recomputes every plane-crossing
//! parameter from the plane's integer index (no accumulated error), so
//! dyadic inputs rasterize exactly. For balls it is an exact nearest-point
//! test per cell.

use super::{Cell, MeshSpec, OccupancySet};
use crate::geometry::{Aabb, Point, Ray, Segment, MAX_DIM};
use crate::math;
use crate::Result;
use alloc::vec::Vec;

/// Whether a ball is taken with strict (`Open`) or non-strict (`Closed`)
/// boundary. An open ball occupies a cell iff the nearest point of the
/// cell's closure is strictly inside the radius; a closed ball additionally
/// occupies cells that touch the sphere at a point belonging to the
/// half-open cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallKind {
    Open,
    Closed,
}

/// Rasterizes a finite union of segments. The empty family gives the empty
/// occupancy set.
pub fn rasterize_segments(segments: &[Segment], mesh: &MeshSpec) -> OccupancySet {
    let mut cells = Vec::new();
    for s in segments {
        let (p0, p1) = s.endpoints();
        chord_cells(&p0, &p1, mesh, &mut cells);
    }
    OccupancySet::from_cells(*mesh, cells)
}

/// Rasterizes a finite point set.
pub fn rasterize_points(points: &[Point], mesh: &MeshSpec) -> OccupancySet {
    let cells = points.iter().map(|p| mesh.cell_of(p)).collect();
    OccupancySet::from_cells(*mesh, cells)
}

/// Rasterizes rays clipped to a bounding box. Rays that miss the box
/// contribute nothing.
pub fn rasterize_rays(rays: &[Ray], mesh: &MeshSpec, clip: &Aabb) -> OccupancySet {
    let mut cells = Vec::new();
    for r in rays {
        if let Some((p0, p1)) = clip.clip_ray(r) {
            chord_cells(&p0, &p1, mesh, &mut cells);
        }
    }
    OccupancySet::from_cells(*mesh, cells)
}

/// Rasterizes a chord given by raw endpoints (used for pre-clipped rays).
pub(crate) fn rasterize_chords(chords: &[(Point, Point)], mesh: &MeshSpec) -> OccupancySet {
    let mut cells = Vec::new();
    for (p0, p1) in chords {
        chord_cells(p0, p1, mesh, &mut cells);
    }
    OccupancySet::from_cells(*mesh, cells)
}

/// Exact ball rasterization: a cell is occupied iff the nearest point of its
/// closed cube to the centre is within the radius (strictly for `Open`; for
/// `Closed`, distance exactly equal to the radius also counts provided the
/// nearest point belongs to the half-open cube).
pub fn rasterize_ball(
    centre: &Point,
    radius: f64,
    kind: BallKind,
    mesh: &MeshSpec,
) -> Result<OccupancySet> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(crate::invalid(alloc::format!(
            "ball radius must be positive, got {radius}"
        )));
    }
    let d = mesh.dim();
    let delta = mesh.delta();
    let r_sq = radius * radius;

    // Index window per axis: every cell whose closed interval meets
    // [c - r, c + r].
    let mut lo_idx = [0i64; MAX_DIM];
    let mut hi_idx = [0i64; MAX_DIM];
    for i in 0..d {
        let o = mesh.origin().coord(i);
        let c = centre.coord(i);
        lo_idx[i] = math::floor((c - radius - o) / delta) as i64;
        hi_idx[i] = math::floor((c + radius - o) / delta) as i64;
    }

    // Per-axis squared distance contribution and the "centre past the upper
    // face" flag (the nearest point then sits outside the half-open cube).
    let mut axis_contrib: Vec<Vec<(f64, bool)>> = Vec::with_capacity(d);
    for i in 0..d {
        let o = mesh.origin().coord(i);
        let c = centre.coord(i);
        let mut row = Vec::with_capacity((hi_idx[i] - lo_idx[i] + 1) as usize);
        for k in lo_idx[i]..=hi_idx[i] {
            let lo = o + k as f64 * delta;
            let hi = lo + delta;
            let contrib = if c < lo {
                (lo - c) * (lo - c)
            } else if c > hi {
                (c - hi) * (c - hi)
            } else {
                0.0
            };
            row.push((contrib, c >= hi));
        }
        axis_contrib.push(row);
    }

    let mut cells = Vec::new();
    let mut idx = [0usize; MAX_DIM];
    scan_ball(
        d,
        0,
        0.0,
        false,
        r_sq,
        kind,
        &axis_contrib,
        &lo_idx,
        &mut idx,
        &mut cells,
    );
    Ok(OccupancySet::from_cells(*mesh, cells))
}

#[allow(clippy::too_many_arguments)]
fn scan_ball(
    d: usize,
    axis: usize,
    dist_sq: f64,
    on_upper_face: bool,
    r_sq: f64,
    kind: BallKind,
    axis_contrib: &[Vec<(f64, bool)>],
    lo_idx: &[i64; MAX_DIM],
    idx: &mut [usize; MAX_DIM],
    out: &mut Vec<Cell>,
) {
    if axis == d {
        let inside = match kind {
            BallKind::Open => dist_sq < r_sq,
            BallKind::Closed => dist_sq < r_sq || (dist_sq == r_sq && !on_upper_face),
        };
        if inside {
            let mut cell = [0i32; MAX_DIM];
            for i in 0..d {
                cell[i] = (lo_idx[i] + idx[i] as i64) as i32;
            }
            out.push(cell);
        }
        return;
    }
    for (j, &(contrib, past_hi)) in axis_contrib[axis].iter().enumerate() {
        let ds = dist_sq + contrib;
        if ds > r_sq {
            continue;
        }
        idx[axis] = j;
        scan_ball(
            d,
            axis + 1,
            ds,
            on_upper_face || past_hi,
            r_sq,
            kind,
            axis_contrib,
            lo_idx,
            idx,
            out,
        );
    }
}

/// Appends every cell visited by the parametric point `p0 + t (p1 - p0)`,
/// `t` in `[0, 1]`, under the half-open convention.
///
/// Crossing parameters are recomputed from integer plane indices at each
/// step. A point sitting exactly on a grid plane belongs to the upper cell,
/// so a positive-direction crossing takes effect at the crossing parameter
/// while a negative-direction crossing takes effect just after it; exact
/// ties step the positive axes first and then the negative axes, which
/// reproduces the instantaneous cell at the crossing.
fn chord_cells(p0: &Point, p1: &Point, mesh: &MeshSpec, out: &mut Vec<Cell>) {
    let d = p0.dim();
    let delta = mesh.delta();
    let dir = p1.sub(p0);

    let mut cell = mesh.cell_of(p0);
    out.push(cell);

    // Next plane index to cross, per axis.
    let mut next_plane = [0i64; MAX_DIM];
    for i in 0..d {
        let di = dir.coord(i);
        if di > 0.0 {
            next_plane[i] = cell[i] as i64 + 1;
        } else if di < 0.0 {
            next_plane[i] = cell[i] as i64;
        }
    }

    let cross_t = |axis: usize, plane: i64| -> f64 {
        (mesh.origin().coord(axis) + plane as f64 * delta - p0.coord(axis)) / dir.coord(axis)
    };

    loop {
        // Earliest remaining crossing.
        let mut t_min = f64::INFINITY;
        for i in 0..d {
            let di = dir.coord(i);
            if di == 0.0 {
                continue;
            }
            let t = cross_t(i, next_plane[i]);
            let valid = if di > 0.0 { t <= 1.0 } else { t < 1.0 };
            if valid && t < t_min {
                t_min = t;
            }
        }
        if !t_min.is_finite() {
            break;
        }

        // Positive axes step at t_min (the crossing point already belongs to
        // the new cell).
        let mut stepped_pos = false;
        for i in 0..d {
            if dir.coord(i) > 0.0 && cross_t(i, next_plane[i]) == t_min {
                cell[i] += 1;
                next_plane[i] += 1;
                stepped_pos = true;
            }
        }
        if stepped_pos {
            out.push(cell);
        }
        // Negative axes step just after t_min.
        let mut stepped_neg = false;
        for i in 0..d {
            if dir.coord(i) < 0.0 && cross_t(i, next_plane[i]) == t_min {
                cell[i] -= 1;
                next_plane[i] -= 1;
                stepped_neg = true;
            }
        }
        if stepped_neg {
            out.push(cell);
        }
        debug_assert!(stepped_pos || stepped_neg);
    }

    // The endpoint's own cell is always occupied; guard against the last
    // crossing landing a hair past t = 1 in floating point.
    out.push(mesh.cell_of(p1));
}
