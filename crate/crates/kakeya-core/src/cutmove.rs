//! The cut-and-move engine: partition a segment family by midpoint cubes,
//! translate each piece so its cube centre reaches the origin, and track
//! what the decomposition does to mesh counts.
//!
//! The count bookkeeping feeds the lower-box-dimension pipeline: cutting at
//! cube side `delta`, moving, and dilating the moved set's cells by a fixed
//! Chebyshev radius must cover the rasterized ball of radius 1/2, which
//! bounds the ball's count by (roughly) the square of the original count.

use crate::counting::{
    mesh_count, rasterize_ball, rasterize_segments, BallKind, Cell, MeshSpec, OccupancySet,
};
use crate::geometry::{Point, Segment, MAX_DIM};
use crate::math;
use crate::{invalid, Result};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// One piece of a partition: the cube (integer index within the grid over
/// `(-M, M)^d`), its centre `a_j`, and the member segment indices.
#[derive(Debug, Clone)]
pub struct PartitionGroup {
    pub cube: Cell,
    pub centre: Point,
    pub members: Vec<usize>,
}

/// A partition of a segment family by midpoint cubes of side `M / n`.
#[derive(Debug, Clone)]
pub struct Partition {
    pub cube_side: f64,
    pub bound: f64,
    pub subdivisions: u32,
    pub segment_count: usize,
    /// Nonempty cubes in lexicographic index order.
    pub groups: Vec<PartitionGroup>,
}

impl Partition {
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }
}

/// Groups segments by the half-open cube of side `bound / n` containing the
/// midpoint, over the grid covering `(-bound, bound)^d`. Empty cubes are
/// omitted. Errors if any midpoint leaves the open box, naming the segment.
pub fn partition_by_midpoint(segments: &[Segment], bound: f64, n: u32) -> Result<Partition> {
    if segments.is_empty() {
        return Err(invalid("cannot partition an empty segment family"));
    }
    if n == 0 {
        return Err(invalid("subdivision count n must be at least 1"));
    }
    if !(bound > 0.0) {
        return Err(invalid("bound must be positive"));
    }
    let d = segments[0].centre.dim();
    let side = bound / n as f64;

    let mut by_cube: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (idx, seg) in segments.iter().enumerate() {
        let m = seg.midpoint();
        if !(m.inf_norm() < bound) {
            return Err(invalid(alloc::format!(
                "segment {idx} has midpoint {:?} outside (-{bound}, {bound})^d",
                m.coords()
            )));
        }
        let mut cube = [0i32; MAX_DIM];
        for i in 0..d {
            cube[i] = math::floor((m.coord(i) + bound) / side) as i32;
        }
        by_cube.entry(cube).or_default().push(idx);
    }

    let groups = by_cube
        .into_iter()
        .map(|(cube, members)| {
            let mut c = [0.0; MAX_DIM];
            for i in 0..d {
                c[i] = -bound + (cube[i] as f64 + 0.5) * side;
            }
            PartitionGroup {
                cube,
                centre: Point::new(&c[..d]),
                members,
            }
        })
        .collect();

    Ok(Partition {
        cube_side: side,
        bound,
        subdivisions: n,
        segment_count: segments.len(),
        groups,
    })
}

/// Translates each group by `T_{a_j}` (subtracting the cube centre) and
/// concatenates the results in cube order. All output midpoints land in the
/// half-open cube of side `cube_side` centred at the origin.
pub fn cut_and_move(segments: &[Segment], partition: &Partition) -> Result<Vec<Segment>> {
    if partition.segment_count != segments.len() {
        return Err(invalid("partition was computed from a different family"));
    }
    let mut out = Vec::with_capacity(segments.len());
    for g in &partition.groups {
        for &idx in &g.members {
            out.push(segments[idx].translate(&g.centre));
        }
    }
    Ok(out)
}

/// One row of the count sandwich at a single scale; all quantities are exact
/// cell counts.
#[derive(Debug, Clone)]
pub struct SandwichRow {
    pub delta: f64,
    /// `M(K, delta)` for the whole family.
    pub union_count: usize,
    /// `max_j M(K_j, delta)`.
    pub max_group: usize,
    /// `sum_j M(K_j, delta)`.
    pub sum_groups: usize,
    /// `groups * M(K, delta)`.
    pub groups_times_union: usize,
    /// `max <= union <= sum <= groups * union`.
    pub holds: bool,
}

/// For each scale, reports the finite-union count sandwich
/// `max_j M(K_j) <= M(K) <= sum_j M(K_j) <= groups * M(K)`.
pub fn count_sandwich_report(
    segments: &[Segment],
    partition: &Partition,
    deltas: &[f64],
) -> Result<Vec<SandwichRow>> {
    if partition.segment_count != segments.len() {
        return Err(invalid("partition was computed from a different family"));
    }
    let d = segments[0].centre.dim();
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let mesh = MeshSpec::anchored_at_zero(d, delta)?;
        let union_count = mesh_count(&rasterize_segments(segments, &mesh));
        let mut max_group = 0usize;
        let mut sum_groups = 0usize;
        for g in &partition.groups {
            let part: Vec<Segment> = g.members.iter().map(|&i| segments[i]).collect();
            let m = mesh_count(&rasterize_segments(&part, &mesh));
            max_group = max_group.max(m);
            sum_groups += m;
        }
        let groups_times_union = partition.group_count() * union_count;
        rows.push(SandwichRow {
            delta,
            union_count,
            max_group,
            sum_groups,
            groups_times_union,
            holds: max_group <= union_count
                && union_count <= sum_groups
                && sum_groups <= groups_times_union,
        });
    }
    Ok(rows)
}

/// One level of the nested union: the cut-and-moved family whose midpoints
/// lie within `2^-level` of the origin (Euclidean norm).
#[derive(Debug, Clone)]
pub struct NestedLevel {
    pub level: u32,
    pub cube_side: f64,
    pub segments: Vec<Segment>,
}

/// Union over levels `j = 1..=levels` of the cut-and-move at cube side
/// `<= 2^(1-j) / sqrt(d)`, which pins level-`j` midpoints within `2^-j` of
/// the origin.
pub fn nested_union(segments: &[Segment], bound: f64, levels: u32) -> Result<Vec<NestedLevel>> {
    if levels == 0 {
        return Err(invalid("nested union needs at least one level"));
    }
    let d = segments
        .first()
        .ok_or_else(|| invalid("cannot nest an empty segment family"))?
        .centre
        .dim();
    let sqrt_d = math::sqrt(d as f64);
    let mut out = Vec::with_capacity(levels as usize);
    for j in 1..=levels {
        // Least n with bound/n <= 2^(1-j)/sqrt(d).
        let target = math::exp2(1.0 - j as f64) / sqrt_d;
        let n = math::ceil(bound / target) as u32;
        let partition = partition_by_midpoint(segments, bound, n.max(1))?;
        out.push(NestedLevel {
            level: j,
            cube_side: partition.cube_side,
            segments: cut_and_move(segments, &partition)?,
        });
    }
    Ok(out)
}

/// Per-scale report of the lower-box-dimension pipeline.
#[derive(Debug, Clone)]
pub struct LbdScaleRow {
    pub delta: f64,
    /// `c = M(K, delta)`.
    pub kakeya_count: usize,
    /// Number of nonempty midpoint cells (pieces moved).
    pub groups: usize,
    /// `M(moved set, delta)`.
    pub moved_count: usize,
    /// `M(B(0, 1/2), delta)` (closed ball).
    pub ball_count: usize,
    /// Chebyshev dilation radius in cells, `ceil(2 sqrt d)`.
    pub dilation_radius: i32,
    /// Cells in the dilation stencil, `(2 radius + 1)^d`.
    pub kappa: u64,
    /// Whether dilating the moved set's cells covers every ball cell.
    pub covered: bool,
    /// Ball cells missed by the dilated moved set (diagnostic; empty when
    /// covered). A nonempty list signals a direction sample too sparse for
    /// this scale.
    pub uncovered: Vec<Cell>,
    /// The crude count bound `c^2 * kappa`.
    pub crude_bound: f64,
    /// `ball_count <= crude_bound`.
    pub crude_bound_holds: bool,
    /// Measured exponent `log M(K, delta) / log(1/delta)`.
    pub exponent: f64,
    /// Exponent floor implied by the covering argument,
    /// `(log ball_count - log kappa) / (2 log(1/delta))`.
    pub implied_floor: f64,
}

/// Runs the covering pipeline at each scale: count the family, cut at cube
/// side `delta` (mesh-aligned, so midpoint cells are the cubes), move every
/// piece's cube centre to the origin, dilate the moved set's cells by the
/// fixed Chebyshev radius `ceil(2 sqrt d)`, and verify the dilation covers
/// the rasterized ball of radius 1/2.
pub fn theorem_lbd_experiment(segments: &[Segment], scales: &[f64]) -> Result<Vec<LbdScaleRow>> {
    if segments.is_empty() {
        return Err(invalid("the pipeline needs a nonempty segment family"));
    }
    if scales.is_empty() {
        return Err(invalid("the pipeline needs at least one scale"));
    }
    let d = segments[0].centre.dim();
    let sqrt_d = math::sqrt(d as f64);
    let radius = math::ceil(2.0 * sqrt_d) as i32;
    let kappa = (2u64 * radius as u64 + 1).pow(d as u32);

    let mut rows = Vec::with_capacity(scales.len());
    for &delta in scales {
        let mesh = MeshSpec::anchored_at_zero(d, delta)?;
        let occ = rasterize_segments(segments, &mesh);
        let kakeya_count = mesh_count(&occ);

        // Mesh-aligned cut: group by midpoint cell, translate by the cell
        // centre; moved midpoints land in [-delta/2, delta/2)^d.
        let mut by_cell: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
        for (idx, seg) in segments.iter().enumerate() {
            by_cell.entry(mesh.cell_of(&seg.midpoint())).or_default().push(idx);
        }
        let groups = by_cell.len();
        let mut moved: Vec<Segment> = Vec::with_capacity(segments.len());
        for (cell, members) in &by_cell {
            let centre = mesh.cell_centre(cell);
            for &idx in members {
                moved.push(segments[idx].translate(&centre));
            }
        }
        let moved_occ = rasterize_segments(&moved, &mesh);
        let moved_count = mesh_count(&moved_occ);

        let ball = rasterize_ball(&Point::zero(d), 0.5, BallKind::Closed, &mesh)?;
        let ball_count = mesh_count(&ball);
        let dilated = moved_occ.dilate(radius);
        let uncovered: Vec<Cell> = ball
            .cells()
            .iter()
            .copied()
            .filter(|c| !dilated.contains(c))
            .collect();

        let log_inv_delta = -math::ln(delta);
        let crude_bound = kakeya_count as f64 * kakeya_count as f64 * kappa as f64;
        rows.push(LbdScaleRow {
            delta,
            kakeya_count,
            groups,
            moved_count,
            ball_count,
            dilation_radius: radius,
            kappa,
            covered: uncovered.is_empty(),
            uncovered,
            crude_bound,
            crude_bound_holds: (ball_count as f64) <= crude_bound,
            exponent: math::ln(kakeya_count as f64) / log_inv_delta,
            implied_floor: (math::ln(ball_count as f64) - math::ln(kappa as f64))
                / (2.0 * log_inv_delta),
        });
    }
    Ok(rows)
}

/// Largest midpoint sup-norm over a family; the moved-family bound checks.
pub fn midpoint_sup_norm(segments: &[Segment]) -> f64 {
    segments
        .iter()
        .map(|s| s.midpoint().inf_norm())
        .fold(0.0, f64::max)
}

/// Rasterizes a family on a mesh anchored at zero; shared by reports.
pub fn rasterize_family(segments: &[Segment], delta: f64) -> Result<OccupancySet> {
    let d = segments
        .first()
        .ok_or_else(|| invalid("empty segment family"))?
        .centre
        .dim();
    Ok(rasterize_segments(segments, &MeshSpec::anchored_at_zero(d, delta)?))
}
