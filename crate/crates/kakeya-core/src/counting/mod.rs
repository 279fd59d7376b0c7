//! Metric and counting machinery: half-open mesh rasterization, mesh counts
//! `M(E, delta)`, disjoint-ball packings, box-dimension estimation, Hausdorff
//! distance, and pixel measure.
//!
//! The mesh convention is half-open everywhere: cell `k` on axis `i` is
//! `[origin_i + k*delta, origin_i + (k+1)*delta)`. Half-open cells partition
//! space, so the cells occupied by a set `E` are exactly the image of `E`
//! under [`MeshSpec::cell_of`] and counts never double-report boundaries.

mod boxdim;
mod hausdorff;
mod packing;
mod raster;

pub use boxdim::{estimate_box_dimensions, estimate_box_dimensions_with_window, BoxDimEstimate};
pub use hausdorff::hausdorff_distance;
pub use packing::{disjoint_packing_count, packing_stability, Packing, StabilityReport};
pub(crate) use raster::rasterize_chords;
pub use raster::{rasterize_ball, rasterize_points, rasterize_rays, rasterize_segments, BallKind};

use crate::geometry::{Point, MAX_DIM};
use crate::math;
use crate::{invalid, Result};
use alloc::vec::Vec;

/// Integer index of a mesh cell. Axes beyond the mesh dimension stay zero.
pub type Cell = [i32; MAX_DIM];

/// A half-open `delta`-mesh anchored at `origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    delta: f64,
    origin: Point,
}

impl MeshSpec {
    pub fn new(delta: f64, origin: Point) -> Result<MeshSpec> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(invalid(alloc::format!(
                "mesh delta must be positive, got {delta}"
            )));
        }
        Ok(MeshSpec { delta, origin })
    }

    /// Mesh anchored at the origin of `R^dim`.
    pub fn anchored_at_zero(dim: usize, delta: f64) -> Result<MeshSpec> {
        MeshSpec::new(delta, Point::zero(dim))
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    #[inline]
    pub fn origin(&self) -> &Point {
        &self.origin
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.origin.dim()
    }

    /// The unique cell whose half-open cube contains `p`.
    pub fn cell_of(&self, p: &Point) -> Cell {
        let mut cell = [0i32; MAX_DIM];
        for i in 0..self.dim() {
            cell[i] = math::floor((p.coord(i) - self.origin.coord(i)) / self.delta) as i32;
        }
        cell
    }

    /// Lower corner of a cell.
    pub fn cell_lower(&self, cell: &Cell) -> Point {
        let mut c = [0.0; MAX_DIM];
        for i in 0..self.dim() {
            c[i] = self.origin.coord(i) + cell[i] as f64 * self.delta;
        }
        Point::new(&c[..self.dim()])
    }

    /// Centre of a cell.
    pub fn cell_centre(&self, cell: &Cell) -> Point {
        let mut c = [0.0; MAX_DIM];
        for i in 0..self.dim() {
            c[i] = self.origin.coord(i) + (cell[i] as f64 + 0.5) * self.delta;
        }
        Point::new(&c[..self.dim()])
    }

    /// Volume of one cell, `delta^d`.
    pub fn cell_volume(&self) -> f64 {
        let mut v = 1.0;
        for _ in 0..self.dim() {
            v *= self.delta;
        }
        v
    }
}

/// The set of mesh cells intersected by some geometric set. Cells are stored
/// sorted lexicographically and deduplicated, so iteration order is the
/// serialization order.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancySet {
    mesh: MeshSpec,
    cells: Vec<Cell>,
}

impl OccupancySet {
    pub fn empty(mesh: MeshSpec) -> OccupancySet {
        OccupancySet {
            mesh,
            cells: Vec::new(),
        }
    }

    /// Builds from raw cells, sorting and deduplicating.
    pub fn from_cells(mesh: MeshSpec, mut cells: Vec<Cell>) -> OccupancySet {
        cells.sort_unstable();
        cells.dedup();
        OccupancySet { mesh, cells }
    }

    #[inline]
    pub fn mesh(&self) -> &MeshSpec {
        &self.mesh
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.cells.binary_search(cell).is_ok()
    }

    pub fn union(&self, other: &OccupancySet) -> Result<OccupancySet> {
        self.check_same_mesh(other)?;
        let mut cells = Vec::with_capacity(self.cells.len() + other.cells.len());
        cells.extend_from_slice(&self.cells);
        cells.extend_from_slice(&other.cells);
        Ok(OccupancySet::from_cells(self.mesh, cells))
    }

    pub fn is_subset_of(&self, other: &OccupancySet) -> bool {
        self.cells.iter().all(|c| other.contains(c))
    }

    /// `(missing, extra)`: cells of `other` absent here, and cells here absent
    /// from `other`. Both zero iff the sets are equal.
    pub fn difference_counts(&self, other: &OccupancySet) -> (usize, usize) {
        let missing = other.cells.iter().filter(|c| !self.contains(c)).count();
        let extra = self.cells.iter().filter(|c| !other.contains(c)).count();
        (missing, extra)
    }

    /// Chebyshev dilation: every cell within `radius` cells (sup norm) of an
    /// occupied cell, on the same mesh.
    pub fn dilate(&self, radius: i32) -> OccupancySet {
        assert!(radius >= 0);
        let d = self.mesh.dim();
        let mut out = Vec::with_capacity(self.cells.len());
        let mut offsets: Vec<Cell> = Vec::new();
        let mut offset = [0i32; MAX_DIM];
        build_stencil(d, radius, 0, &mut offset, &mut offsets);
        for cell in &self.cells {
            for off in &offsets {
                let mut c = *cell;
                for i in 0..d {
                    c[i] += off[i];
                }
                out.push(c);
            }
        }
        OccupancySet::from_cells(self.mesh, out)
    }

    /// Centres of all occupied cells, in cell order.
    pub fn cell_centres(&self) -> Vec<Point> {
        self.cells
            .iter()
            .map(|c| self.mesh.cell_centre(c))
            .collect()
    }

    fn check_same_mesh(&self, other: &OccupancySet) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(invalid("occupancy sets live on different meshes"));
        }
        Ok(())
    }
}

fn build_stencil(d: usize, radius: i32, axis: usize, cur: &mut Cell, out: &mut Vec<Cell>) {
    if axis == d {
        out.push(*cur);
        return;
    }
    for v in -radius..=radius {
        cur[axis] = v;
        build_stencil(d, radius, axis + 1, cur, out);
    }
    cur[axis] = 0;
}

/// `M(E, delta)`: the number of mesh cells intersecting the rasterized set.
pub fn mesh_count(occ: &OccupancySet) -> usize {
    occ.len()
}

/// Outer-measure proxy: cell count times `delta^d`.
pub fn pixel_measure(occ: &OccupancySet) -> f64 {
    occ.len() as f64 * occ.mesh().cell_volume()
}
