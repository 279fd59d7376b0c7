//! Difference-set combinatorics on bounded integer lattices.
//!
//! Cell sets extracted from rasterized segment families become subsets of
//! `{0..n-1}^d`; their difference sets live in `{-(n-1)..n-1}^d` and are
//! stored re-indexed by `+(n-1)` per axis. Membership during enumeration
//! goes through a flat bit grid, so exact counts stay cheap at desk scale
//! (`n <= 512`, `d <= 3`).

use crate::counting::{mesh_count, rasterize_segments, Cell, MeshSpec};
use crate::geometry::{Segment, MAX_DIM};
use crate::math;
use crate::rng::SplitMix64;
use crate::{invalid, Result};
use alloc::vec::Vec;

/// A finite subset of the lattice `{0..n-1}^d`, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSet {
    n: u32,
    d: usize,
    cells: Vec<Cell>,
}

impl LatticeSet {
    /// Builds a set, sorting and deduplicating. Errors if a tuple leaves
    /// `{0..n-1}^d`.
    pub fn new(n: u32, d: usize, mut cells: Vec<Cell>) -> Result<LatticeSet> {
        if n == 0 {
            return Err(invalid("lattice size n must be positive"));
        }
        if !(1..=MAX_DIM).contains(&d) {
            return Err(invalid("lattice dimension must be 1..=4"));
        }
        for c in &cells {
            for i in 0..d {
                if c[i] < 0 || c[i] >= n as i32 {
                    return Err(invalid(alloc::format!(
                        "lattice point {:?} outside {{0..{}}}^{d}",
                        &c[..d],
                        n - 1
                    )));
                }
            }
            for i in d..MAX_DIM {
                if c[i] != 0 {
                    return Err(invalid("lattice point has nonzero padding coordinates"));
                }
            }
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(LatticeSet { n, d, cells })
    }

    /// The full lattice `{0..n-1}^d`.
    pub fn full(n: u32, d: usize) -> Result<LatticeSet> {
        if n == 0 {
            return Err(invalid("lattice size n must be positive"));
        }
        if !(1..=MAX_DIM).contains(&d) {
            return Err(invalid("lattice dimension must be 1..=4"));
        }
        let mut cells = Vec::with_capacity((n as usize).pow(d as u32));
        let mut cur = [0i32; MAX_DIM];
        fill_box(n as i32, d, 0, &mut cur, &mut cells);
        LatticeSet::new(n, d, cells)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
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

    pub fn is_subset_of(&self, other: &LatticeSet) -> bool {
        self.cells.iter().all(|c| other.contains(c))
    }
}

fn fill_box(n: i32, d: usize, axis: usize, cur: &mut Cell, out: &mut Vec<Cell>) {
    if axis == d {
        out.push(*cur);
        return;
    }
    for v in 0..n {
        cur[axis] = v;
        fill_box(n, d, axis + 1, cur, out);
    }
    cur[axis] = 0;
}

/// Flat bit set over `{0..range-1}^d`.
struct BitGrid {
    bits: Vec<u64>,
    range: u64,
    d: usize,
    count: u64,
}

impl BitGrid {
    fn new(range: u32, d: usize) -> BitGrid {
        let total = (range as u64).pow(d as u32);
        BitGrid {
            bits: alloc::vec![0u64; total.div_ceil(64) as usize],
            range: range as u64,
            d,
            count: 0,
        }
    }

    #[inline]
    fn index(&self, cell: &Cell) -> u64 {
        let mut idx = 0u64;
        for i in 0..self.d {
            idx = idx * self.range + cell[i] as u64;
        }
        idx
    }

    /// Sets a bit; returns true iff it was previously clear.
    #[inline]
    fn insert(&mut self, cell: &Cell) -> bool {
        let idx = self.index(cell);
        let w = (idx / 64) as usize;
        let m = 1u64 << (idx % 64);
        if self.bits[w] & m == 0 {
            self.bits[w] |= m;
            self.count += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    fn contains(&self, cell: &Cell) -> bool {
        let idx = self.index(cell);
        self.bits[(idx / 64) as usize] & (1u64 << (idx % 64)) != 0
    }

    /// Decodes the set bits back into sorted cells.
    fn into_cells(self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.count as usize);
        for (w, &word) in self.bits.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                let mut idx = w as u64 * 64 + b;
                let mut cell = [0i32; MAX_DIM];
                for i in (0..self.d).rev() {
                    cell[i] = (idx % self.range) as i32;
                    idx /= self.range;
                }
                out.push(cell);
            }
        }
        out
    }
}

/// Exact difference set `{x - y : x, y in C}`, re-indexed by `+(n-1)` per
/// axis into a lattice of size `2n - 1`. Errors on the empty set.
pub fn difference_set(c: &LatticeSet) -> Result<LatticeSet> {
    if c.is_empty() {
        return Err(invalid("difference set of an empty set"));
    }
    let range = 2 * c.n() - 1;
    let shift = (c.n() - 1) as i32;
    let mut grid = BitGrid::new(range, c.dim());
    for x in c.cells() {
        for y in c.cells() {
            let mut diff = [0i32; MAX_DIM];
            for i in 0..c.dim() {
                diff[i] = x[i] - y[i] + shift;
            }
            grid.insert(&diff);
        }
    }
    LatticeSet::new(range, c.dim(), grid.into_cells())
}

/// The exact constant-free ceiling `min(size^2, (2n-1)^d)`: a difference set
/// has at most `|C|^2` elements and lives inside `{-(n-1)..n-1}^d`.
pub fn trivial_bound(size: u64, n: u32, d: usize) -> u64 {
    let range = (2 * n as u64 - 1).pow(d as u32);
    size.saturating_mul(size).min(range)
}

/// Extracts the cell sets of the combinatorial program from a segment
/// family: `C` is every mesh cell (at `delta = 1/n`, anchored at zero)
/// intersecting the family, `C0` the cells containing a segment midpoint,
/// both re-indexed to nonnegative tuples. Half-open cells put every
/// midpoint in exactly one cube, so no boundary double-counting can occur.
pub fn extract_lattice_sets(segments: &[Segment], n: u32) -> Result<(LatticeSet, LatticeSet)> {
    if segments.is_empty() {
        return Err(invalid("cannot extract lattice sets from an empty family"));
    }
    if n == 0 {
        return Err(invalid("mesh parameter n must be positive"));
    }
    let d = segments[0].centre.dim();
    let mesh = MeshSpec::anchored_at_zero(d, 1.0 / n as f64)?;
    let occ = rasterize_segments(segments, &mesh);
    let midpoint_cells: Vec<Cell> = segments
        .iter()
        .map(|s| mesh.cell_of(&s.midpoint()))
        .collect();

    // Common re-index offset and lattice size from the occupied cells
    // (midpoint cells are a subset).
    let mut lo = [i32::MAX; MAX_DIM];
    let mut hi = [i32::MIN; MAX_DIM];
    for c in occ.cells() {
        for i in 0..d {
            lo[i] = lo[i].min(c[i]);
            hi[i] = hi[i].max(c[i]);
        }
    }
    let size = (0..d).map(|i| hi[i] - lo[i] + 1).max().unwrap_or(1) as u32;

    let reindex = |c: &Cell| -> Cell {
        let mut out = [0i32; MAX_DIM];
        for i in 0..d {
            out[i] = c[i] - lo[i];
        }
        out
    };
    let c_set = LatticeSet::new(size, d, occ.cells().iter().map(&reindex).collect())?;
    let c0_set = LatticeSet::new(size, d, midpoint_cells.iter().map(&reindex).collect())?;
    debug_assert_eq!(c_set.len(), mesh_count(&occ));
    Ok((c_set, c0_set))
}

/// Exact cardinality of `{y - x : y in C, x in C0}`. Requires `C0` to be a
/// subset of `C` (the midpoint cells are occupied cells).
pub fn translated_union_count(c: &LatticeSet, c0: &LatticeSet) -> Result<u64> {
    if c.is_empty() || c0.is_empty() {
        return Err(invalid("translated union needs nonempty sets"));
    }
    if c.n() != c0.n() || c.dim() != c0.dim() {
        return Err(invalid("C and C0 live on different lattices"));
    }
    if !c0.is_subset_of(c) {
        return Err(invalid("C0 must be a subset of C"));
    }
    let range = 2 * c.n() - 1;
    let shift = (c.n() - 1) as i32;
    let mut grid = BitGrid::new(range, c.dim());
    for y in c.cells() {
        for x in c0.cells() {
            let mut diff = [0i32; MAX_DIM];
            for i in 0..c.dim() {
                diff[i] = y[i] - x[i] + shift;
            }
            grid.insert(&diff);
        }
    }
    Ok(grid.count)
}

/// Per-instance exponents of the combinatorial program.
#[derive(Debug, Clone)]
pub struct ThetaRow {
    pub n: u32,
    pub d: usize,
    pub c_size: u64,
    pub c0_size: u64,
    pub diff_size: u64,
    pub union_count: u64,
    /// `log |C| / log n`.
    pub t_hat: f64,
    /// `log union_count / log n`.
    pub theta_hat: f64,
    pub ratio: f64,
}

/// Family-level exponents: least-squares slopes of `log count` against
/// `log n` across the instances.
#[derive(Debug, Clone)]
pub struct ThetaFit {
    pub t_slope: f64,
    pub theta_slope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct ThetaProfile {
    pub rows: Vec<ThetaRow>,
    /// Present when the family has at least two distinct `n`.
    pub fit: Option<ThetaFit>,
}

/// Reports `t_hat = log|C|/log n` and `theta_hat = log(union count)/log n`
/// per instance, plus fitted growth exponents across the family. The fitted
/// slopes are the finite stand-in for the asymptotic exponents; single-scale
/// ratios carry a `log(2)/log(n)` bias from the doubled difference range.
pub fn theta_profile(family: &[(LatticeSet, LatticeSet)]) -> Result<ThetaProfile> {
    if family.is_empty() {
        return Err(invalid("theta profile needs at least one instance"));
    }
    let mut rows = Vec::with_capacity(family.len());
    for (c, c0) in family {
        if c.len() < 2 || c.n() < 2 {
            return Err(invalid("theta profile needs |C| >= 2 and n >= 2"));
        }
        let diff = difference_set(c)?;
        let union_count = translated_union_count(c, c0)?;
        let log_n = math::ln(c.n() as f64);
        let t_hat = math::ln(c.len() as f64) / log_n;
        let theta_hat = math::ln(union_count as f64) / log_n;
        rows.push(ThetaRow {
            n: c.n(),
            d: c.dim(),
            c_size: c.len() as u64,
            c0_size: c0.len() as u64,
            diff_size: diff.len() as u64,
            union_count,
            t_hat,
            theta_hat,
            ratio: theta_hat / t_hat,
        });
    }

    let mut fit = None;
    let distinct_n = {
        let mut ns: Vec<u32> = rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns.len()
    };
    if distinct_n >= 2 {
        let xs: Vec<f64> = rows.iter().map(|r| math::ln(r.n as f64)).collect();
        let t_slope = ls_slope(&xs, &rows.iter().map(|r| math::ln(r.c_size as f64)).collect::<Vec<_>>());
        let theta_slope = ls_slope(
            &xs,
            &rows
                .iter()
                .map(|r| math::ln(r.union_count as f64))
                .collect::<Vec<_>>(),
        );
        fit = Some(ThetaFit {
            t_slope,
            theta_slope,
            ratio: theta_slope / t_slope,
        });
    }
    Ok(ThetaProfile { rows, fit })
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        0.0
    } else {
        (n * sxy - sx * sy) / denom
    }
}

/// Result of the empirical probe for difference sets attaining the trivial
/// bound.
#[derive(Debug, Clone)]
pub struct SalemProbe {
    pub best_ratio: f64,
    pub best_set: LatticeSet,
    pub trials: u64,
}

/// Samples `trials` random size-`size` subsets of `{0..n-1}^d` (half
/// uniform, half built by difference-avoiding rejection) and reports the
/// best observed `|C - C| / trivial_bound` together with the attaining set.
/// Deterministic for a fixed seed.
pub fn salem_probe(n: u32, d: usize, size: u64, trials: u64, seed: u64) -> Result<SalemProbe> {
    let total = (n as u64).pow(d as u32);
    if size == 0 || size > total {
        return Err(invalid("salem probe size must be in 1..=n^d"));
    }
    if trials == 0 {
        return Err(invalid("salem probe needs at least one trial"));
    }
    let bound = trivial_bound(size, n, d) as f64;
    let mut best_ratio = -1.0f64;
    let mut best_set: Option<LatticeSet> = None;

    for trial in 0..trials {
        let mut rng = SplitMix64::split(seed, trial);
        let avoid_differences = trial % 2 == 1;
        let set = if avoid_differences {
            sample_difference_avoiding(n, d, size, &mut rng)
        } else {
            sample_uniform(n, d, size, &mut rng)
        }?;
        let diff = difference_set(&set)?;
        let ratio = diff.len() as f64 / bound;
        if ratio > best_ratio {
            best_ratio = ratio;
            best_set = Some(set);
        }
    }
    Ok(SalemProbe {
        best_ratio,
        best_set: best_set.expect("at least one trial"),
        trials,
    })
}

fn random_cell(n: u32, d: usize, rng: &mut SplitMix64) -> Cell {
    let mut c = [0i32; MAX_DIM];
    for v in c.iter_mut().take(d) {
        *v = rng.below(n as u64) as i32;
    }
    c
}

fn sample_uniform(n: u32, d: usize, size: u64, rng: &mut SplitMix64) -> Result<LatticeSet> {
    let mut grid = BitGrid::new(n, d);
    let mut cells = Vec::with_capacity(size as usize);
    while (cells.len() as u64) < size {
        let c = random_cell(n, d, rng);
        if grid.insert(&c) {
            cells.push(c);
        }
    }
    LatticeSet::new(n, d, cells)
}

/// Greedy generic-position sampler: a candidate is rejected when it would
/// duplicate an already-realized pairwise difference. Falls back to uniform
/// filling when the rejection budget runs out (dense regimes).
fn sample_difference_avoiding(
    n: u32,
    d: usize,
    size: u64,
    rng: &mut SplitMix64,
) -> Result<LatticeSet> {
    let range = 2 * n - 1;
    let shift = (n - 1) as i32;
    let mut members = BitGrid::new(n, d);
    let mut diffs = BitGrid::new(range, d);
    let mut cells: Vec<Cell> = Vec::with_capacity(size as usize);
    let budget = 200 * size;
    let mut attempts = 0u64;

    'outer: while (cells.len() as u64) < size && attempts < budget {
        attempts += 1;
        let cand = random_cell(n, d, rng);
        if members.contains(&cand) {
            continue;
        }
        // All new differences (both signs) must be fresh and mutually
        // distinct.
        let mut new_diffs: Vec<Cell> = Vec::with_capacity(2 * cells.len());
        for c in &cells {
            let mut fwd = [0i32; MAX_DIM];
            let mut bwd = [0i32; MAX_DIM];
            for i in 0..d {
                fwd[i] = cand[i] - c[i] + shift;
                bwd[i] = c[i] - cand[i] + shift;
            }
            for nd in [fwd, bwd] {
                if diffs.contains(&nd) || new_diffs.contains(&nd) {
                    continue 'outer;
                }
                new_diffs.push(nd);
            }
        }
        for nd in &new_diffs {
            diffs.insert(nd);
        }
        members.insert(&cand);
        cells.push(cand);
    }
    // Top up uniformly if the Sidon-style build stalled.
    while (cells.len() as u64) < size {
        let c = random_cell(n, d, rng);
        if members.insert(&c) {
            cells.push(c);
        }
    }
    LatticeSet::new(n, d, cells)
}
