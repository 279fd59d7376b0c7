//! Constructions of needle sets from centre fields.
//!
//! A centre field assigns to each sampled projective direction the centre of
//! the unit segment pointing that way; the encoded set is the union of those
//! segments. This module builds the discrete fan used by the figure
//! pipeline, quantizes fields onto cube grids, checks that the translated
//! union of a quantized field's groups fills the ball of radius 1/2, and
//! produces half-extended sets (one ray per sphere direction).

use crate::counting::{
    mesh_count, pixel_measure, rasterize_ball, rasterize_segments, BallKind, Cell, MeshSpec,
    OccupancySet,
};
use crate::geometry::{Direction, Point, Ray, Segment, UnitVec, MAX_DIM};
use crate::math;
use crate::rng::SplitMix64;
use crate::{invalid, Result};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// A finite map from canonical directions to segment centres, together with
/// a bound `M` such that every unit segment stays inside `(-M, M)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterField {
    entries: Vec<(Direction, Point)>,
    bound: f64,
}

impl CenterField {
    /// Builds a field after sorting entries by direction. Errors on duplicate
    /// directions, or on a centre violating `|c|_inf + 1/2 <= bound`.
    pub fn new(mut entries: Vec<(Direction, Point)>, bound: f64) -> Result<CenterField> {
        if entries.is_empty() {
            return Err(invalid("centre field must have at least one entry"));
        }
        if !(bound > 0.5) {
            return Err(invalid("centre-field bound must exceed 1/2"));
        }
        entries.sort_by(|a, b| a.0.lex_cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(invalid("duplicate direction in centre field"));
            }
        }
        for (_, c) in &entries {
            if !(c.inf_norm() + 0.5 <= bound) {
                return Err(invalid(alloc::format!(
                    "centre {:?} leaves the (-{bound}, {bound})^d box",
                    c.coords()
                )));
            }
        }
        Ok(CenterField { entries, bound })
    }

    /// Field sending every direction to the same centre.
    pub fn constant(directions: &[Direction], centre: Point, bound: f64) -> Result<CenterField> {
        CenterField::new(directions.iter().map(|d| (*d, centre)).collect(), bound)
    }

    /// Field with centres drawn uniformly from `[-half_extent, half_extent]^d`.
    pub fn random(
        directions: &[Direction],
        half_extent: f64,
        bound: f64,
        rng: &mut SplitMix64,
    ) -> Result<CenterField> {
        let entries = directions
            .iter()
            .map(|dir| {
                let mut c = [0.0; MAX_DIM];
                for v in c.iter_mut().take(dir.dim()) {
                    *v = rng.uniform(-half_extent, half_extent);
                }
                (*dir, Point::new(&c[..dir.dim()]))
            })
            .collect();
        CenterField::new(entries, bound)
    }

    #[inline]
    pub fn entries(&self) -> &[(Direction, Point)] {
        &self.entries
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn bound(&self) -> f64 {
        self.bound
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries[0].0.dim()
    }

    /// Supremum over directions of the distance between centres. Errors
    /// unless the two fields sample exactly the same directions.
    pub fn distance(&self, other: &CenterField) -> Result<f64> {
        if self.len() != other.len() {
            return Err(invalid("fields sample different direction sets"));
        }
        let mut sup = 0.0f64;
        for ((da, ca), (db, cb)) in self.entries.iter().zip(other.entries.iter()) {
            if da != db {
                return Err(invalid("fields sample different direction sets"));
            }
            sup = sup.max(ca.dist(cb));
        }
        Ok(sup)
    }
}

/// Supremum-norm distance between two fields on the same direction sample.
pub fn field_distance(f: &CenterField, g: &CenterField) -> Result<f64> {
    f.distance(g)
}

/// One segment per field entry: centre `f(x)`, direction `x`, given length.
pub fn build_kakeya(field: &CenterField, length: f64) -> Result<Vec<Segment>> {
    field
        .entries
        .iter()
        .map(|(dir, centre)| Segment::new(*centre, *dir, length))
        .collect()
}

/// `count` equally spaced projective directions in the plane (angles
/// `k*pi/count`), canonicalized and sorted.
pub fn projective_fan(count: usize) -> Result<Vec<Direction>> {
    if count == 0 {
        return Err(invalid("direction count must be positive"));
    }
    let mut dirs: Vec<Direction> = (0..count)
        .map(|k| {
            let angle = k as f64 * core::f64::consts::PI / count as f64;
            Direction::canonicalize(&Point::new(&[math::cos(angle), math::sin(angle)]))
                .expect("nonzero by construction")
        })
        .collect();
    dirs.sort_by(|a, b| a.lex_cmp(b));
    Ok(dirs)
}

/// Snap to the dyadic grid of step `2^-16`, keeping later cube arithmetic
/// exact in `f64`.
fn snap_dyadic(v: f64) -> f64 {
    math::round(v * 65536.0) / 65536.0
}

/// The discrete 64-segment fan: directions at angles `k*pi/64` and centres
/// placed by the R2 low-discrepancy sequence inside `[-3/2, 3/2]^2` (so each
/// unit segment stays inside the side-4 square `(-2, 2)^2`, bound `M = 2`).
/// Centres sit on the dyadic `2^-16` grid; the construction is deterministic.
pub fn fan64() -> CenterField {
    fan_field(64)
}

/// Generalization of [`fan64`] to any direction count; used when a denser
/// sample of the same construction is needed.
pub fn fan_field(count: usize) -> CenterField {
    let dirs = projective_fan(count).expect("positive count");
    // R2 sequence (Roberts): alpha = (1/phi_p, 1/phi_p^2) for the plastic
    // number phi_p, the 2-d analogue of golden-ratio sampling.
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_2;
    let entries: Vec<(Direction, Point)> = dirs
        .iter()
        .enumerate()
        .map(|(k, dir)| {
            let t = (k + 1) as f64;
            let u = (0.5 + A1 * t) % 1.0;
            let v = (0.5 + A2 * t) % 1.0;
            let c = Point::new(&[snap_dyadic((u - 0.5) * 3.0), snap_dyadic((v - 0.5) * 3.0)]);
            (*dir, c)
        })
        .collect();
    CenterField::new(entries, 2.0).expect("centres inside the box by construction")
}

/// One group of a quantized field: the cube (by integer index), its centre,
/// and the indices of the field entries whose original centre fell in it.
#[derive(Debug, Clone)]
pub struct QuantGroup {
    pub cube: Cell,
    pub centre: Point,
    pub members: Vec<usize>,
}

/// The cube partition record produced by [`quantize_field`].
#[derive(Debug, Clone)]
pub struct Quantization {
    /// Side length of each half-open cube, `M / n`.
    pub side: f64,
    /// The subdivision count `n` (least integer with `M/n < eps/sqrt(d)`).
    pub subdivisions: u32,
    pub bound: f64,
    pub groups: Vec<QuantGroup>,
}

/// Partitions `(-M, M)^d` into half-open cubes of side `M/n` with `n` the
/// least integer making `M/n < eps/sqrt(d)`, and snaps every centre to its
/// cube's centre. The returned field is within `eps` of the original in
/// supremum norm (strictly), and the groups record which directions share a
/// cube.
pub fn quantize_field(f0: &CenterField, eps: f64) -> Result<(CenterField, Quantization)> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid(alloc::format!(
            "quantization epsilon must be positive, got {eps}"
        )));
    }
    let d = f0.dim();
    let m = f0.bound();
    let n = (math::floor(m * math::sqrt(d as f64) / eps) as u32) + 1;
    let side = m / n as f64;

    let cube_of = |c: &Point| -> Cell {
        let mut cube = [0i32; MAX_DIM];
        for i in 0..d {
            cube[i] = math::floor((c.coord(i) + m) / side) as i32;
        }
        cube
    };
    let cube_centre = |cube: &Cell| -> Point {
        let mut c = [0.0; MAX_DIM];
        for i in 0..d {
            c[i] = -m + (cube[i] as f64 + 0.5) * side;
        }
        Point::new(&c[..d])
    };

    let mut by_cube: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (idx, (_, centre)) in f0.entries().iter().enumerate() {
        by_cube.entry(cube_of(centre)).or_default().push(idx);
    }

    let groups: Vec<QuantGroup> = by_cube
        .into_iter()
        .map(|(cube, members)| QuantGroup {
            cube,
            centre: cube_centre(&cube),
            members,
        })
        .collect();

    let mut entries = f0.entries().to_vec();
    for g in &groups {
        for &idx in &g.members {
            entries[idx].1 = g.centre;
        }
    }
    let quantized = CenterField::new(entries, m)?;
    Ok((
        quantized,
        Quantization {
            side,
            subdivisions: n,
            bound: m,
            groups,
        },
    ))
}

/// Outcome of comparing the translated union of a quantized field's groups
/// against the rasterized closed ball of radius 1/2.
#[derive(Debug, Clone)]
pub struct ShiftedUnionReport {
    pub equal: bool,
    /// Ball cells not covered by the union.
    pub missing: usize,
    /// Union cells outside the ball raster.
    pub extra: usize,
    pub union_count: usize,
    pub ball_count: usize,
}

/// Rasterizes the union of the translated groups `T_{a_j} U_j` of a
/// quantized field and the closed ball `B(0, 1/2)` on the same mesh, and
/// compares the cell sets. Segments are closed, so their union fills the
/// closed ball as the direction sample refines; a sparse sample shows up as
/// `missing > 0`.
pub fn shifted_union_is_ball(
    field: &CenterField,
    quant: &Quantization,
    mesh: &MeshSpec,
) -> Result<ShiftedUnionReport> {
    let union = rasterize_shifted_union(field, quant, mesh)?;
    let ball = rasterize_ball(&Point::zero(field.dim()), 0.5, BallKind::Closed, mesh)?;
    let (missing, extra) = union.difference_counts(&ball);
    Ok(ShiftedUnionReport {
        equal: missing == 0 && extra == 0,
        missing,
        extra,
        union_count: union.len(),
        ball_count: ball.len(),
    })
}

/// The rasterized union of the translated groups (exposed for the witness
/// and for experiments that draw it).
pub fn rasterize_shifted_union(
    field: &CenterField,
    quant: &Quantization,
    mesh: &MeshSpec,
) -> Result<OccupancySet> {
    let segments = build_kakeya(field, 1.0)?;
    let mut moved: Vec<Segment> = Vec::with_capacity(segments.len());
    for g in &quant.groups {
        for &idx in &g.members {
            moved.push(segments[idx].translate(&g.centre));
        }
    }
    Ok(rasterize_segments(&moved, mesh))
}

/// The pigeonhole witness: the group whose translated rasterization has the
/// largest pixel measure, compared against `measure(ball) / N`.
#[derive(Debug, Clone)]
pub struct MeasureWitness {
    pub group_index: usize,
    pub group_measure: f64,
    /// `pixel_measure(ball raster) / N` where `N` is the number of groups.
    pub bound: f64,
    /// Whether the witness measure reaches the bound. Guaranteed whenever
    /// the translated union covers the ball raster.
    pub holds: bool,
    /// Pixel measure of every group, in group order.
    pub group_measures: Vec<f64>,
}

/// Finds the group index maximizing `pixel_measure(T_{a_i} U_i)` and checks
/// it against `pixel_measure(B(0,1/2)) / N`.
pub fn measure_witness(
    field: &CenterField,
    quant: &Quantization,
    mesh: &MeshSpec,
) -> Result<MeasureWitness> {
    if quant.groups.is_empty() {
        return Err(invalid("quantization has no groups"));
    }
    let segments = build_kakeya(field, 1.0)?;
    let mut group_measures = Vec::with_capacity(quant.groups.len());
    for g in &quant.groups {
        let moved: Vec<Segment> = g
            .members
            .iter()
            .map(|&idx| segments[idx].translate(&g.centre))
            .collect();
        group_measures.push(pixel_measure(&rasterize_segments(&moved, mesh)));
    }
    let ball = rasterize_ball(&Point::zero(field.dim()), 0.5, BallKind::Closed, mesh)?;
    let bound = pixel_measure(&ball) / quant.groups.len() as f64;
    let (group_index, group_measure) = group_measures
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    Ok(MeasureWitness {
        group_index,
        group_measure,
        bound,
        holds: group_measure >= bound,
        group_measures,
    })
}

/// Greedy maximal `1/n`-separated subset of the full sphere `S^{d-1}` in the
/// chord metric: farthest-point insertion over a fine deterministic
/// candidate net until no net point is at distance `>= 1/n` from every
/// chosen point. Maximality therefore holds against the net by construction.
pub fn direction_sample(d: usize, n: u32) -> Result<Vec<UnitVec>> {
    if n == 0 {
        return Err(invalid("separation parameter n must be at least 1"));
    }
    if !(2..=MAX_DIM).contains(&d) {
        return Err(invalid("direction sampling supports 2 <= d <= 4"));
    }
    let net = candidate_net(d, n);
    let separation = 1.0 / n as f64;

    let mut chosen: Vec<UnitVec> = Vec::new();
    // Distance from each net point to the chosen set so far.
    let mut min_dist: Vec<f64> = alloc::vec![f64::INFINITY; net.len()];
    chosen.push(net[0]);
    for (i, p) in net.iter().enumerate() {
        min_dist[i] = p.chord_dist(&net[0]);
    }
    loop {
        let (far_idx, far_dist) = min_dist
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("net is nonempty");
        if far_dist < separation {
            break;
        }
        let new_point = net[far_idx];
        chosen.push(new_point);
        for (i, p) in net.iter().enumerate() {
            let dd = p.chord_dist(&new_point);
            if dd < min_dist[i] {
                min_dist[i] = dd;
            }
        }
    }
    Ok(chosen)
}

/// Deterministic fine net on `S^{d-1}` used as candidate pool and as the
/// maximality certificate.
fn candidate_net(d: usize, n: u32) -> Vec<UnitVec> {
    match d {
        2 => {
            let count = (4096usize).max(256 * n as usize).min(1 << 17);
            (0..count)
                .map(|k| {
                    let a = 2.0 * core::f64::consts::PI * k as f64 / count as f64;
                    UnitVec::from_vector(&Point::new(&[math::cos(a), math::sin(a)]))
                        .expect("unit by construction")
                })
                .collect()
        }
        3 => {
            // Fibonacci sphere.
            let count = (8192usize).max(2048 * (n as usize).pow(2)).min(1 << 18);
            let golden = core::f64::consts::PI * (3.0 - math::sqrt(5.0));
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = math::sqrt((1.0 - z * z).max(0.0));
                    let a = golden * k as f64;
                    UnitVec::from_vector(&Point::new(&[r * math::cos(a), r * math::sin(a), z]))
                        .expect("unit by construction")
                })
                .collect()
        }
        _ => {
            // Seeded Gaussian net; deterministic for a fixed (d, n).
            let count = (32768usize).max(4096 * (n as usize).pow(2)).min(1 << 18);
            let mut rng = SplitMix64::split(0x5EED_5EED, ((d as u64) << 32) | n as u64);
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let v = Point::new(&[
                    rng.gaussian(),
                    rng.gaussian(),
                    rng.gaussian(),
                    rng.gaussian(),
                ]);
                if let Ok(u) = UnitVec::from_vector(&v) {
                    out.push(u);
                }
            }
            out
        }
    }
}

/// A finite map from sphere directions to ray base points (`t_theta`), with
/// the truncation radius used when rasterizing the unbounded set.
#[derive(Debug, Clone)]
pub struct BaseField {
    entries: Vec<(UnitVec, Point)>,
    truncation: f64,
}

impl BaseField {
    pub fn new(entries: Vec<(UnitVec, Point)>, truncation: f64) -> Result<BaseField> {
        if entries.is_empty() {
            return Err(invalid("base field must have at least one entry"));
        }
        if !(truncation > 0.0) {
            return Err(invalid("truncation radius must be positive"));
        }
        Ok(BaseField {
            entries,
            truncation,
        })
    }

    /// All bases at the origin.
    pub fn zero(directions: &[UnitVec], truncation: f64) -> Result<BaseField> {
        let dim = directions
            .first()
            .map(|u| u.dim())
            .ok_or_else(|| invalid("base field must have at least one entry"))?;
        BaseField::new(
            directions.iter().map(|u| (*u, Point::zero(dim))).collect(),
            truncation,
        )
    }

    /// Bases uniform in `[-base_bound, base_bound]^d`.
    pub fn random(
        directions: &[UnitVec],
        base_bound: f64,
        truncation: f64,
        rng: &mut SplitMix64,
    ) -> Result<BaseField> {
        let entries = directions
            .iter()
            .map(|u| {
                let mut c = [0.0; MAX_DIM];
                for v in c.iter_mut().take(u.dim()) {
                    *v = rng.uniform(-base_bound, base_bound);
                }
                (*u, Point::new(&c[..u.dim()]))
            })
            .collect();
        BaseField::new(entries, truncation)
    }

    #[inline]
    pub fn entries(&self) -> &[(UnitVec, Point)] {
        &self.entries
    }

    #[inline]
    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// Largest `|t_theta|` over the entries.
    pub fn base_bound(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, t)| t.norm())
            .fold(0.0, f64::max)
    }
}

/// One ray per direction: `{ lambda theta + t_theta : lambda >= 0 }`.
pub fn build_half_extended(base: &BaseField) -> Vec<Ray> {
    base.entries
        .iter()
        .map(|(dir, t)| Ray {
            base: *t,
            direction: *dir,
        })
        .collect()
}

/// Convenience: the mesh count of the encoded set at a given scale.
pub fn field_mesh_count(field: &CenterField, mesh: &MeshSpec) -> Result<usize> {
    let segments = build_kakeya(field, 1.0)?;
    Ok(mesh_count(&rasterize_segments(&segments, mesh)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan64_has_64_distinct_directions_with_centres_in_the_square() {
        let f = fan64();
        assert_eq!(f.len(), 64);
        assert_eq!(f.bound(), 2.0);
        for (dir, c) in f.entries() {
            assert!(c.inf_norm() <= 1.5, "centre outside the core box");
            assert!((dir.as_point().norm() - 1.0).abs() <= 1e-12);
        }
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                assert_ne!(f.entries()[i].0, f.entries()[j].0);
            }
        }
    }

    #[test]
    fn build_kakeya_places_one_segment_per_entry() {
        let dir = Direction::canonicalize(&Point::new(&[1.0, 0.0])).unwrap();
        let f = CenterField::new(alloc::vec![(dir, Point::new(&[5.0, 5.0]))], 6.0).unwrap();
        let segs = build_kakeya(&f, 1.0).unwrap();
        assert_eq!(segs.len(), 1);
        let (a, b) = segs[0].endpoints();
        assert_eq!(a, Point::new(&[4.5, 5.0]));
        assert_eq!(b, Point::new(&[5.5, 5.0]));
    }

    #[test]
    fn field_distance_is_zero_on_self_and_norm_on_translation() {
        let f = fan64();
        assert_eq!(field_distance(&f, &f).unwrap(), 0.0);

        let v = Point::new(&[0.25, -0.125]);
        let shifted = CenterField::new(
            f.entries().iter().map(|(d, c)| (*d, c.add(&v))).collect(),
            4.0,
        )
        .unwrap();
        let dist = field_distance(&f, &shifted).unwrap();
        assert!((dist - v.norm()).abs() <= 1e-12);
    }

    #[test]
    fn field_distance_rejects_mismatched_samples() {
        let f = fan64();
        let g = fan_field(32);
        assert!(field_distance(&f, &g).is_err());
    }

    #[test]
    fn quantize_constant_field_snaps_to_cube_centre() {
        let dirs = projective_fan(8).unwrap();
        let f0 = CenterField::constant(&dirs, Point::new(&[0.3, 0.3]), 1.0).unwrap();
        let (f, q) = quantize_field(&f0, 1.0).unwrap();
        assert_eq!(q.subdivisions, 2);
        assert!((q.side - 0.5).abs() <= 1e-15);
        assert_eq!(q.groups.len(), 1);
        let snapped = f.entries()[0].1;
        assert_eq!(snapped, Point::new(&[0.25, 0.25]));
        let dist = field_distance(&f, &f0).unwrap();
        assert!((dist - core::f64::consts::SQRT_2 * 0.05).abs() <= 1e-12);
        assert!(dist < 1.0);
    }

    #[test]
    fn quantize_fixes_cube_centres() {
        // A field whose centres already sit at cube centres is unchanged.
        let dirs = projective_fan(4).unwrap();
        let f0 = CenterField::constant(&dirs, Point::new(&[0.25, 0.25]), 1.0).unwrap();
        let (f, _) = quantize_field(&f0, 1.0).unwrap();
        assert_eq!(f.entries(), f0.entries());
    }

    #[test]
    fn quantize_respects_epsilon_on_random_fields() {
        let dirs = projective_fan(32).unwrap();
        let mut rng = SplitMix64::new(2024);
        for trial in 0..100 {
            let f0 = CenterField::random(&dirs, 1.4, 2.0, &mut rng).unwrap();
            let (f, _) = quantize_field(&f0, 0.1).unwrap();
            let d = field_distance(&f, &f0).unwrap();
            assert!(d < 0.1, "trial {trial}: distance {d} >= 0.1");
        }
    }

    #[test]
    fn direction_sample_on_circle_is_separated_and_maximal() {
        let sample = direction_sample(2, 1).unwrap();
        assert!(
            (4..=8).contains(&sample.len()),
            "got {} points",
            sample.len()
        );
        for i in 0..sample.len() {
            for j in i + 1..sample.len() {
                assert!(sample[i].chord_dist(&sample[j]) >= 1.0);
            }
        }
        // Maximality against an independent fine net.
        for k in 0..10_000 {
            let a = 2.0 * core::f64::consts::PI * k as f64 / 10_000.0;
            let p = UnitVec::from_vector(&Point::new(&[math::cos(a), math::sin(a)])).unwrap();
            let covered = sample.iter().any(|s| s.chord_dist(&p) < 1.0);
            assert!(covered, "net point {k} not within 1 of the sample");
        }
    }

    #[test]
    fn half_extended_rays_carry_their_bases() {
        let dirs = direction_sample(2, 2).unwrap();
        let base = BaseField::zero(&dirs, 8.0).unwrap();
        let rays = build_half_extended(&base);
        assert_eq!(rays.len(), dirs.len());
        assert!(rays.iter().all(|r| r.base == Point::zero(2)));
    }
}
