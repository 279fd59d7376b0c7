//! Zoom-out similarity scaling of half-extended sets: rescale by `x -> x/k`,
//! clip to the closed unit ball, rasterize, and measure Hausdorff
//! convergence to the ball; plus the localized covering-count check that a
//! tangent's counts are controlled by the source set's counts.

use crate::counting::{
    hausdorff_distance, rasterize_ball, rasterize_chords, BallKind, MeshSpec, OccupancySet,
};
use crate::geometry::{Point, Ray, SimilarityMap, MAX_DIM};
use crate::math;
use crate::{invalid, Result};
use alloc::vec::Vec;

/// Applies `S_k(x) = x/k` to every ray, clips to the closed unit ball, and
/// rasterizes the surviving chords.
pub fn zoom_out(rays: &[Ray], k: u32, mesh: &MeshSpec) -> Result<OccupancySet> {
    if k == 0 {
        return Err(invalid("zoom factor k must be positive"));
    }
    let map = SimilarityMap::zoom_out(mesh.dim(), k)?;
    let origin = Point::zero(mesh.dim());
    let mut chords = Vec::with_capacity(rays.len());
    for ray in rays {
        let scaled = map.apply_ray(ray);
        if let Some(chord) = scaled.clip_to_ball(&origin, 1.0) {
            chords.push(chord);
        }
    }
    Ok(rasterize_chords(&chords, mesh))
}

/// One scale of the zoom-out convergence table.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub k: u32,
    /// Hausdorff distance between the zoomed raster's cell centres and the
    /// closed unit ball raster's cell centres.
    pub distance: f64,
    /// `2 (gap + base_bound / k) + 2 sqrt(d) delta`.
    pub bound: f64,
    pub within_bound: bool,
    pub cells: usize,
}

/// Measures, for each `k`, the Hausdorff distance between `zoom_out(K, k)`
/// and the rasterized closed unit ball, against the bound
/// `2 (gap + T/k) + 2 sqrt(d) delta` where `gap` is the covering radius of
/// the direction sample and `T` bounds the ray bases.
pub fn convergence_profile(
    rays: &[Ray],
    ks: &[u32],
    mesh: &MeshSpec,
    sample_gap: f64,
    base_bound: f64,
) -> Result<Vec<ConvergenceRow>> {
    if rays.is_empty() {
        return Err(invalid("convergence profile needs at least one ray"));
    }
    let d = mesh.dim();
    let ball = rasterize_ball(&Point::zero(d), 1.0, BallKind::Closed, mesh)?;
    let ball_cloud = ball.cell_centres();
    let grid_slack = 2.0 * math::sqrt(d as f64) * mesh.delta();

    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let occ = zoom_out(rays, k, mesh)?;
        if occ.is_empty() {
            return Err(invalid("zoomed set rasterized to nothing"));
        }
        let cloud = occ.cell_centres();
        let distance = hausdorff_distance(&cloud, &ball_cloud)?;
        let bound = 2.0 * (sample_gap + base_bound / k as f64) + grid_slack;
        rows.push(ConvergenceRow {
            k,
            distance,
            bound,
            within_bound: distance <= bound,
            cells: occ.len(),
        });
    }
    Ok(rows)
}

/// A `(delta, eps)` pair of localization scales, `eps < delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalePair {
    pub delta: f64,
    pub eps: f64,
}

impl ScalePair {
    pub fn new(delta: f64, eps: f64) -> Result<ScalePair> {
        if !(eps > 0.0 && delta > eps) {
            return Err(invalid("scale pair needs 0 < eps < delta"));
        }
        Ok(ScalePair { delta, eps })
    }

    #[inline]
    pub fn ratio(&self) -> f64 {
        self.delta / self.eps
    }
}

/// One check row of the covering test.
#[derive(Debug, Clone)]
pub struct CoveringRow {
    pub sample_index: usize,
    pub delta: f64,
    pub eps: f64,
    /// Mesh-based local covering count `N(B(x, delta) ∩ A_hat, eps)`.
    pub count: u64,
    /// `C * 4^s * (delta/eps)^s`.
    pub bound: f64,
    pub pass: bool,
}

/// Report of the covering check: the calibrated constant and per-sample,
/// per-pair outcomes.
#[derive(Debug, Clone)]
pub struct CoveringReport {
    pub exponent: f64,
    /// Constant calibrated from the source set's local counts at the
    /// pre-image scales of the calibration pairs.
    pub c_constant: f64,
    pub rows: Vec<CoveringRow>,
    pub all_pass: bool,
}

/// Checks `N(B(x_hat, delta) ∩ A_hat, eps) <= C 4^s (delta/eps)^s` for
/// sampled points and scale pairs, with `C` calibrated from the source
/// occupancy `a` at the pre-image scales (`delta/rate`, `eps/rate` under the
/// similarity's rate). Counts are mesh-based: occupied-cell centres within
/// the `delta`-ball, bucketed at resolution `eps`. The calibration makes
/// this a consistency test of the exponent `s`, not an independent proof.
pub fn weak_tangent_covering_check(
    a: &OccupancySet,
    a_hat: &OccupancySet,
    map: &SimilarityMap,
    exponent: f64,
    samples: &[Point],
    calibration: &[ScalePair],
    checks: &[ScalePair],
) -> Result<CoveringReport> {
    if samples.is_empty() {
        return Err(invalid("covering check needs at least one sample point"));
    }
    if calibration.is_empty() || checks.is_empty() {
        return Err(invalid("covering check needs calibration and check pairs"));
    }
    let inverse = map.inverse();
    let rate = map.rate();

    // Calibrate C = max over samples and calibration pairs of
    // N_A(pre-image) / (delta/eps)^s; the ratio delta/eps is rate-invariant.
    let mut c_constant = 0.0f64;
    for x_hat in samples {
        let x = inverse.apply(x_hat);
        for pair in calibration {
            let count = local_cover_count(a, &x, pair.delta / rate, pair.eps / rate);
            if count == 0 {
                continue;
            }
            let ratio_pow = math::powf(pair.ratio(), exponent);
            c_constant = c_constant.max(count as f64 / ratio_pow);
        }
    }
    if c_constant == 0.0 {
        return Err(invalid(
            "calibration found no source cells near any pre-image sample",
        ));
    }

    let four_pow = math::powf(4.0, exponent);
    let mut rows = Vec::with_capacity(samples.len() * checks.len());
    for (sample_index, x_hat) in samples.iter().enumerate() {
        for pair in checks {
            let count = local_cover_count(a_hat, x_hat, pair.delta, pair.eps);
            let bound = c_constant * four_pow * math::powf(pair.ratio(), exponent);
            rows.push(CoveringRow {
                sample_index,
                delta: pair.delta,
                eps: pair.eps,
                count,
                bound,
                pass: count as f64 <= bound,
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(CoveringReport {
        exponent,
        c_constant,
        rows,
        all_pass,
    })
}

/// Number of `eps`-mesh cells (anchored at the occupancy's origin) needed to
/// cover the occupied-cell centres within Euclidean `delta` of `x`.
pub fn local_cover_count(occ: &OccupancySet, x: &Point, delta: f64, eps: f64) -> u64 {
    let d = occ.mesh().dim();
    let delta_sq = delta * delta;
    let origin = occ.mesh().origin();
    let mut keys: Vec<[i32; MAX_DIM]> = Vec::new();
    for cell in occ.cells() {
        let centre = occ.mesh().cell_centre(cell);
        if centre.dist_sq(x) > delta_sq {
            continue;
        }
        let mut key = [0i32; MAX_DIM];
        for i in 0..d {
            key[i] = math::floor((centre.coord(i) - origin.coord(i)) / eps) as i32;
        }
        keys.push(key);
    }
    keys.sort_unstable();
    keys.dedup();
    keys.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::UnitVec;
    use crate::kakeya::{build_half_extended, direction_sample, BaseField};

    fn mesh2(delta: f64) -> MeshSpec {
        MeshSpec::anchored_at_zero(2, delta).unwrap()
    }

    #[test]
    fn cone_occupancy_is_invariant_under_zoom() {
        let dirs = direction_sample(2, 8).unwrap();
        let base = BaseField::zero(&dirs, 16.0).unwrap();
        let rays = build_half_extended(&base);
        let mesh = mesh2(1.0 / 32.0);
        let occ1 = zoom_out(&rays, 1, &mesh).unwrap();
        let occ10 = zoom_out(&rays, 10, &mesh).unwrap();
        let occ100 = zoom_out(&rays, 100, &mesh).unwrap();
        assert_eq!(occ1, occ10);
        assert_eq!(occ10, occ100);
    }

    #[test]
    fn boundary_ray_collapses_to_single_cell() {
        let u = UnitVec::from_vector(&Point::new(&[1.0, 0.0])).unwrap();
        let k = 8u32;
        let ray = Ray::new(Point::new(&[k as f64, 0.0]), u).unwrap();
        let occ = zoom_out(&[ray], k, &mesh2(0.25)).unwrap();
        // Base maps to (1, 0); the clipped image is that single point.
        assert_eq!(occ.len(), 1);
        assert_eq!(occ.cells()[0], [4, 0, 0, 0]);
    }

    #[test]
    fn zoom_commutes_with_ray_union() {
        let dirs = direction_sample(2, 4).unwrap();
        let mut rng = crate::rng::SplitMix64::new(5);
        let base = BaseField::random(&dirs, 3.0, 16.0, &mut rng).unwrap();
        let rays = build_half_extended(&base);
        let mesh = mesh2(1.0 / 16.0);
        let whole = zoom_out(&rays, 4, &mesh).unwrap();
        let mut merged = OccupancySet::empty(mesh);
        for ray in &rays {
            merged = merged.union(&zoom_out(&[*ray], 4, &mesh).unwrap()).unwrap();
        }
        assert_eq!(whole, merged);
    }

    #[test]
    fn covering_check_passes_on_the_ball_against_itself() {
        let mesh = mesh2(1.0 / 128.0);
        let ball = rasterize_ball(&Point::zero(2), 1.0, BallKind::Closed, &mesh).unwrap();
        let id = SimilarityMap::new(1.0, Point::zero(2)).unwrap();
        let samples = [Point::zero(2), Point::new(&[0.5, 0.0])];
        let calibration = [ScalePair::new(0.5, 0.25).unwrap()];
        let checks = [
            ScalePair::new(0.5, 0.25).unwrap(),
            ScalePair::new(0.5, 0.0625).unwrap(),
        ];
        let report = weak_tangent_covering_check(
            &ball,
            &ball,
            &id,
            2.0,
            &samples,
            &calibration,
            &checks,
        )
        .unwrap();
        assert!(report.all_pass);
    }
}
