//! Zoom-out experiments: occupancy against a two-path oracle (independent
//! clipping algebra in the unscaled space), Hausdorff convergence to the
//! unit ball within the stated bounds, and the localized covering check
//! with its negative control.

use kakeya_core::counting::{rasterize_ball, rasterize_segments, BallKind, MeshSpec};
use kakeya_core::geometry::{Direction, Point, Segment, SimilarityMap};
use kakeya_core::kakeya::{build_half_extended, direction_sample, BaseField};
use kakeya_core::rng::SplitMix64;
use kakeya_core::tangent::{
    convergence_profile, local_cover_count, weak_tangent_covering_check, zoom_out, ScalePair,
};

fn mesh2(delta: f64) -> MeshSpec {
    MeshSpec::anchored_at_zero(2, delta).unwrap()
}

/// Independent path: clip each ray against the ball of radius `k` in the
/// unscaled space (different algebra: solves the quadratic there), scale
/// the endpoints, and rasterize the chords as degenerate segments.
#[test]
fn zoom_occupancy_matches_two_path_oracle() {
    let dirs = direction_sample(2, 8).unwrap();
    let mut rng = SplitMix64::new(606);
    let base = BaseField::random(&dirs, 5.0, 16.0, &mut rng).unwrap();
    let rays = build_half_extended(&base);
    let mesh = mesh2(1.0 / 32.0);
    let k = 7u32;

    let got = zoom_out(&rays, k, &mesh).unwrap();

    // Oracle: pre-image clipping. S_k(ray) meets B(0,1) iff ray meets
    // B(0,k); map the chord endpoints through S_k afterwards.
    let mut chord_segments: Vec<Segment> = Vec::new();
    let mut extra_points: Vec<Point> = Vec::new();
    for ray in &rays {
        if let Some((a, b)) = ray.clip_to_ball(&Point::zero(2), k as f64) {
            let sa = a.scale_div(k as f64);
            let sb = b.scale_div(k as f64);
            if sa.dist(&sb) > 0.0 {
                let dir = Direction::canonicalize(&sb.sub(&sa)).unwrap();
                chord_segments.push(Segment::new(
                    sa.add(&sb).scale(0.5),
                    dir,
                    sa.dist(&sb),
                ).unwrap());
            } else {
                extra_points.push(sa);
            }
        }
    }
    let mut oracle = rasterize_segments(&chord_segments, &mesh);
    if !extra_points.is_empty() {
        oracle = oracle
            .union(&kakeya_core::counting::rasterize_points(&extra_points, &mesh))
            .unwrap();
    }

    // The two clipping routes may disagree by an endpoint ulp exactly on
    // the sphere; compare cell sets and allow no interior difference.
    let (missing, extra) = got.difference_counts(&oracle);
    assert_eq!((missing, extra), (0, 0));
}

#[test]
fn convergence_rows_meet_their_bounds_and_tighten() {
    let n = 16u32;
    let dirs = direction_sample(2, n).unwrap();
    let gap = 1.0 / n as f64;
    let base_bound = 10.0;
    let mut rng = SplitMix64::new(0xBA11);
    let base = BaseField::random(&dirs, base_bound, 64.0, &mut rng).unwrap();
    let rays = build_half_extended(&base);
    let mesh = mesh2(1.0 / 64.0);
    let rows = convergence_profile(&rays, &[10, 100, 1000], &mesh, gap, base_bound).unwrap();

    for row in &rows {
        assert!(row.within_bound, "k={} distance {} bound {}", row.k, row.distance, row.bound);
    }
    // Nonincreasing up to one grid cell.
    let cell_slack = 2.0f64.sqrt() * mesh.delta();
    for w in rows.windows(2) {
        assert!(w[1].distance <= w[0].distance + cell_slack);
    }
    // Final scale: distance at most gap + 3 sqrt(d) delta.
    let last = rows.last().unwrap();
    assert!(last.distance <= gap + 3.0 * 2.0f64.sqrt() * mesh.delta());
}

#[test]
fn zero_bases_give_exact_invariance_in_the_profile() {
    let dirs = direction_sample(2, 8).unwrap();
    let base = BaseField::zero(&dirs, 32.0).unwrap();
    let rays = build_half_extended(&base);
    let mesh = mesh2(1.0 / 32.0);
    let occs: Vec<_> = [1u32, 10, 100, 1000]
        .iter()
        .map(|&k| zoom_out(&rays, k, &mesh).unwrap())
        .collect();
    for pair in occs.windows(2) {
        assert_eq!(pair[0], pair[1]);
    }
}

#[test]
fn covering_check_passes_at_full_exponent_and_fails_below() {
    // Source: a zoomed half-extended set rasterized finely (it approximates
    // the ball in Hausdorff distance while staying a union of chords).
    // Tangent: the closed unit ball raster. Identity similarity.
    let n = 16u32;
    let dirs = direction_sample(2, n).unwrap();
    let mut rng = SplitMix64::new(0xC0FFEE);
    let base = BaseField::random(&dirs, 10.0, 64.0, &mut rng).unwrap();
    let rays = build_half_extended(&base);
    let mesh = mesh2(0.5f64.powi(10));
    let zoomed = zoom_out(&rays, 1000, &mesh).unwrap();
    let ball = rasterize_ball(&Point::zero(2), 1.0, BallKind::Closed, &mesh).unwrap();
    let id = SimilarityMap::new(1.0, Point::zero(2)).unwrap();

    let samples = [Point::zero(2), Point::new(&[0.25, 0.125])];
    // Calibrate at a coarse pair (ratio 2): the chord family looks
    // 2-dimensional there because the direction gaps are below eps.
    let calibration = [ScalePair::new(1.0, 0.5).unwrap()];
    let checks = [
        ScalePair::new(1.0, 0.25).unwrap(),
        ScalePair::new(1.0, 1.0 / 64.0).unwrap(),
        ScalePair::new(1.0, 1.0 / 256.0).unwrap(),
    ];

    let full = weak_tangent_covering_check(
        &zoomed, &ball, &id, 2.0, &samples, &calibration, &checks,
    )
    .unwrap();
    assert!(full.all_pass, "full-exponent check failed: {:?}", full.rows);

    let reduced = weak_tangent_covering_check(
        &zoomed, &ball, &id, 1.5, &samples, &calibration, &checks,
    )
    .unwrap();
    assert!(!reduced.all_pass, "reduced exponent must fail at fine pairs");
    // The failures concentrate at the finest ratios.
    let finest_fail = reduced
        .rows
        .iter()
        .filter(|r| !r.pass)
        .all(|r| r.delta / r.eps >= 64.0);
    assert!(finest_fail);
}

#[test]
fn local_cover_count_of_the_ball_scales_with_the_ratio() {
    let mesh = mesh2(1.0 / 256.0);
    let ball = rasterize_ball(&Point::zero(2), 1.0, BallKind::Closed, &mesh).unwrap();
    let origin = Point::zero(2);
    let coarse = local_cover_count(&ball, &origin, 0.5, 0.25);
    let fine = local_cover_count(&ball, &origin, 0.5, 0.0625);
    assert!(coarse >= 4 && coarse <= 16, "coarse = {coarse}");
    // Quadrupling the ratio multiplies the count by about 16.
    let growth = fine as f64 / coarse as f64;
    assert!(growth > 8.0 && growth < 32.0, "growth = {growth}");
}
