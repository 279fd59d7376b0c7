//! Property suites for the counting module: the Hausdorff distance is a
//! metric and the bucketed path agrees with brute force; greedy packings are
//! maximal and stable under perturbations below half the minimum gap.

use kakeya_core::counting::{disjoint_packing_count, hausdorff_distance, packing_stability};
use kakeya_core::geometry::Point;
use kakeya_core::rng::SplitMix64;
use proptest::prelude::*;

fn brute_directed(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .map(|p| {
            b.iter()
                .map(|q| p.dist(q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn brute_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    brute_directed(a, b).max(brute_directed(b, a))
}

fn cloud(rng: &mut SplitMix64, count: usize, spread: f64) -> Vec<Point> {
    (0..count)
        .map(|_| Point::new(&[rng.uniform(-spread, spread), rng.uniform(-spread, spread)]))
        .collect()
}

#[test]
fn hausdorff_matches_brute_oracle_on_500_point_clouds() {
    let mut rng = SplitMix64::new(8080);
    for _ in 0..5 {
        let a = cloud(&mut rng, 500, 1.0);
        let b = cloud(&mut rng, 500, 1.2);
        let got = hausdorff_distance(&a, &b).unwrap();
        let want = brute_hausdorff(&a, &b);
        assert!((got - want).abs() <= 1e-12);
    }
}

#[test]
fn bucketed_path_matches_brute_oracle_above_the_size_threshold() {
    // 12k points per side forces the grid-bucketed nearest-neighbour path.
    let mut rng = SplitMix64::new(4242);
    let a = cloud(&mut rng, 12_000, 1.0);
    let b = cloud(&mut rng, 12_000, 1.0);
    let got = hausdorff_distance(&a, &b).unwrap();
    let want = brute_hausdorff(&a, &b);
    assert!(
        (got - want).abs() <= 1e-12,
        "bucketed {got} vs brute {want}"
    );
}

#[test]
fn bucketed_path_handles_disjoint_distant_clouds() {
    let mut rng = SplitMix64::new(17);
    let a = cloud(&mut rng, 11_000, 0.5);
    let b: Vec<Point> = cloud(&mut rng, 11_000, 0.5)
        .into_iter()
        .map(|p| Point::new(&[p.coord(0) + 40.0, p.coord(1)]))
        .collect();
    let got = hausdorff_distance(&a, &b).unwrap();
    let want = brute_hausdorff(&a, &b);
    assert!((got - want).abs() <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_is_symmetric_and_zero_on_self(seed in 0u64..1000) {
        let mut rng = SplitMix64::new(seed);
        let a = cloud(&mut rng, 30, 1.0);
        let b = cloud(&mut rng, 25, 1.0);
        let ab = hausdorff_distance(&a, &b).unwrap();
        let ba = hausdorff_distance(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        prop_assert!(ab >= 0.0);
    }

    #[test]
    fn hausdorff_satisfies_the_triangle_inequality(seed in 0u64..1000) {
        let mut rng = SplitMix64::new(seed ^ 0xABCD);
        let a = cloud(&mut rng, 20, 1.0);
        let b = cloud(&mut rng, 20, 1.0);
        let c = cloud(&mut rng, 20, 1.0);
        let ab = hausdorff_distance(&a, &b).unwrap();
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn greedy_packing_is_maximal_and_replayable(seed in 0u64..500) {
        let mut rng = SplitMix64::new(seed ^ 0x9999);
        let pts = cloud(&mut rng, 50, 0.5);
        let eps = 0.05;
        let p1 = disjoint_packing_count(&pts, eps).unwrap();
        // Replay oracle: an independent greedy pass in the same scan order.
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&i, &j| pts[i].lex_cmp(&pts[j]));
        let mut accepted: Vec<Point> = Vec::new();
        for &i in &order {
            if accepted.iter().all(|c| c.dist(&pts[i]) > 2.0 * eps) {
                accepted.push(pts[i]);
            }
        }
        prop_assert_eq!(p1.count(), accepted.len());
        // Maximality: every point is blocked by an accepted centre.
        for q in &pts {
            prop_assert!(p1.centres.iter().any(|c| c.dist(q) <= 2.0 * eps));
        }
    }
}

#[test]
fn perturbations_below_half_gap_never_break_the_packing() {
    // Euclidean perturbations strictly below min_gap/2 keep the moved
    // centres disjoint: 100 seeded trials, all guaranteed and all holding.
    let mut rng = SplitMix64::new(0xDAD);
    let mut guaranteed_trials = 0;
    for _ in 0..100 {
        let pts = cloud(&mut rng, 40, 0.5);
        let packing = disjoint_packing_count(&pts, 0.04).unwrap();
        if !packing.min_gap.is_finite() || packing.min_gap <= 0.0 {
            continue;
        }
        let radius = packing.min_gap / 2.0 * 0.999;
        let perturbed: Vec<Point> = pts
            .iter()
            .map(|p| {
                let angle = rng.uniform(0.0, core::f64::consts::TAU);
                let r = radius * rng.next_f64();
                Point::new(&[
                    p.coord(0) + r * libm::cos(angle),
                    p.coord(1) + r * libm::sin(angle),
                ])
            })
            .collect();
        let report = packing_stability(&packing, &pts, &perturbed).unwrap();
        assert!(report.guaranteed, "hausdorff {} vs gap {}", report.hausdorff, packing.min_gap);
        assert!(report.holds);
        guaranteed_trials += 1;
    }
    assert!(guaranteed_trials >= 90, "only {guaranteed_trials} usable trials");
}

#[test]
fn oversized_perturbations_are_flagged_not_asserted() {
    let mut rng = SplitMix64::new(0xBEE);
    let pts = cloud(&mut rng, 40, 0.5);
    let packing = disjoint_packing_count(&pts, 0.04).unwrap();
    let shift = packing.min_gap * 10.0 + 1.0;
    let perturbed: Vec<Point> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            // Scatter far beyond the guarantee threshold.
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            Point::new(&[p.coord(0) + sign * shift, p.coord(1)])
        })
        .collect();
    let report = packing_stability(&packing, &pts, &perturbed).unwrap();
    assert!(!report.guaranteed);
}
