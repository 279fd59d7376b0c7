//! Double-precision geometric primitives: points in dimension 2..=4,
//! projective directions, unit segments, rays, and similarity maps.
//!
//! Values are immutable after construction and every operation is a pure
//! function, so everything here is safe to use concurrently.

use crate::math;
use crate::{invalid, Result};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Largest supported ambient dimension. Counting cost grows like `delta^-d`,
/// so desk-scale runs stop at 4.
pub const MAX_DIM: usize = 4;

/// Default absolute tolerance for geometric comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for the unit-norm invariant of directions.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// A point (or vector) in `R^d`, `1 <= d <= 4`. Unused coordinates are kept
/// at zero so derived equality and ordering behave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; MAX_DIM],
    dim: u8,
}

impl Point {
    /// Builds a point from its coordinates. Panics if `coords` is empty or
    /// longer than [`MAX_DIM`]; dimension errors are programming errors, not
    /// data errors.
    pub fn new(coords: &[f64]) -> Point {
        assert!(
            !coords.is_empty() && coords.len() <= MAX_DIM,
            "point dimension must be 1..={MAX_DIM}, got {}",
            coords.len()
        );
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Point {
            coords: c,
            dim: coords.len() as u8,
        }
    }

    pub fn zero(dim: usize) -> Point {
        assert!((1..=MAX_DIM).contains(&dim));
        Point {
            coords: [0.0; MAX_DIM],
            dim: dim as u8,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        debug_assert!(i < self.dim());
        self.coords[i]
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim()]
    }

    pub fn add(&self, other: &Point) -> Point {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Point {
        let mut c = self.coords;
        for v in c.iter_mut().take(self.dim()) {
            *v *= s;
        }
        Point {
            coords: c,
            dim: self.dim,
        }
    }

    /// Component-wise division; more accurate than `scale(1.0 / s)`.
    pub fn scale_div(&self, s: f64) -> Point {
        let mut c = self.coords;
        for v in c.iter_mut().take(self.dim()) {
            *v /= s;
        }
        Point {
            coords: c,
            dim: self.dim,
        }
    }

    pub fn neg(&self) -> Point {
        // Exact sign flip; used by the antipodal identification.
        let mut c = self.coords;
        for v in c.iter_mut().take(self.dim()) {
            *v = -*v;
        }
        Point {
            coords: c,
            dim: self.dim,
        }
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim() {
            acc += self.coords[i] * other.coords[i];
        }
        acc
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.sub(other).norm_sq()
    }

    /// Supremum norm `max_i |x_i|`.
    pub fn inf_norm(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.dim() {
            let a = self.coords[i].abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// The translation convention used throughout: `T_a x = x - a`.
    pub fn translate(&self, a: &Point) -> Point {
        self.sub(a)
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }

    /// Total lexicographic order on coordinates (finite values only).
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        debug_assert_eq!(self.dim, other.dim);
        for i in 0..self.dim() {
            match self.coords[i].total_cmp(&other.coords[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    fn zip(&self, other: &Point, f: impl Fn(f64, f64) -> f64) -> Point {
        debug_assert_eq!(self.dim, other.dim);
        let mut c = [0.0; MAX_DIM];
        for i in 0..self.dim() {
            c[i] = f(self.coords[i], other.coords[i]);
        }
        Point {
            coords: c,
            dim: self.dim,
        }
    }
}

/// A genuine unit vector on the sphere `S^{d-1}` (orientation kept).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec {
    p: Point,
}

impl UnitVec {
    /// Normalizes `v`. Errors on the zero vector.
    pub fn from_vector(v: &Point) -> Result<UnitVec> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(UnitVec { p: v.scale_div(n) })
    }

    /// Wraps a vector that is already unit-norm to within [`UNIT_NORM_TOL`].
    pub fn from_unit(v: &Point) -> Result<UnitVec> {
        if (v.norm() - 1.0).abs() > UNIT_NORM_TOL {
            return Err(invalid("vector is not unit norm"));
        }
        Ok(UnitVec { p: *v })
    }

    #[inline]
    pub fn as_point(&self) -> &Point {
        &self.p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn neg(&self) -> UnitVec {
        UnitVec { p: self.p.neg() }
    }

    /// Chord (Euclidean) distance on the sphere.
    pub fn chord_dist(&self, other: &UnitVec) -> f64 {
        self.p.dist(&other.p)
    }
}

/// A point of the projective sphere: a unit vector whose first nonzero
/// coordinate is strictly positive, so `v` and `-v` share one representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    u: UnitVec,
}

impl Direction {
    /// Normalizes `v` and applies the antipodal identification. The sign flip
    /// is exact, so `v` and `-v` canonicalize to identical bits.
    pub fn canonicalize(v: &Point) -> Result<Direction> {
        let u = UnitVec::from_vector(v)?;
        Ok(Direction::from_unit_vec(&u))
    }

    /// Canonicalizes an already-unit vector (no renormalization).
    pub fn from_unit_vec(u: &UnitVec) -> Direction {
        let p = u.as_point();
        for i in 0..p.dim() {
            let c = p.coord(i);
            if c != 0.0 {
                return if c < 0.0 {
                    Direction { u: u.neg() }
                } else {
                    Direction { u: *u }
                };
            }
        }
        // Unreachable for genuine unit vectors.
        Direction { u: *u }
    }

    #[inline]
    pub fn as_point(&self) -> &Point {
        self.u.as_point()
    }

    #[inline]
    pub fn as_unit_vec(&self) -> &UnitVec {
        &self.u
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// Total order used for deterministic sorting of direction samples.
    pub fn lex_cmp(&self, other: &Direction) -> Ordering {
        self.as_point().lex_cmp(other.as_point())
    }
}

/// A line segment given by centre, projective direction, and length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub centre: Point,
    pub direction: Direction,
    pub length: f64,
}

impl Segment {
    pub fn new(centre: Point, direction: Direction, length: f64) -> Result<Segment> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(invalid(format!("segment length must be positive, got {length}")));
        }
        if !centre.is_finite() {
            return Err(invalid("segment centre must be finite"));
        }
        Ok(Segment {
            centre,
            direction,
            length,
        })
    }

    /// Unit segment (`length = 1`).
    pub fn unit(centre: Point, direction: Direction) -> Segment {
        Segment {
            centre,
            direction,
            length: 1.0,
        }
    }

    pub fn endpoints(&self) -> (Point, Point) {
        let half = self.direction.as_point().scale(self.length / 2.0);
        (self.centre.sub(&half), self.centre.add(&half))
    }

    #[inline]
    pub fn midpoint(&self) -> Point {
        self.centre
    }

    /// `T_a`: shifts the centre by `-a`; direction and length are unchanged.
    pub fn translate(&self, a: &Point) -> Segment {
        Segment {
            centre: self.centre.translate(a),
            direction: self.direction,
            length: self.length,
        }
    }
}

/// Translates every segment by `T_a` (subtracting `a`).
pub fn translate_segments(segments: &[Segment], a: &Point) -> Vec<Segment> {
    segments.iter().map(|s| s.translate(a)).collect()
}

/// Translates every point by `T_a` (subtracting `a`).
pub fn translate_points(points: &[Point], a: &Point) -> Vec<Point> {
    points.iter().map(|p| p.translate(a)).collect()
}

/// A half-infinite line `{ base + t * direction : t >= 0 }`. The direction is
/// a genuine sphere point, not a projective one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub base: Point,
    pub direction: UnitVec,
}

impl Ray {
    pub fn new(base: Point, direction: UnitVec) -> Result<Ray> {
        if !base.is_finite() {
            return Err(invalid("ray base must be finite"));
        }
        Ok(Ray { base, direction })
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.base.add(&self.direction.as_point().scale(t))
    }

    /// Chord of the ray inside the closed ball `|x - centre| <= radius`,
    /// or `None` if the ray misses the ball. Degenerate chords (single
    /// points) are returned with equal endpoints.
    pub fn clip_to_ball(&self, centre: &Point, radius: f64) -> Option<(Point, Point)> {
        // Solve |base + t u - centre|^2 = radius^2 for t, keep t >= 0.
        let rel = self.base.sub(centre);
        let b = rel.dot(self.direction.as_point());
        let c = rel.norm_sq() - radius * radius;
        let disc = b * b - c;
        if disc < 0.0 {
            return None;
        }
        let sq = math::sqrt(disc);
        let t0 = (-b - sq).max(0.0);
        let t1 = -b + sq;
        if t1 < t0 {
            return None;
        }
        Some((self.point_at(t0), self.point_at(t1)))
    }
}

/// Axis-aligned box used to clip rays before rasterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub lo: Point,
    pub hi: Point,
}

impl Aabb {
    pub fn new(lo: Point, hi: Point) -> Result<Aabb> {
        if lo.dim() != hi.dim() {
            return Err(invalid("bounding box corners disagree on dimension"));
        }
        for i in 0..lo.dim() {
            if !(lo.coord(i) <= hi.coord(i)) {
                return Err(invalid("bounding box has lo > hi"));
            }
        }
        Ok(Aabb { lo, hi })
    }

    /// Cube `[-half, half]^d`.
    pub fn centred_cube(dim: usize, half: f64) -> Aabb {
        let lo = Point::zero(dim).add(&Point::new(&alloc::vec![-half; dim]));
        let hi = Point::new(&alloc::vec![half; dim]);
        Aabb { lo, hi }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..p.dim()).all(|i| self.lo.coord(i) <= p.coord(i) && p.coord(i) <= self.hi.coord(i))
    }

    /// Clips the chord `p0 -> p1` to the closed box (slab method).
    pub fn clip_chord(&self, p0: &Point, p1: &Point) -> Option<(Point, Point)> {
        let d = p1.sub(p0);
        let mut t_lo = 0.0f64;
        let mut t_hi = 1.0f64;
        for i in 0..p0.dim() {
            let di = d.coord(i);
            if di == 0.0 {
                if p0.coord(i) < self.lo.coord(i) || p0.coord(i) > self.hi.coord(i) {
                    return None;
                }
                continue;
            }
            let mut a = (self.lo.coord(i) - p0.coord(i)) / di;
            let mut b = (self.hi.coord(i) - p0.coord(i)) / di;
            if a > b {
                core::mem::swap(&mut a, &mut b);
            }
            t_lo = t_lo.max(a);
            t_hi = t_hi.min(b);
            if t_lo > t_hi {
                return None;
            }
        }
        let lerp = |t: f64| p0.add(&d.scale(t));
        Some((lerp(t_lo), lerp(t_hi)))
    }

    /// Clips a ray to the closed box, returning a finite chord.
    pub fn clip_ray(&self, ray: &Ray) -> Option<(Point, Point)> {
        // Far enough that the chord covers every box the ray can reach.
        let span = self.hi.sub(&self.lo).norm() + self.lo.dist(&ray.base) + self.hi.dist(&ray.base);
        let far = ray.point_at(span.max(1.0) * 2.0);
        self.clip_chord(&ray.base, &far)
    }
}

/// A similarity `x -> rate * x + offset` with uniform rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityMap {
    rate: f64,
    offset: Point,
}

impl SimilarityMap {
    pub fn new(rate: f64, offset: Point) -> Result<SimilarityMap> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(invalid(format!("similarity rate must be positive, got {rate}")));
        }
        Ok(SimilarityMap { rate, offset })
    }

    /// The zoom-out map `x -> x / k`.
    pub fn zoom_out(dim: usize, k: u32) -> Result<SimilarityMap> {
        if k == 0 {
            return Err(invalid("zoom factor k must be positive"));
        }
        SimilarityMap::new(1.0 / k as f64, Point::zero(dim))
    }

    #[inline]
    pub fn rate(&self) -> f64 {
        self.rate
    }

    #[inline]
    pub fn offset(&self) -> &Point {
        &self.offset
    }

    pub fn apply(&self, p: &Point) -> Point {
        p.scale(self.rate).add(&self.offset)
    }

    pub fn apply_segment(&self, s: &Segment) -> Segment {
        Segment {
            centre: self.apply(&s.centre),
            direction: s.direction,
            length: s.length * self.rate,
        }
    }

    pub fn apply_ray(&self, r: &Ray) -> Ray {
        Ray {
            base: self.apply(&r.base),
            direction: r.direction,
        }
    }

    pub fn inverse(&self) -> SimilarityMap {
        SimilarityMap {
            rate: 1.0 / self.rate,
            offset: self.offset.scale(-1.0 / self.rate),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords)
    }

    #[test]
    fn canonicalize_flips_sign_and_normalizes() {
        let d = Direction::canonicalize(&pt(&[0.0, -2.0])).unwrap();
        assert_eq!(d.as_point().coords(), &[0.0, 1.0]);

        let d = Direction::canonicalize(&pt(&[3.0, 4.0])).unwrap();
        assert_eq!(d.as_point().coords(), &[0.6, 0.8]);

        let d = Direction::canonicalize(&pt(&[-1.0, 0.0])).unwrap();
        assert_eq!(d.as_point().coords(), &[1.0, 0.0]);
    }

    #[test]
    fn canonicalize_rejects_zero() {
        assert!(Direction::canonicalize(&pt(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn canonicalize_is_idempotent_and_antipodal() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let v = pt(&[rng.gaussian(), rng.gaussian(), rng.gaussian()]);
            if v.norm() == 0.0 {
                continue;
            }
            let d1 = Direction::canonicalize(&v).unwrap();
            let d2 = Direction::canonicalize(&v.neg()).unwrap();
            let d3 = Direction::canonicalize(d1.as_point()).unwrap();
            // The sign flip is exact, so v and -v agree bit for bit.
            assert_eq!(d1, d2, "v and -v must share a representative");
            // Renormalizing an already-unit vector keeps it within an ulp.
            assert!(d3.as_point().dist(d1.as_point()) <= 1e-15);
        }
    }

    #[test]
    fn translate_subtracts() {
        let dir = Direction::canonicalize(&pt(&[1.0, 0.0])).unwrap();
        let s = Segment::unit(pt(&[1.0, 0.0]), dir);
        let moved = s.translate(&pt(&[1.0, 0.0]));
        assert_eq!(moved.centre, pt(&[0.0, 0.0]));
        // T_0 is the identity.
        assert_eq!(s.translate(&Point::zero(2)), s);
    }

    #[test]
    fn translate_composes_additively() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let p = pt(&[rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)]);
            let a = pt(&[rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)]);
            let b = pt(&[rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)]);
            let two_step = p.translate(&a).translate(&b);
            let one_step = p.translate(&a.add(&b));
            assert!(two_step.dist(&one_step) <= 1e-12);
        }
    }

    #[test]
    fn translate_inverse_pair_roundtrips() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..50 {
            let dir =
                Direction::canonicalize(&pt(&[rng.gaussian(), rng.gaussian()])).unwrap();
            let s = Segment::unit(pt(&[rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)]), dir);
            let a = pt(&[rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)]);
            let back = s.translate(&a).translate(&a.neg());
            assert!(back.centre.dist(&s.centre) <= 1e-12);
        }
    }

    #[test]
    fn similarity_scales_points_and_lengths() {
        let half = SimilarityMap::new(0.5, Point::zero(2)).unwrap();
        assert_eq!(half.apply(&pt(&[2.0, 0.0])), pt(&[1.0, 0.0]));

        let id = SimilarityMap::new(1.0, Point::zero(2)).unwrap();
        let p = pt(&[0.3, -0.7]);
        assert_eq!(id.apply(&p), p);

        assert!(SimilarityMap::new(0.0, Point::zero(2)).is_err());
        assert!(SimilarityMap::new(-1.0, Point::zero(2)).is_err());
    }

    #[test]
    fn similarity_distance_ratio_on_random_pairs() {
        let mut rng = SplitMix64::new(3);
        let s = SimilarityMap::new(2.5, pt(&[0.4, -1.0, 2.0])).unwrap();
        for _ in 0..100 {
            let a = pt(&[rng.gaussian(), rng.gaussian(), rng.gaussian()]);
            let b = pt(&[rng.gaussian(), rng.gaussian(), rng.gaussian()]);
            let lhs = s.apply(&a).dist(&s.apply(&b));
            let rhs = 2.5 * a.dist(&b);
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn similarity_preserves_collinearity() {
        let mut rng = SplitMix64::new(17);
        let s = SimilarityMap::new(0.3, pt(&[1.0, 2.0])).unwrap();
        for _ in 0..100 {
            let a = pt(&[rng.gaussian(), rng.gaussian()]);
            let d = pt(&[rng.gaussian(), rng.gaussian()]);
            let b = a.add(&d);
            let c = a.add(&d.scale(rng.uniform(0.1, 3.0)));
            let (ia, ib, ic) = (s.apply(&a), s.apply(&b), s.apply(&c));
            let u = ib.sub(&ia);
            let v = ic.sub(&ia);
            let cross = u.coord(0) * v.coord(1) - u.coord(1) * v.coord(0);
            assert!(cross.abs() <= 1e-10 * u.norm().max(1.0) * v.norm().max(1.0));
        }
    }

    #[test]
    fn segment_endpoints_match_definition() {
        let dir = Direction::canonicalize(&pt(&[1.0, 0.0])).unwrap();
        let s = Segment::unit(pt(&[5.0, 5.0]), dir);
        let (a, b) = s.endpoints();
        assert_eq!(a, pt(&[4.5, 5.0]));
        assert_eq!(b, pt(&[5.5, 5.0]));
    }

    #[test]
    fn ray_ball_clip() {
        let u = UnitVec::from_vector(&pt(&[1.0, 0.0])).unwrap();
        // Base on the boundary pointing outward: a single point survives.
        let r = Ray::new(pt(&[1.0, 0.0]), u).unwrap();
        let (a, b) = r.clip_to_ball(&Point::zero(2), 1.0).unwrap();
        assert!(a.dist(&pt(&[1.0, 0.0])) <= 1e-12);
        assert!(b.dist(&pt(&[1.0, 0.0])) <= 1e-12);

        // Base outside pointing away: misses.
        let r = Ray::new(pt(&[2.0, 0.0]), u).unwrap();
        assert!(r.clip_to_ball(&Point::zero(2), 1.0).is_none());

        // Base inside: chord from base to the sphere.
        let r = Ray::new(pt(&[0.0, 0.0]), u).unwrap();
        let (a, b) = r.clip_to_ball(&Point::zero(2), 1.0).unwrap();
        assert!(a.dist(&Point::zero(2)) <= 1e-12);
        assert!(b.dist(&pt(&[1.0, 0.0])) <= 1e-12);
    }

    #[test]
    fn aabb_clips_rays_to_finite_chords() {
        let boxx = Aabb::centred_cube(2, 2.0);
        let u = UnitVec::from_vector(&pt(&[1.0, 1.0])).unwrap();
        let r = Ray::new(pt(&[0.0, 0.0]), u).unwrap();
        let (a, b) = boxx.clip_ray(&r).unwrap();
        assert!(a.dist(&Point::zero(2)) <= 1e-12);
        assert!(b.dist(&pt(&[2.0, 2.0])) <= 1e-9);
    }
}
