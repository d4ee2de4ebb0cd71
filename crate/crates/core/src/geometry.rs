//! Moment-plane geometry: points, concave polyline regions, unimodular maps
//! and the boundary curve of the region Ω₀.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used to collapse ties in [`min_functional`].
pub const TAU_CONTACT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn swap(self) -> Self {
        Self::new(self.y, self.x)
    }
}

/// Region between the coordinate axes and a convex, decreasing polyline
/// running from `(0, y_int)` to `(x_int, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveRegion {
    vertices: Vec<Point2>,
}

impl ConcaveRegion {
    /// Validates the chain invariants and builds the region.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidRegion(m));
        if vertices.len() < 2 {
            return bad(format!("need at least 2 vertices, got {}", vertices.len()));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return bad("non-finite vertex".into());
        }
        let first = vertices[0];
        let last = vertices[vertices.len() - 1];
        if first.x != 0.0 || first.y <= 0.0 {
            return bad(format!("first vertex must be (0, y>0), got ({}, {})", first.x, first.y));
        }
        if last.y != 0.0 || last.x <= 0.0 {
            return bad(format!("last vertex must be (x>0, 0), got ({}, {})", last.x, last.y));
        }
        for (k, w) in vertices.windows(2).enumerate() {
            if !(w[1].x > w[0].x && w[1].y < w[0].y) {
                return bad(format!("chain not strictly monotone at edge {k}"));
            }
        }
        for (k, w) in vertices.windows(3).enumerate() {
            let (dx1, dy1) = (w[1].x - w[0].x, w[1].y - w[0].y);
            let (dx2, dy2) = (w[2].x - w[1].x, w[2].y - w[1].y);
            let cross = dx1 * dy2 - dy1 * dx2;
            let (l1, l2) = (dx1.hypot(dy1), dx2.hypot(dy2));
            // relative angle slack plus room for contact snapping of size τ
            if cross < -(1e-9 * l1 * l2 + 2.0 * TAU_CONTACT * (l1 + l2)) {
                return bad(format!("chain not convex at vertex {}", k + 1));
            }
        }
        Ok(Self { vertices })
    }

    /// Triangle T(a, b): legs `a` along x and `b` along y.
    pub fn triangle(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![Point2::new(0.0, b), Point2::new(a, 0.0)])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn x_intercept(&self) -> f64 {
        self.vertices[self.vertices.len() - 1].x
    }

    pub fn y_intercept(&self) -> f64 {
        self.vertices[0].y
    }

    /// Closed boundary polygon: origin followed by the chain.
    pub fn boundary_polygon(&self) -> Vec<Point2> {
        let mut poly = Vec::with_capacity(self.vertices.len() + 1);
        poly.push(Point2::new(0.0, 0.0));
        poly.extend_from_slice(&self.vertices);
        poly
    }

    /// Height of the chain above `x`, or `None` outside `[0, x_int]`.
    pub fn chain_height(&self, x: f64) -> Option<f64> {
        let v = &self.vertices;
        if !(0.0..=self.x_intercept()).contains(&x) {
            return None;
        }
        let k = v.partition_point(|p| p.x <= x).clamp(1, v.len() - 1);
        let (p, q) = (v[k - 1], v[k]);
        let t = (x - p.x) / (q.x - p.x);
        Some(p.y + t * (q.y - p.y))
    }

    /// True when `p` lies in the closed region enlarged by `tol`.
    pub fn contains_point(&self, p: Point2, tol: f64) -> bool {
        if p.x < -tol || p.y < -tol {
            return false;
        }
        match self.chain_height(p.x.max(0.0)) {
            Some(h) => p.y <= h + tol,
            None => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnimodularAffine {
    matrix: [[i64; 2]; 2],
    translation: Point2,
}

impl UnimodularAffine {
    pub fn new(matrix: [[i64; 2]; 2], translation: Point2) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det != 1 {
            return Err(Error::InvalidInput(format!("determinant {det} != 1")));
        }
        Ok(Self { matrix, translation })
    }

    pub fn identity() -> Self {
        Self { matrix: [[1, 0], [0, 1]], translation: Point2::new(0.0, 0.0) }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> Point2 {
        self.translation
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let m = self.matrix;
        Point2::new(
            m[0][0] as f64 * p.x + m[0][1] as f64 * p.y + self.translation.x,
            m[1][0] as f64 * p.x + m[1][1] as f64 * p.y + self.translation.y,
        )
    }
}

/// Maps every vertex of a chain by `m`.
pub fn apply_unimodular(m: &UnimodularAffine, chain: &[Point2]) -> Vec<Point2> {
    chain.iter().map(|&p| m.apply(p)).collect()
}

/// Unsigned shoelace area of a closed polygon.
pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for k in 0..n {
        let (p, q) = (poly[k], poly[(k + 1) % n]);
        s += p.x * q.y - q.x * p.y;
    }
    0.5 * s.abs()
}

/// Area between the chain and the axes.
pub fn region_area(r: &ConcaveRegion) -> f64 {
    chain_area(&r.vertices)
}

/// Trapezoid sum under a chain from the y-axis to the x-axis; accepts
/// non-strict chains such as axis-parallel staircases.
pub fn chain_area(chain: &[Point2]) -> f64 {
    chain
        .windows(2)
        .map(|w| (w[1].x - w[0].x) * (w[0].y + w[1].y) * 0.5)
        .sum()
}

/// Minimum of `cx·x + cy·y` over the chain vertices, with the first and last
/// vertex indices attaining it within [`TAU_CONTACT`].
pub fn min_functional(r: &ConcaveRegion, cx: f64, cy: f64) -> (f64, usize, usize) {
    let vals: Vec<f64> = r.vertices.iter().map(|p| cx * p.x + cy * p.y).collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let first = vals.iter().position(|&s| s <= min + TAU_CONTACT).unwrap_or(0);
    let last = vals.iter().rposition(|&s| s <= min + TAU_CONTACT).unwrap_or(0);
    (min, first, last)
}

fn omega0_half(alpha: f64) -> Point2 {
    let (s, c) = (0.5 * alpha).sin_cos();
    Point2::new(2.0 * s - alpha * c, 2.0 * s + (TAU - alpha) * c)
}

/// Point of the Ω₀ boundary curve at parameter `alpha ∈ [0, 2π]`.
///
/// Parameters above π are evaluated through the reflection symmetry so that
/// `omega0_point(2π − α)` is exactly the swap of `omega0_point(α)`.
pub fn omega0_point(alpha: f64) -> Result<Point2> {
    if !(0.0..=TAU).contains(&alpha) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, range: "[0, 2π]".into() });
    }
    Ok(if alpha == PI {
        Point2::new(2.0, 2.0)
    } else if alpha < PI {
        omega0_half(alpha)
    } else {
        omega0_half(TAU - alpha).swap()
    })
}

/// Parameter grid and points of the Ω₀ curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Omega0Curve {
    pub alpha_samples: Vec<f64>,
    pub points: Vec<Point2>,
}

impl Omega0Curve {
    /// Chebyshev-clustered grid `α_k = π(1 − cos(πk/n))`, mirrored about π.
    pub fn chebyshev(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need n >= 2 intervals, got {n}")));
        }
        let mut alpha = vec![0.0; n + 1];
        for k in 0..=n / 2 {
            let a = if 2 * k == n { PI } else { PI * (1.0 - (PI * k as f64 / n as f64).cos()) };
            alpha[k] = a;
            alpha[n - k] = TAU - a;
        }
        let mut points = vec![Point2::new(0.0, 0.0); n + 1];
        for k in 0..=n / 2 {
            points[k] = omega0_point(alpha[k])?;
            points[n - k] = points[k].swap();
        }
        Ok(Self { alpha_samples: alpha, points })
    }

    pub fn region(&self) -> Result<ConcaveRegion> {
        ConcaveRegion::new(self.points.clone())
    }
}

/// Inscribed polyline model of Ω₀ with `n + 1` vertices on the curve.
pub fn sample_omega0(n: usize) -> Result<ConcaveRegion> {
    Omega0Curve::chebyshev(n)?.region()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn curve_landmarks() {
        assert_eq!(omega0_point(0.0).unwrap(), Point2::new(0.0, TAU));
        assert_eq!(omega0_point(PI).unwrap(), Point2::new(2.0, 2.0));
        assert_eq!(omega0_point(TAU).unwrap(), Point2::new(TAU, 0.0));
        assert!(omega0_point(-0.1).is_err());
        assert!(omega0_point(7.0).is_err());
    }

    #[test]
    fn coarse_grid_is_three_landmarks() {
        let r = sample_omega0(2).unwrap();
        assert_eq!(
            r.vertices(),
            &[Point2::new(0.0, TAU), Point2::new(2.0, 2.0), Point2::new(TAU, 0.0)]
        );
    }

    #[test]
    fn odd_grids_are_symmetric() {
        for n in [3, 5, 101] {
            let c = Omega0Curve::chebyshev(n).unwrap();
            for k in 0..=n {
                assert_eq!(c.points[k], c.points[n - k].swap());
            }
            c.region().unwrap();
        }
    }

    #[test]
    fn fine_grid_minimum_and_area() {
        let r = sample_omega0(4096).unwrap();
        let (m, i, j) = min_functional(&r, 1.0, 1.0);
        assert!((m - 4.0).abs() < 1e-6);
        assert_eq!(r.vertices()[i], Point2::new(2.0, 2.0));
        assert_eq!(i, j);
        assert!((region_area(&r) - PI * PI).abs() < 1e-4);
    }

    #[test]
    fn tangent_functional_near_four_thirds_pi() {
        let c = Omega0Curve::chebyshev(8192).unwrap();
        let r = c.region().unwrap();
        let (m, i, _) = min_functional(&r, 1.0, 2.0);
        assert!((m - 3.0 * 3f64.sqrt()).abs() < 1e-6);
        assert!((c.alpha_samples[i] - 4.0 * PI / 3.0).abs() < 1e-2);
    }

    #[test]
    fn simple_areas() {
        assert_eq!(region_area(&ConcaveRegion::triangle(3.0, 3.0).unwrap()), 4.5);
        let square = [Point2::new(0.0, 1.0), Point2::new(1.0, 1.0), Point2::new(1.0, 0.0)];
        assert_eq!(chain_area(&square), 1.0);
    }

    #[test]
    fn rejects_bad_chains() {
        let p = Point2::new;
        assert!(ConcaveRegion::new(vec![p(0.0, 1.0)]).is_err());
        assert!(ConcaveRegion::new(vec![p(0.1, 1.0), p(1.0, 0.0)]).is_err());
        assert!(ConcaveRegion::new(vec![p(0.0, 1.0), p(1.0, 0.1)]).is_err());
        assert!(ConcaveRegion::new(vec![p(0.0, 1.0), p(0.5, 1.0), p(1.0, 0.0)]).is_err());
        // reflex turn: above the chord
        assert!(ConcaveRegion::new(vec![p(0.0, 1.0), p(0.5, 0.8), p(1.0, 0.0)]).is_err());
        assert!(ConcaveRegion::new(vec![p(0.0, 1.0), p(0.5, 0.2), p(1.0, 0.0)]).is_ok());
    }

    #[test]
    fn hypotenuse_contact_spans_chain() {
        let r = ConcaveRegion::new(vec![
            Point2::new(0.0, 2.0),
            Point2::new(1.0, 1.0),
            Point2::new(2.0, 0.0),
        ])
        .unwrap();
        assert_eq!(min_functional(&r, 1.0, 1.0), (2.0, 0, 2));
    }

    #[test]
    fn shear_of_segment() {
        let m = UnimodularAffine::new([[1, 1], [0, 1]], Point2::new(0.0, 0.0)).unwrap();
        let out = apply_unimodular(&m, &[Point2::new(0.0, 1.0), Point2::new(1.0, 0.0)]);
        assert_eq!(out, vec![Point2::new(1.0, 1.0), Point2::new(1.0, 0.0)]);
        let id = UnimodularAffine::identity();
        let v = vec![Point2::new(0.3, -2.0)];
        assert_eq!(apply_unimodular(&id, &v), v);
        assert!(UnimodularAffine::new([[1, 0], [0, -1]], Point2::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn point_containment() {
        let r = ConcaveRegion::triangle(2.0, 1.0).unwrap();
        assert!(r.contains_point(Point2::new(1.0, 0.49), 0.0));
        assert!(!r.contains_point(Point2::new(1.0, 0.51), 0.0));
        assert!(!r.contains_point(Point2::new(2.1, 0.0), 0.0));
        assert!(!r.contains_point(Point2::new(-0.1, 0.0), 0.0));
    }

    proptest! {
        #[test]
        fn reflection_symmetry(alpha in 0.0..TAU) {
            let p = omega0_point(alpha).unwrap();
            let q = omega0_point(TAU - alpha).unwrap();
            prop_assert!((p.x - q.y).abs() < 1e-12 && (p.y - q.x).abs() < 1e-12);
        }

        #[test]
        fn area_decreases_under_refinement(n in 3usize..400) {
            // the boundary curve is convex, so its chords lie outside the region
            let a = region_area(&sample_omega0(n).unwrap());
            let b = region_area(&sample_omega0(2 * n).unwrap());
            prop_assert!(b <= a + 1e-12);
            prop_assert!(b >= PI * PI - 1e-9);
        }

        #[test]
        fn unimodular_preserves_area(
            n in 3usize..64,
            m in prop::sample::select(vec![[[1i64, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 1], [1, 1]], [[0, -1], [1, 0]], [[1, -3], [0, 1]]]),
            tx in -5.0..5.0f64,
            ty in -5.0..5.0f64,
        ) {
            let r = sample_omega0(n).unwrap();
            let map = UnimodularAffine::new(m, Point2::new(tx, ty)).unwrap();
            let poly = r.boundary_polygon();
            let a = polygon_area(&poly);
            let b = polygon_area(&apply_unimodular(&map, &poly));
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0) * 10.0);
            prop_assert!((a - region_area(&r)).abs() < 1e-12 * a);
        }

        #[test]
        fn min_functional_is_brute_force(n in 3usize..200, cx in 0.0..3.0f64, cy in 0.0..3.0f64) {
            prop_assume!(cx + cy > 1e-3);
            let r = sample_omega0(n).unwrap();
            let (m, i, j) = min_functional(&r, cx, cy);
            let brute = r.vertices().iter().map(|p| cx * p.x + cy * p.y).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(m, brute);
            prop_assert!(i <= j);
        }
    }
}
