//! Confining potentials `U: [0, 1) → ℝ₊` of the smoothed billiard.

/// A smooth convex increasing potential blowing up at `u = 1`.
pub trait Potential {
    fn value(&self, u: f64) -> f64;
    fn d1(&self, u: f64) -> f64;
    fn d2(&self, u: f64) -> f64;

    /// Secant slope of `u ↦ u·U(u)` between `u` and `w`.
    ///
    /// Used to evaluate `F(u) − F(w) = (u − w)(1 − ε·secant)` without
    /// cancellation near the turning points.
    fn secant_weighted(&self, u: f64, w: f64) -> f64 {
        let d = u - w;
        if d.abs() > 1e-6 * (1.0 - u.max(w)) {
            (u * self.value(u) - w * self.value(w)) / d
        } else {
            let m = 0.5 * (u + w);
            self.value(m) + m * self.d1(m)
        }
    }
}

/// `U(u) = 1 / (2(1 − u))`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InverseGap;

impl Potential for InverseGap {
    fn value(&self, u: f64) -> f64 {
        0.5 / (1.0 - u)
    }

    fn d1(&self, u: f64) -> f64 {
        0.5 / ((1.0 - u) * (1.0 - u))
    }

    fn d2(&self, u: f64) -> f64 {
        1.0 / ((1.0 - u) * (1.0 - u) * (1.0 - u))
    }

    fn secant_weighted(&self, u: f64, w: f64) -> f64 {
        0.5 / ((1.0 - u) * (1.0 - w))
    }
}
