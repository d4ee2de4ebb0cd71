//! Smoothed billiard in the unit disk: `H = ½(|p|² + εU(|q|²))` on the
//! energy level `|p|² + εU = 1`.
//!
//! The action profile `G(v), α(v)` of the Reeb flow is computed by singular
//! quadrature in `u = |q|²`, cross-checked by direct ODE integration in
//! [`ode`], and assembled into the moment-image chain `(ρ₁, ρ₂)`.

pub mod ode;
pub mod potential;
pub mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use potential::{InverseGap, Potential};
use quadrature::{adaptive_gk, gl_doubling};

/// Convergence threshold of the panel-doubling quadrature.
pub const QUAD_TOL: f64 = 1e-10;
const QUAD_MAX_PANELS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct BilliardModel<P = InverseGap> {
    epsilon: f64,
    potential: P,
    u_bar: f64,
    m: f64,
    u_top: f64,
}

/// Default model with `U(u) = 1/(2(1 − u))`.
pub fn make_model(epsilon: f64) -> Result<BilliardModel> {
    BilliardModel::with_potential(epsilon, InverseGap)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, run to float resolution.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl<P: Potential> BilliardModel<P> {
    pub fn with_potential(epsilon: f64, potential: P) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::OutOfRange { name: "epsilon", value: epsilon, range: "(0, 1)".into() });
        }
        let bad = |m: String| Err(Error::InvalidPotential(m));
        let u0 = potential.value(0.0);
        if !(u0 >= 0.0 && epsilon * u0 < 1.0) {
            return bad(format!("need 0 <= εU(0) < 1, got εU(0) = {}", epsilon * u0));
        }
        for k in 1..100 {
            let u = k as f64 / 100.0;
            if !(potential.d1(u) > 0.0 && potential.d2(u) > 0.0) {
                return bad(format!("U must be increasing and convex, fails at u = {u}"));
            }
        }
        let near_one = 1.0 - 1e-12;
        if !(epsilon * potential.value(near_one) > 1.0) {
            return bad("U does not blow up at u = 1".into());
        }
        let u_top = bisect(|u| 1.0 - epsilon * potential.value(u), 0.0, near_one);
        let fp = |u: f64| 1.0 - epsilon * (potential.value(u) + u * potential.d1(u));
        let u_bar = bisect(fp, 0.0, u_top);
        let residual = fp(u_bar);
        if !(residual.abs() < 1e-12) {
            return bad(format!("critical point residual {residual:e}"));
        }
        let f_bar = u_bar * (1.0 - epsilon * potential.value(u_bar));
        if !(f_bar > 0.0) {
            return bad("F(ū) is not positive".into());
        }
        Ok(Self { epsilon, potential, u_bar, m: f_bar.sqrt(), u_top })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn potential(&self) -> &P {
        &self.potential
    }

    /// Critical point ū of `F`.
    pub fn u_bar(&self) -> f64 {
        self.u_bar
    }

    /// Maximal angular momentum `M = √F(ū)`.
    pub fn max_momentum(&self) -> f64 {
        self.m
    }

    /// Upper zero of `1 − εU`, the outer turning point at `v = 0`.
    pub fn u_top(&self) -> f64 {
        self.u_top
    }

    /// `F(u) = u(1 − εU(u))`.
    pub fn f(&self, u: f64) -> f64 {
        u * (1.0 - self.epsilon * self.potential.value(u))
    }

    pub fn f_prime(&self, u: f64) -> f64 {
        1.0 - self.epsilon * (self.potential.value(u) + u * self.potential.d1(u))
    }

    /// `K(u) = ½(1 − εU + εuU′)`, the Reeb-time density.
    pub fn k(&self, u: f64) -> f64 {
        0.5 * (1.0 - self.epsilon * self.potential.value(u) + self.epsilon * u * self.potential.d1(u))
    }

    fn check_v(&self, v: f64) -> Result<()> {
        if v.is_finite() && v.abs() < self.m {
            Ok(())
        } else {
            Err(Error::OutOfRange { name: "v", value: v, range: format!("(-{0}, {0})", self.m) })
        }
    }

    /// Roots `u₁ < ū < u₀` of `F(u) = v²`.
    pub fn turning_points(&self, v: f64) -> Result<(f64, f64)> {
        self.check_v(v)?;
        if v == 0.0 {
            return Ok((0.0, self.u_top));
        }
        let v2 = v * v;
        let g = |u: f64| self.f(u) - v2;
        Ok((bisect(g, 0.0, self.u_bar), bisect(g, self.u_bar, self.u_top)))
    }

    /// `F(u) − v²` factored through whichever turning point is closer.
    fn gap(&self, u: f64, u1: f64, u0: f64) -> f64 {
        let eps = self.epsilon;
        if u - u1 <= u0 - u {
            (u - u1) * (1.0 - eps * self.potential.secant_weighted(u, u1))
        } else {
            (u0 - u) * (eps * self.potential.secant_weighted(u, u0) - 1.0)
        }
    }

    /// `G(v)` and `α(v)`, with `α(0) = π` and the reflection rules for `v < 0`.
    pub fn g_alpha(&self, v: f64) -> Result<(f64, f64)> {
        self.check_v(v)?;
        if v < 0.0 {
            let (g, a) = self.g_alpha(-v)?;
            return Ok((g, TAU - a));
        }
        let (u1, u0) = self.turning_points(v)?;
        let eps = self.epsilon;
        let h = 0.5 * (u0 - u1);
        // u = c + h·sin θ; with φ = θ + π/2 the distances to the turning
        // points are 2h·sin²(φ/2) and 2h·cos²(φ/2), and
        // du/√(F − v²) = √(b/D₁) dθ = √(a/D₀) dθ
        let integrand = |theta: f64| -> [f64; 2] {
            let half = 0.5 * (theta + FRAC_PI_2);
            let a = 2.0 * h * half.sin().powi(2);
            let b = 2.0 * h * half.cos().powi(2);
            let (u, j) = if theta <= 0.0 {
                let u = u1 + a;
                (u, (b / (1.0 - eps * self.potential.secant_weighted(u, u1))).sqrt())
            } else {
                let u = u0 - b;
                (u, (a / (eps * self.potential.secant_weighted(u, u0) - 1.0)).sqrt())
            };
            let turn = if v == 0.0 { 0.0 } else { j / u };
            [self.k(u) * j, turn]
        };
        let [g, turn] =
            gl_doubling(integrand, -FRAC_PI_2, FRAC_PI_2, QUAD_TOL, QUAD_MAX_PANELS, "G/alpha quadrature")?;
        let alpha = if v == 0.0 { PI } else { v * turn };
        Ok((g, alpha))
    }

    /// `σ(v) = ∫ √(F − v²)/u du = ρ₁(v)`, by adaptive quadrature in `u`.
    pub fn sigma(&self, v: f64) -> Result<f64> {
        self.check_v(v)?;
        if v < 0.0 {
            return Ok(self.sigma(-v)? - TAU * v);
        }
        let (u1, u0) = self.turning_points(v)?;
        let f = |u: f64| self.gap(u, u1, u0).max(0.0).sqrt() / u;
        adaptive_gk(f, u1, u0, 1e-12, 50_000, "sigma quadrature")
    }

    /// Samples `v = M·sin(πt/2)` on a symmetric grid of `n` interior points
    /// and records `(v, G, α, ρ₁, ρ₂)`.
    pub fn moment_profile(&self, n: usize) -> Result<MomentProfile> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 samples, got {n}")));
        }
        let mut vs = vec![0.0; n];
        for k in n / 2..n {
            let t = -1.0 + 2.0 * (k + 1) as f64 / (n + 1) as f64;
            let v = if 2 * (k + 1) == n + 1 { 0.0 } else { self.m * (FRAC_PI_2 * t).sin() };
            vs[k] = v;
            vs[n - 1 - k] = -v;
        }
        let samples = vs
            .into_iter()
            .map(|v| {
                let (g, alpha) = self.g_alpha(v)?;
                let rho1 = g - alpha * v;
                Ok(ProfileSample { v, g, alpha, rho1, rho2: rho1 + TAU * v })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentProfile { epsilon: self.epsilon, samples })
    }

    /// Sup over `α₀ = 2πk/(n+1)`, `k = 1..=n`, of the distance between
    /// `σ(cos(α₀/2))` and the limit value `2sin(α₀/2) − α₀cos(α₀/2)`.
    ///
    /// Momenta outside `(−M, M)` are clamped, using `σ(M) = 0` and
    /// `σ(−M) = 2πM`.
    pub fn limit_curve_error(&self, n: usize) -> Result<f64> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 samples, got {n}")));
        }
        let mut worst: f64 = 0.0;
        for k in 1..=n {
            let a0 = TAU * k as f64 / (n + 1) as f64;
            let (s, c) = (0.5 * a0).sin_cos();
            let v = c;
            let sigma = if v >= self.m {
                0.0
            } else if v <= -self.m {
                TAU * self.m
            } else {
                self.sigma(v)?
            };
            worst = worst.max((sigma - (2.0 * s - a0 * c)).abs());
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub v: f64,
    pub g: f64,
    pub alpha: f64,
    pub rho1: f64,
    pub rho2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentProfile {
    pub epsilon: f64,
    pub samples: Vec<ProfileSample>,
}

impl MomentProfile {
    /// Boundary points `(ρ₁, ρ₂)` sorted by increasing `ρ₁`.
    pub fn chain(&self) -> Vec<Point2> {
        let mut pts: Vec<Point2> = self.samples.iter().map(|s| Point2::new(s.rho1, s.rho2)).collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        pts
    }
}
