//! Direct integration of `q̈ = −εU′(|q|²)q`, used as an independent oracle
//! for the quadrature profile.

use std::f64::consts::TAU;

use super::potential::Potential;
use super::BilliardModel;
use crate::error::{Error, Result};

/// `(q₁, q₂, p₁, p₂, Reeb time, polar angle)`.
pub type State = [f64; 6];

const MAX_STEPS: usize = 50_000_000;

impl<P: Potential> BilliardModel<P> {
    fn rhs(&self, y: &State) -> State {
        let u = y[0] * y[0] + y[1] * y[1];
        let force = self.epsilon() * self.potential().d1(u);
        [
            y[2],
            y[3],
            -force * y[0],
            -force * y[1],
            self.k(u),
            (y[0] * y[3] - y[1] * y[2]) / u,
        ]
    }

    /// One classical Runge–Kutta step.
    pub fn rk4_step(&self, y: &State, dt: f64) -> State {
        let add = |a: &State, k: &State, s: f64| -> State {
            let mut out = *a;
            for i in 0..6 {
                out[i] += s * k[i];
            }
            out
        };
        let k1 = self.rhs(y);
        let k2 = self.rhs(&add(y, &k1, 0.5 * dt));
        let k3 = self.rhs(&add(y, &k2, 0.5 * dt));
        let k4 = self.rhs(&add(y, &k3, dt));
        let mut out = *y;
        for i in 0..6 {
            out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    }

    /// Starts at a radial maximum `|q|² = u₀` with angular momentum `v`.
    pub fn apocenter_state(&self, v: f64) -> Result<State> {
        let (_, u0) = self.turning_points(v)?;
        let r = u0.sqrt();
        Ok([r, 0.0, 0.0, v / r, 0.0, 0.0])
    }

    /// Fixed-step trajectory, `steps + 1` states including the start.
    pub fn trajectory(&self, start: State, dt: f64, steps: usize) -> Vec<State> {
        let mut out = Vec::with_capacity(steps + 1);
        let mut y = start;
        out.push(y);
        for _ in 0..steps {
            y = self.rk4_step(&y, dt);
            out.push(y);
        }
        out
    }

    /// Energy `|p|² + εU(|q|²)`, equal to 1 on the level set.
    pub fn energy(&self, y: &State) -> f64 {
        let u = y[0] * y[0] + y[1] * y[1];
        y[2] * y[2] + y[3] * y[3] + self.epsilon() * self.potential().value(u)
    }

    /// `(G, α)` as the Reeb-time gap and angle advance between two
    /// consecutive maxima of `|q|²`.
    pub fn ode_oracle(&self, v: f64, dt: f64) -> Result<(f64, f64)> {
        if v == 0.0 || !(v.abs() < self.max_momentum()) {
            return Err(Error::OutOfRange {
                name: "v",
                value: v,
                range: "0 < |v| < M".into(),
            });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInput(format!("step must be positive, got {dt}")));
        }
        let radial = |y: &State| y[0] * y[2] + y[1] * y[3];
        let mut y = self.apocenter_state(v)?;
        let mut passed_min = false;
        for _ in 0..MAX_STEPS {
            let next = self.rk4_step(&y, dt);
            let (g0, g1) = (radial(&y), radial(&next));
            if !passed_min {
                passed_min = g0 < 0.0 && g1 >= 0.0;
            } else if g0 > 0.0 && g1 <= 0.0 {
                let end = self.refine_event(&y, dt, radial);
                let turn = if v < 0.0 { TAU + end[5] } else { end[5] };
                return Ok((end[4], turn));
            }
            y = next;
        }
        Err(Error::EventNotFound { steps: MAX_STEPS })
    }

    /// Locates the zero of `q·p` inside a step by secant iteration on the
    /// sub-step length, falling back to bisection when the secant leaves the bracket.
    fn refine_event(&self, y: &State, dt: f64, radial: impl Fn(&State) -> f64) -> State {
        let (mut lo, mut hi) = (0.0, dt);
        let (mut g_lo, mut g_hi) = (radial(y), radial(&self.rk4_step(y, dt)));
        let mut s = hi;
        for _ in 0..100 {
            let mut cand = hi - g_hi * (hi - lo) / (g_hi - g_lo);
            if !(cand > lo && cand < hi) {
                cand = 0.5 * (lo + hi);
            }
            let gc = radial(&self.rk4_step(y, cand));
            let moved = (cand - s).abs();
            s = cand;
            if gc > 0.0 {
                lo = cand;
                g_lo = gc;
            } else {
                hi = cand;
                g_hi = gc;
            }
            if moved < 1e-12 || gc == 0.0 {
                break;
            }
        }
        self.rk4_step(y, s)
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_model;

    #[test]
    fn circular_orbit() {
        let m = make_model(0.3).unwrap();
        let (ub, v) = (m.u_bar(), m.max_momentum());
        let r = ub.sqrt();
        let start = [r, 0.0, 0.0, v / r, 0.0, 0.0];
        let period = std::f64::consts::TAU * ub / v;
        let steps = 20_000;
        let traj = m.trajectory(start, period / steps as f64, steps);
        for y in &traj {
            assert!((y[0] * y[0] + y[1] * y[1] - ub).abs() < 1e-8);
        }
        let end = traj[steps];
        assert!((end[0] - r).abs() < 1e-8 && end[1].abs() < 1e-8);
    }

    #[test]
    fn conservation() {
        let m = make_model(0.2).unwrap();
        let v = 0.4 * m.max_momentum();
        let start = m.apocenter_state(v).unwrap();
        assert!((m.energy(&start) - 1.0).abs() < 1e-12);
        for y in m.trajectory(start, 1e-4, 40_000) {
            assert!((m.energy(&y) - 1.0).abs() < 1e-8);
            assert!((y[0] * y[3] - y[1] * y[2] - v).abs() < 1e-9);
        }
    }

    #[test]
    fn matches_quadrature() {
        let m = make_model(0.2).unwrap();
        let v = 0.4 * m.max_momentum();
        let (g, a) = m.g_alpha(v).unwrap();
        let (go, ao) = m.ode_oracle(v, 1e-3).unwrap();
        assert!(((go - g) / g).abs() < 1e-4, "{go} vs {g}");
        assert!(((ao - a) / a).abs() < 1e-4, "{ao} vs {a}");
        let (gn, an) = m.ode_oracle(-v, 1e-3).unwrap();
        assert!(((gn - g) / g).abs() < 1e-4);
        assert!((an - (std::f64::consts::TAU - a)).abs() < 1e-4 * a);
        assert!(m.ode_oracle(0.0, 1e-3).is_err());
        assert!(m.ode_oracle(v, 0.0).is_err());
    }
}
