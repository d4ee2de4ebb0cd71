//! Named end-to-end checks, each producing a pass/fail report.

use std::f64::consts::TAU;

use serde_json::{json, Value};

use crate::billiard::make_model;
use crate::capacities::{
    ball_caps, concave_caps, dominates, ellipsoid_caps, union_caps, CapacitySequence,
};
use crate::domain::DomainSpec;
use crate::embedding::{obstruct, verdict_bidisk_into, Embeds, FOUR, THREE_SQRT3};
use crate::error::{Error, Result};
use crate::format::json_f64;
use crate::geometry::{sample_omega0, ConcaveRegion};
use crate::packing::{shift_into_neighbor, shipped_certificate, verify_placement, PackingFailure};
use crate::weights::weight_sequence;

/// Scenario names, with the aliases accepted by [`run_scenario`].
pub const SCENARIOS: [(&str, &str); 6] = [
    ("weights", "weights"),
    ("capacities", "capacities"),
    ("sharp-obstructions", "theorem-1.1"),
    ("ellipsoid-dominance", "prop-1.4"),
    ("billiard-convergence", "billiard-convergence"),
    ("packing", "packing"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub id: String,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl ScenarioReport {
    fn new(id: &str) -> Self {
        Self { id: id.to_string(), records: Vec::new(), pass: true }
    }

    /// `|computed − expected| <= tolerance`.
    fn close(&mut self, name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) {
        let pass = (computed - expected).abs() <= tolerance;
        self.push(name.into(), expected, computed, tolerance, pass);
    }

    /// `computed <= expected + tolerance`.
    fn at_most(&mut self, name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) {
        let pass = computed <= expected + tolerance;
        self.push(name.into(), expected, computed, tolerance, pass);
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool) {
        self.push(name.into(), 1.0, if ok { 1.0 } else { 0.0 }, 0.0, ok);
    }

    fn push(&mut self, name: String, expected: f64, computed: f64, tolerance: f64, pass: bool) {
        self.pass &= pass;
        self.records.push(CheckRecord { name, expected, computed, tolerance, pass });
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scenario": self.id,
            "pass": self.pass,
            "checks": self.records.iter().map(|r| json!({
                "name": r.name,
                "expected": json_f64(r.expected),
                "computed": json_f64(r.computed),
                "tolerance": json_f64(r.tolerance),
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs one scenario by name or alias.
pub fn run_scenario(name: &str) -> Result<ScenarioReport> {
    let id = SCENARIOS
        .iter()
        .find(|(n, alias)| *n == name || *alias == name)
        .map(|(n, _)| *n)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))?;
    match id {
        "weights" => weights_scenario(),
        "capacities" => capacities_scenario(),
        "sharp-obstructions" => sharp_scenario(),
        "ellipsoid-dominance" => dominance_scenario(),
        "billiard-convergence" => billiard_scenario(),
        _ => packing_scenario(),
    }
}

fn omega0() -> Result<ConcaveRegion> {
    sample_omega0(8192)
}

fn weights_scenario() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("weights");
    let w = weight_sequence(&omega0()?, 5, 0.0)?.weights;
    let t = THREE_SQRT3 - 4.0;
    let u = 4.0 * 2f64.sqrt() - THREE_SQRT3;
    let expect = [(4.0, 1e-5), (t, 1e-4), (t, 1e-4), (u, 1e-3), (u, 1e-3)];
    for (i, (e, tol)) in expect.into_iter().enumerate() {
        rep.close(format!("w{}", i + 1), e, w.get(i).copied().unwrap_or(f64::NAN), tol);
    }
    Ok(rep)
}

/// Largest `|c_k(B(4) ⊔ B(t) ⊔ B(t) ⊔ E(12 − 6√3, t)) − c_k(E(4, 3√3))|`, `t = 3√3 − 4`.
pub fn decomposition_gap(k_max: usize) -> Result<f64> {
    let t = THREE_SQRT3 - 4.0;
    let parts = [
        ball_caps(4.0, k_max)?,
        ball_caps(t, k_max)?,
        ball_caps(t, k_max)?,
        ellipsoid_caps(12.0 - 2.0 * THREE_SQRT3, t, k_max)?,
    ];
    let u = union_caps(&parts, k_max)?;
    let e = ellipsoid_caps(4.0, THREE_SQRT3, k_max)?;
    Ok((0..=k_max).map(|k| (u.get(k) - e.get(k)).abs()).fold(0.0, f64::max))
}

fn capacities_scenario() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("capacities");
    let c = concave_caps(&omega0()?, 10)?;
    rep.close("c1", 4.0, c.get(1), 1e-4);
    rep.close("c2", THREE_SQRT3, c.get(2), 1e-4);
    rep.close("decomposition identity, k <= 200", 0.0, decomposition_gap(200)?, 1e-9);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMismatch {
    pub target: DomainSpec,
    pub closed_form: Embeds,
    pub obstruction: Embeds,
}

/// Targets on the grid `{3.0, 3.25, …, 7.0}` whose parameters stay at least
/// `margin` away from 4 and 3√3.
pub fn sharp_grid(margin: f64) -> Vec<DomainSpec> {
    let vals: Vec<f64> = (0..=16)
        .map(|k| 3.0 + 0.25 * k as f64)
        .filter(|v| (v - FOUR).abs() >= margin && (v - THREE_SQRT3).abs() >= margin)
        .collect();
    let mut out: Vec<DomainSpec> = vals.iter().map(|&a| DomainSpec::Ball(a)).collect();
    for &a in &vals {
        for &b in &vals {
            out.push(DomainSpec::Ellipsoid(a, b));
        }
    }
    for &a in &vals {
        for &b in &vals {
            out.push(DomainSpec::Polydisk(a, b));
        }
    }
    out
}

/// Compares the closed-form verdicts with capacity obstructions of Ω₀.
pub fn sharp_grid_mismatches(
    source: &CapacitySequence,
    k_max: usize,
    margin: f64,
) -> Result<(usize, Vec<GridMismatch>)> {
    let grid = sharp_grid(margin);
    let mut bad = Vec::new();
    for target in &grid {
        let closed = verdict_bidisk_into(target)?.embeds;
        let tc = target.capacities(k_max)?;
        let (ok, _) = dominates(&tc, source, 1e-9)?;
        let obstruction = if ok { Embeds::ObstructionFree } else { Embeds::No };
        let consistent = match closed {
            Embeds::Yes => ok,
            _ => !ok,
        };
        if !consistent {
            bad.push(GridMismatch { target: target.clone(), closed_form: closed, obstruction });
        }
    }
    Ok((grid.len(), bad))
}

fn sharp_scenario() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("sharp-obstructions");
    let k = 100;
    let source = concave_caps(&omega0()?, k)?;
    let (n, bad) = sharp_grid_mismatches(&source, k, 1e-3)?;
    rep.close(format!("mismatches over {n} targets"), 0.0, bad.len() as f64, 0.0);
    let omega = DomainSpec::Concave { region: omega0()?, k_weights: None };
    let v = obstruct(&omega, &DomainSpec::Ball(5.0), 10, 1e-9)?;
    rep.close("B(5) obstructed at k", 2.0, v.witness_k().map_or(f64::NAN, |k| k as f64), 0.0);
    Ok(rep)
}

fn dominance_scenario() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("ellipsoid-dominance");
    let k = 200;
    let c = concave_caps(&omega0()?, k)?;
    let e = ellipsoid_caps(4.0, THREE_SQRT3, k)?;
    let excess = (0..=k).map(|j| c.get(j) - e.get(j)).fold(f64::NEG_INFINITY, f64::max);
    rep.at_most("max_k c_k(X0) - c_k(E(4, 3√3))", 0.0, excess, 1e-6);
    Ok(rep)
}

/// Nesting test: every `(ρ₁, ρ₂)` point lies inside the Ω₀ polyline.
pub fn profile_nested(chain: &[crate::geometry::Point2], omega: &ConcaveRegion) -> bool {
    chain.iter().all(|p| p.x > 0.0 && p.y > 0.0 && omega.contains_point(*p, 0.0))
}

fn billiard_scenario() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("billiard-convergence");
    let eps = [0.4, 0.2, 0.1, 0.05];
    let models = eps.iter().map(|&e| make_model(e)).collect::<Result<Vec<_>>>()?;
    let shared = models.iter().map(|m| m.max_momentum()).fold(f64::INFINITY, f64::min);
    let mut monotone = true;
    for f in [-0.8, -0.4, 0.0, 0.4, 0.8] {
        let v = f * shared;
        let s = models.iter().map(|m| m.sigma(v)).collect::<Result<Vec<_>>>()?;
        monotone &= s.windows(2).all(|w| w[1] > w[0]);
    }
    rep.flag("sigma strictly decreasing in epsilon", monotone);
    let errs = models.iter().map(|m| m.limit_curve_error(64)).collect::<Result<Vec<_>>>()?;
    rep.flag("limit error strictly decreasing", errs.windows(2).all(|w| w[1] < w[0]));
    rep.close("sigma_0.01(0)", 2.0, make_model(0.01)?.sigma(0.0)?, 0.15);
    let omega = omega0()?;
    let mut nested = true;
    for m in &models {
        nested &= profile_nested(&m.moment_profile(65)?.chain(), &omega);
    }
    rep.flag("profiles nested in Omega0", nested);
    let m = make_model(0.2)?;
    let v = 0.4 * m.max_momentum();
    let (g, a) = m.g_alpha(v)?;
    let (go, ao) = m.ode_oracle(v, 1e-3)?;
    rep.close("ODE vs quadrature G (relative)", 0.0, (go - g) / g, 1e-4);
    rep.close("ODE vs quadrature alpha (relative)", 0.0, (ao - a) / a, 1e-4);
    let p = m.moment_profile(33)?;
    let worst = p.samples.iter().map(|s| (s.rho2 - s.rho1 - TAU * s.v).abs()).fold(0.0, f64::max);
    rep.close("rho2 - rho1 - 2 pi v", 0.0, worst, 1e-12);
    Ok(rep)
}

fn packing_scenario() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("packing");
    let p = shipped_certificate();
    rep.flag("shipped certificate verifies", verify_placement(&p)?.ok);
    let mut caught = true;
    for i in 0..p.pieces.len() {
        caught &= match shift_into_neighbor(&p, i, 0.01) {
            Some((m, j)) => verify_placement(&m)?.failures.iter().any(|f| {
                matches!(f, PackingFailure::Overlap { first, second, .. }
                    if (*first, *second) == (i.min(j), i.max(j)))
            }),
            None => false,
        };
    }
    rep.flag("every shifted piece is caught", caught);
    Ok(rep)
}
