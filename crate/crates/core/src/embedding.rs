//! Embedding verdicts: capacity obstructions, the sharp closed-form criteria
//! for the lagrangian bidisk, inclusion tests and the explicit map into P(4,4).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacities::dominates;
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::geometry::{min_functional, ConcaveRegion};

/// 3√3, the ball threshold.
pub const THREE_SQRT3: f64 = 5.196152422706632;
/// c₁ of the bidisk.
pub const FOUR: f64 = 4.0;
/// Slack used by [`contains_ellipsoid`].
pub const INCLUSION_TOL: f64 = 1e-9;
/// Tolerance for `JᵀΩJ = Ω` and image containment.
pub const SYMPLECTIC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embeds {
    Yes,
    No,
    ObstructionFree,
}

impl Embeds {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Yes => "yes",
            Self::No => "no",
            Self::ObstructionFree => "obstruction-free",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Index(usize),
    Construction(&'static str),
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVerdict {
    pub embeds: Embeds,
    pub witness: Witness,
}

impl EmbeddingVerdict {
    fn closed_form(yes: bool) -> Self {
        Self {
            embeds: if yes { Embeds::Yes } else { Embeds::No },
            witness: Witness::Construction("closed-form criterion"),
        }
    }

    pub fn witness_k(&self) -> Option<usize> {
        match self.witness {
            Witness::Index(k) => Some(k),
            _ => None,
        }
    }

    pub fn criterion(&self) -> &'static str {
        match self.witness {
            Witness::Index(_) => "capacity obstruction",
            Witness::Construction(c) => c,
            Witness::None => "none",
        }
    }
}

/// Compares `c_k` for `k <= K`. Never answers "yes": capacities only give
/// necessary conditions.
pub fn obstruct(
    source: &DomainSpec,
    target: &DomainSpec,
    k_max: usize,
    slack: f64,
) -> Result<EmbeddingVerdict> {
    let s = source.capacities(k_max)?;
    let t = target.capacities(k_max)?;
    Ok(match dominates(&t, &s, slack)? {
        (true, _) => EmbeddingVerdict { embeds: Embeds::ObstructionFree, witness: Witness::None },
        (false, k) => EmbeddingVerdict {
            embeds: Embeds::No,
            witness: k.map_or(Witness::None, Witness::Index),
        },
    })
}

/// Sharp answer for `int(P_L) ↪ target` with a ball, ellipsoid or polydisk target.
pub fn verdict_bidisk_into(target: &DomainSpec) -> Result<EmbeddingVerdict> {
    let pos = |v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidInput(format!("target parameter must be positive, got {v}")))
        }
    };
    let yes = match *target {
        DomainSpec::Ball(a) => pos(a)? >= THREE_SQRT3,
        DomainSpec::Ellipsoid(a, b) => {
            let (a, b) = (pos(a)?, pos(b)?);
            a.min(b) >= FOUR && a.max(b) >= THREE_SQRT3
        }
        DomainSpec::Polydisk(a, b) => pos(a)? >= FOUR && pos(b)? >= FOUR,
        _ => {
            return Err(Error::InvalidInput(
                "closed form covers ball, ellipsoid and polydisk targets only".into(),
            ))
        }
    };
    Ok(EmbeddingVerdict::closed_form(yes))
}

/// Sharp answer for `int(E(ratio·b, b)) ↪ int(P_L)` with ratio 1 or 2.
pub fn verdict_ellipsoid_into_bidisk(ratio: u32, b: f64) -> Result<EmbeddingVerdict> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidInput(format!("b must be positive, got {b}")));
    }
    match ratio {
        1 => Ok(EmbeddingVerdict::closed_form(b <= FOUR)),
        2 => Ok(EmbeddingVerdict::closed_form(2.0 * b <= THREE_SQRT3)),
        r => Err(Error::InvalidInput(format!("ratio must be 1 or 2, got {r}"))),
    }
}

/// `min over the chain of x/a + y/b`; at least 1 means T(a, b) lies under it.
pub fn ellipsoid_margin(r: &ConcaveRegion, a: f64, b: f64) -> f64 {
    min_functional(r, 1.0 / a, 1.0 / b).0
}

/// True when the triangle T(a, b) lies under the chain, so that
/// `E(a, b) ⊂ X_Ω`.
pub fn contains_ellipsoid(r: &ConcaveRegion, a: f64, b: f64) -> bool {
    a > 0.0 && b > 0.0 && ellipsoid_margin(r, a, b) >= 1.0 - INCLUSION_TOL
}

/// The map `(p₁, q₁, p₂, q₂) ↦ (Re z₁, Im z₁, Re z₂, Im z₂)` with
/// `z_j = √(2(p_j+1)/π)·e^{iπ(q_j+1)}`.
pub fn explicit_map(x: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for j in 0..2 {
        let (p, q) = (x[2 * j], x[2 * j + 1]);
        let r = (2.0 * (p + 1.0) / PI).sqrt();
        let (s, c) = (PI * (q + 1.0)).sin_cos();
        out[2 * j] = r * c;
        out[2 * j + 1] = r * s;
    }
    out
}

/// Central-difference Jacobian of [`explicit_map`]. The p-steps shrink with
/// `1 + p` to stay clear of the square-root branch point at `p = −1`.
pub fn explicit_map_jacobian(x: [f64; 4]) -> [[f64; 4]; 4] {
    let mut jac = [[0.0; 4]; 4];
    for col in 0..4 {
        let h = if col % 2 == 0 { 1e-5 * (1.0 + x[col]) } else { 1e-5 };
        let (mut xp, mut xm) = (x, x);
        xp[col] += h;
        xm[col] -= h;
        let (fp, fm) = (explicit_map(xp), explicit_map(xm));
        for row in 0..4 {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    jac
}

/// Largest entry of `JᵀΩJ − Ω` with Ω block-diagonal `[[0, 1], [−1, 0]]`.
pub fn symplectic_residual(jac: &[[f64; 4]; 4]) -> f64 {
    let omega = |i: usize, j: usize| -> f64 {
        match (i, j) {
            (0, 1) | (2, 3) => 1.0,
            (1, 0) | (3, 2) => -1.0,
            _ => 0.0,
        }
    };
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    s += jac[k][i] * omega(k, l) * jac[l][j];
                }
            }
            worst = worst.max((s - omega(i, j)).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSample {
    pub point: [f64; 4],
    /// `(π|z₁|², π|z₂|²)`.
    pub moment: (f64, f64),
    pub residual: f64,
}

impl MapSample {
    pub fn passes(&self) -> bool {
        self.moment.0 <= FOUR && self.moment.1 <= FOUR && self.residual <= SYMPLECTIC_TOL
    }
}

pub fn check_map_point(point: [f64; 4]) -> MapSample {
    let z = explicit_map(point);
    let moment = (PI * (z[0] * z[0] + z[1] * z[1]), PI * (z[2] * z[2] + z[3] * z[3]));
    MapSample { point, moment, residual: symplectic_residual(&explicit_map_jacobian(point)) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapReport {
    pub samples: usize,
    pub max_residual: f64,
    pub max_moment: f64,
    pub failures: Vec<MapSample>,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn disk_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if a * a + b * b < 1.0 {
            return (a, b);
        }
    }
}

/// Samples `int(P_L) = {|q| < 1, |p| < 1}` and checks the explicit map on each point.
pub fn explicit_map_check(samples: usize, seed: u64) -> Result<MapReport> {
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MapReport { samples, max_residual: 0.0, max_moment: 0.0, failures: Vec::new() };
    for _ in 0..samples {
        let (p1, p2) = disk_point(&mut rng);
        let (q1, q2) = disk_point(&mut rng);
        let s = check_map_point([p1, q1, p2, q2]);
        report.max_residual = report.max_residual.max(s.residual);
        report.max_moment = report.max_moment.max(s.moment.0).max(s.moment.1);
        if !s.passes() {
            report.failures.push(s);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_omega0;
    use proptest::prelude::*;

    #[test]
    fn threshold_constant() {
        assert_eq!(THREE_SQRT3, 3.0 * 3f64.sqrt());
    }

    #[test]
    fn closed_forms() {
        let v = |d: DomainSpec| verdict_bidisk_into(&d).unwrap().embeds;
        assert_eq!(v(DomainSpec::Ball(THREE_SQRT3)), Embeds::Yes);
        assert_eq!(v(DomainSpec::Ball(5.19)), Embeds::No);
        assert_eq!(v(DomainSpec::Ellipsoid(4.5, 5.0)), Embeds::No);
        assert_eq!(v(DomainSpec::Ellipsoid(5.2, 4.0)), Embeds::Yes);
        assert_eq!(v(DomainSpec::Polydisk(4.0, 100.0)), Embeds::Yes);
        assert_eq!(v(DomainSpec::Polydisk(3.99, 100.0)), Embeds::No);
        assert!(verdict_bidisk_into(&DomainSpec::Union(vec![DomainSpec::Ball(1.0)])).is_err());
        assert!(verdict_bidisk_into(&DomainSpec::Ball(-1.0)).is_err());
    }

    #[test]
    fn ellipsoids_into_bidisk() {
        assert_eq!(verdict_ellipsoid_into_bidisk(1, 4.0).unwrap().embeds, Embeds::Yes);
        assert_eq!(verdict_ellipsoid_into_bidisk(1, 4.01).unwrap().embeds, Embeds::No);
        assert_eq!(verdict_ellipsoid_into_bidisk(2, THREE_SQRT3 / 2.0).unwrap().embeds, Embeds::Yes);
        assert_eq!(verdict_ellipsoid_into_bidisk(2, 2.7).unwrap().embeds, Embeds::No);
        assert!(verdict_ellipsoid_into_bidisk(3, 1.0).is_err());
        assert!(verdict_ellipsoid_into_bidisk(1, 0.0).is_err());
    }

    #[test]
    fn capacity_obstructions() {
        let omega = DomainSpec::Concave { region: sample_omega0(8192).unwrap(), k_weights: None };
        let v = obstruct(&omega, &DomainSpec::Ball(5.0), 10, 1e-9).unwrap();
        assert_eq!((v.embeds, v.witness_k()), (Embeds::No, Some(2)));
        let v = obstruct(&omega, &DomainSpec::Ellipsoid(4.0, THREE_SQRT3), 60, 1e-6).unwrap();
        assert_eq!(v.embeds, Embeds::ObstructionFree);
        let v = obstruct(&DomainSpec::Ball(1.0), &DomainSpec::Ball(1.0), 20, 0.0).unwrap();
        assert_eq!(v.embeds, Embeds::ObstructionFree);
    }

    #[test]
    fn inclusions() {
        assert!(contains_ellipsoid(&ConcaveRegion::triangle(1.0, 1.0).unwrap(), 1.0, 1.0));
        let r = sample_omega0(8192).unwrap();
        assert!(contains_ellipsoid(&r, 4.0, 4.0));
        assert!(!contains_ellipsoid(&r, 4.01, 4.01));
        assert!(contains_ellipsoid(&r, THREE_SQRT3, THREE_SQRT3 / 2.0));
        assert!((ellipsoid_margin(&r, THREE_SQRT3, THREE_SQRT3 / 2.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn map_points() {
        let s = check_map_point([0.0; 4]);
        assert!((s.moment.0 - 2.0).abs() < 1e-14);
        assert!(s.passes());
        let s = check_map_point([0.9, 0.9, -0.9, -0.9]);
        assert!((s.moment.0 - 3.8).abs() < 1e-12);
        assert!((s.moment.1 - 0.2).abs() < 1e-12);
        assert!(s.passes());
        let s = check_map_point([-0.999999, 0.3, 0.999999, -0.7]);
        assert!(s.passes(), "{s:?}");
    }

    #[test]
    fn random_samples_pass() {
        let r = explicit_map_check(300, 7).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(r.max_moment < 4.0);
        assert_eq!(explicit_map_check(300, 7).unwrap(), r);
        assert!(explicit_map_check(0, 1).is_err());
    }

    #[test]
    fn residual_detects_non_symplectic_maps() {
        let mut jac = [[0.0; 4]; 4];
        for (i, row) in jac.iter_mut().enumerate() {
            row[i] = 2.0;
        }
        assert!((symplectic_residual(&jac) - 3.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn inclusion_is_monotone(a in 0.5..6.0f64, b in 0.5..6.0f64, s in 0.1..1.0f64, t in 0.1..1.0f64) {
            let r = sample_omega0(512).unwrap();
            if contains_ellipsoid(&r, a, b) {
                prop_assert!(contains_ellipsoid(&r, s * a, t * b));
            }
        }
    }
}
