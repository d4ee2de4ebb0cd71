//! ECH capacity sequences: ellipsoids, polydisks, disjoint unions and
//! concave toric domains.

use crate::error::{Error, Result};
use crate::geometry::ConcaveRegion;
use crate::weights::weight_sequence;

/// Prefix `c_0..=c_K` of an ECH capacity sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitySequence {
    values: Vec<f64>,
}

impl CapacitySequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidInput("capacity sequence needs c_0 and c_1".into()));
        }
        if values[0] != 0.0 || !(values[1] > 0.0) {
            return Err(Error::InvalidInput("capacity sequence must have c_0 = 0 < c_1".into()));
        }
        if values.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidInput("capacity sequence must be non-decreasing".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    fn truncated(&self, k_max: usize) -> Result<Self> {
        if self.k_max() < k_max {
            return Err(Error::InvalidInput(format!(
                "sequence known up to k = {}, need {k_max}",
                self.k_max()
            )));
        }
        Ok(Self { values: self.values[..=k_max].to_vec() })
    }
}

fn check_scale(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value: v, range: "(0, ∞)".into() })
    }
}

fn check_k(k_max: usize) -> Result<()> {
    if k_max >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidInput("K must be at least 1".into()))
    }
}

/// `c_k(E(a, b))`: the (k+1)-th smallest of `{ma + nb}` with multiplicity.
pub fn ellipsoid_caps(a: f64, b: f64, k_max: usize) -> Result<CapacitySequence> {
    check_scale("a", a)?;
    check_scale("b", b)?;
    check_k(k_max)?;
    // c_K <= K·min(a, b), so lattice points with m > K or n > K never enter
    let mut vals = Vec::with_capacity((k_max + 1) * (k_max + 1));
    for m in 0..=k_max {
        for n in 0..=k_max {
            vals.push(m as f64 * a + n as f64 * b);
        }
    }
    vals.sort_by(f64::total_cmp);
    vals.truncate(k_max + 1);
    CapacitySequence::new(vals)
}

/// `c_k(B(a))` through the closed form `d·a` with `d` minimal such that
/// `d(d+3)/2 >= k`.
pub fn ball_caps(a: f64, k_max: usize) -> Result<CapacitySequence> {
    check_scale("a", a)?;
    check_k(k_max)?;
    let mut vals = Vec::with_capacity(k_max + 1);
    let mut d = 0usize;
    for k in 0..=k_max {
        while d * (d + 3) / 2 < k {
            d += 1;
        }
        vals.push(d as f64 * a);
    }
    CapacitySequence::new(vals)
}

/// `c_k(P(a, b)) = min{am + bn : (m+1)(n+1) >= k+1}`.
pub fn polydisk_caps(a: f64, b: f64, k_max: usize) -> Result<CapacitySequence> {
    check_scale("a", a)?;
    check_scale("b", b)?;
    check_k(k_max)?;
    let vals = (0..=k_max)
        .map(|k| {
            (0..=k)
                .map(|m| {
                    let n = (k + 1).div_ceil(m + 1) - 1;
                    m as f64 * a + n as f64 * b
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    CapacitySequence::new(vals)
}

fn max_plus(x: &[f64], y: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|k| (0..=k).map(|j| x[j] + y[k - j]).fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

/// Capacities of a disjoint union: `c_k = max Σ c_{k_i}` over `Σ k_i = k`.
pub fn union_caps(parts: &[CapacitySequence], k_max: usize) -> Result<CapacitySequence> {
    check_k(k_max)?;
    let (head, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidInput("union needs at least one part".into()))?;
    let mut acc = head.truncated(k_max)?.values;
    for p in rest {
        acc = max_plus(&acc, &p.truncated(k_max)?.values);
    }
    CapacitySequence::new(acc)
}

/// Capacities of the concave toric domain over `r` from its `K` largest
/// weights, each contributing a ball.
pub fn concave_caps(r: &ConcaveRegion, k_max: usize) -> Result<CapacitySequence> {
    concave_caps_with(r, k_max, k_max)
}

/// As [`concave_caps`] but extracting `k_weights` weights.
pub fn concave_caps_with(
    r: &ConcaveRegion,
    k_max: usize,
    k_weights: usize,
) -> Result<CapacitySequence> {
    check_k(k_max)?;
    let w = weight_sequence(r, k_weights.max(1), 0.0)?;
    let balls = w
        .weights
        .iter()
        .map(|&x| ball_caps(x, k_max))
        .collect::<Result<Vec<_>>>()?;
    union_caps(&balls, k_max)
}

/// Checks `source.c_k <= target.c_k + slack` for all k, returning the
/// smallest violating index.
pub fn dominates(
    target: &CapacitySequence,
    source: &CapacitySequence,
    slack: f64,
) -> Result<(bool, Option<usize>)> {
    if target.k_max() != source.k_max() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: K = {} vs {}",
            target.k_max(),
            source.k_max()
        )));
    }
    let bad = (0..=target.k_max()).find(|&k| source.get(k) > target.get(k) + slack);
    Ok((bad.is_none(), bad))
}
