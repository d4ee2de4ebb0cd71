//! Tagged toric-domain descriptions and their JSON form.
//!
//! ```text
//! {"ball": 4}
//! {"ellipsoid": [4, 5.196]}
//! {"polydisk": [4, 4]}
//! {"concave": "omega0:8192", "k_weights": 300}
//! {"concave": "triangle:2:3"}
//! {"concave": {"vertices": [[0, 3], [2, 0]]}}
//! {"union": [{"ball": 1}, {"ball": 1}]}
//! ```

use serde_json::{json, Value};

use crate::capacities::{
    ball_caps, concave_caps_with, ellipsoid_caps, polydisk_caps, union_caps, CapacitySequence,
};
use crate::error::{Error, Result};
use crate::geometry::{sample_omega0, ConcaveRegion, Point2};

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Ball(f64),
    Ellipsoid(f64, f64),
    Polydisk(f64, f64),
    Concave { region: ConcaveRegion, k_weights: Option<usize> },
    Union(Vec<DomainSpec>),
}

fn invalid(m: impl Into<String>) -> Error {
    Error::InvalidInput(m.into())
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| invalid(format!("{what}: expected a number, got {v}")))
}

fn pair(v: &Value, what: &str) -> Result<(f64, f64)> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((positive(what, number(a, what)?)?, positive(what, number(b, what)?)?)),
        _ => Err(invalid(format!("{what}: expected [a, b], got {v}"))),
    }
}

/// Parses a region literal: `"omega0:n"`, `"triangle:a:b"` or
/// `{"vertices": [[x, y], ...]}`.
pub fn parse_region(v: &Value) -> Result<ConcaveRegion> {
    if let Some(s) = v.as_str() {
        return parse_region_literal(s);
    }
    let verts = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("region needs a \"vertices\" array"))?;
    let pts = verts
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok(Point2::new(number(x, "vertex")?, number(y, "vertex")?)),
            _ => Err(invalid(format!("vertex must be [x, y], got {p}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    ConcaveRegion::new(pts)
}

/// Parses the builtin string forms `omega0:n` and `triangle:a:b`.
pub fn parse_region_literal(s: &str) -> Result<ConcaveRegion> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["omega0", n] => {
            let n: usize = n.parse().map_err(|_| invalid(format!("bad sample count in {s}")))?;
            sample_omega0(n)
        }
        ["triangle", a, b] => {
            let a: f64 = a.parse().map_err(|_| invalid(format!("bad leg in {s}")))?;
            let b: f64 = b.parse().map_err(|_| invalid(format!("bad leg in {s}")))?;
            ConcaveRegion::triangle(positive("leg", a)?, positive("leg", b)?)
        }
        _ => Err(invalid(format!("unknown region literal `{s}`"))),
    }
}

pub fn region_to_json(r: &ConcaveRegion) -> Value {
    json!({ "vertices": r.vertices().iter().map(|p| vec![p.x, p.y]).collect::<Vec<_>>() })
}

impl DomainSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| invalid(format!("domain must be an object, got {v}")))?;
        let key = ["ball", "ellipsoid", "polydisk", "concave", "union"]
            .into_iter()
            .find(|k| obj.contains_key(*k))
            .ok_or_else(|| invalid(format!("unknown domain {v}")))?;
        let allowed = if key == "concave" { 2 } else { 1 };
        if obj.len() > allowed || (obj.len() == 2 && !obj.contains_key("k_weights")) {
            return Err(invalid(format!("unexpected keys in {v}")));
        }
        let body = &obj[key];
        Ok(match key {
            "ball" => Self::Ball(positive("ball", number(body, "ball")?)?),
            "ellipsoid" => {
                let (a, b) = pair(body, "ellipsoid")?;
                Self::Ellipsoid(a, b)
            }
            "polydisk" => {
                let (a, b) = pair(body, "polydisk")?;
                Self::Polydisk(a, b)
            }
            "concave" => {
                let k_weights = match obj.get("k_weights") {
                    None => None,
                    Some(k) => Some(
                        k.as_u64()
                            .filter(|&k| k >= 1)
                            .ok_or_else(|| invalid("k_weights must be a positive integer"))?
                            as usize,
                    ),
                };
                Self::Concave { region: parse_region(body)?, k_weights }
            }
            _ => {
                let parts = body.as_array().ok_or_else(|| invalid("union must be a list"))?;
                if parts.is_empty() {
                    return Err(invalid("union must be non-empty"));
                }
                Self::Union(parts.iter().map(Self::from_json).collect::<Result<_>>()?)
            }
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| invalid(format!("bad JSON: {e}")))?;
        Self::from_json(&v)
    }

    /// Capacities `c_0..=c_K`.
    pub fn capacities(&self, k_max: usize) -> Result<CapacitySequence> {
        match self {
            Self::Ball(a) => ball_caps(*a, k_max),
            Self::Ellipsoid(a, b) => ellipsoid_caps(*a, *b, k_max),
            Self::Polydisk(a, b) => polydisk_caps(*a, *b, k_max),
            Self::Concave { region, k_weights } => {
                concave_caps_with(region, k_max, k_weights.unwrap_or(k_max))
            }
            Self::Union(parts) => {
                let seqs = parts.iter().map(|p| p.capacities(k_max)).collect::<Result<Vec<_>>>()?;
                union_caps(&seqs, k_max)
            }
        }
    }
}
