//! Packing certificates: disjoint right triangles inside a target triangle.
//!
//! A piece is `T(a, b)` moved by an integral linear map of determinant ±1
//! about its right-angle vertex and then translated to `(x0, y0)`. These are
//! exactly the moves that keep the corresponding ellipsoid symplectically
//! unchanged, so any valid placement certifies the ball packing it encodes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Projection overlap below this is treated as contact.
pub const OVERLAP_TOL: f64 = 1e-12;
/// Default clearance from the target boundary.
pub const DEFAULT_MARGIN: f64 = 1e-6;
/// Attempts that reliably recover the shipped nine-piece layout.
pub const DEFAULT_ATTEMPTS: usize = 2000;

const IDENTITY: [[i64; 2]; 2] = [[1, 0], [0, 1]];

fn is_identity(m: &[[i64; 2]; 2]) -> bool {
    *m == IDENTITY
}

fn identity() -> [[i64; 2]; 2] {
    IDENTITY
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedTriangle {
    pub a: f64,
    pub b: f64,
    pub x0: f64,
    pub y0: f64,
    #[serde(default = "identity", skip_serializing_if = "is_identity")]
    pub matrix: [[i64; 2]; 2],
}

impl PlacedTriangle {
    pub fn new(a: f64, b: f64, x0: f64, y0: f64) -> Self {
        Self { a, b, x0, y0, matrix: IDENTITY }
    }

    pub fn with_matrix(mut self, m: [[i64; 2]; 2]) -> Self {
        self.matrix = m;
        self
    }

    /// Right-angle vertex, then the images of the two leg endpoints.
    pub fn vertices(&self) -> [Point2; 3] {
        let m = self.matrix;
        let o = Point2::new(self.x0, self.y0);
        [
            o,
            Point2::new(o.x + self.a * m[0][0] as f64, o.y + self.a * m[1][0] as f64),
            Point2::new(o.x + self.b * m[0][1] as f64, o.y + self.b * m[1][1] as f64),
        ]
    }

    pub fn area(&self) -> f64 {
        0.5 * self.a * self.b
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self { x0: self.x0 + dx, y0: self.y0 + dy, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub c: f64,
    pub d: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrianglePlacement {
    pub target: Target,
    pub pieces: Vec<PlacedTriangle>,
    pub required: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct PlacementFile {
    target: [f64; 3],
    pieces: Vec<PlacedTriangle>,
    required: Vec<[f64; 2]>,
}

impl TrianglePlacement {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: PlacementFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedPlacement(e.to_string()))?;
        Ok(Self {
            target: Target { c: f.target[0], d: f.target[1], margin: f.target[2] },
            pieces: f.pieces,
            required: f.required.into_iter().map(|[a, b]| (a, b)).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let f = PlacementFile {
            target: [self.target.c, self.target.d, self.target.margin],
            pieces: self.pieces.clone(),
            required: self.required.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string_pretty(&f).expect("placement serializes")
    }
}

/// The placement shipped with the crate: nine pieces
/// A×2 = T(0.512, 0.804), B = T(0.627, 0.304), C×2 = T(0.16, 0.23),
/// D×2 = T(0.464, 0.464), E = T(0.304, 0.304), F = T(0.323, 0.304)
/// inside T(1.607, 1.19).
///
/// The A and D pairs form rectangles with one copy rotated by 180°, the
/// C pieces are sheared by `(x, y) ↦ (x − y, y)`; with translations alone the
/// nine pieces do not fit.
pub fn shipped_certificate() -> TrianglePlacement {
    TrianglePlacement::from_json(include_str!("../data/packing_certificate.json"))
        .expect("shipped certificate parses")
}

#[derive(Debug, Clone, PartialEq)]
pub enum PackingFailure {
    /// Some vertex is closer than the margin to the target boundary.
    OutsideTarget { piece: usize, clearance: f64 },
    /// Interiors intersect; `depth` is the smallest projection overlap.
    Overlap { first: usize, second: usize, depth: f64 },
    Undersized { piece: usize, legs: (f64, f64), required: (f64, f64) },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub ok: bool,
    pub failures: Vec<PackingFailure>,
}

fn check_wellformed(p: &TrianglePlacement) -> Result<()> {
    let bad = |m: String| Err(Error::MalformedPlacement(m));
    let t = p.target;
    if !(t.c > 0.0 && t.d > 0.0 && t.c.is_finite() && t.d.is_finite()) {
        return bad(format!("target legs must be positive, got ({}, {})", t.c, t.d));
    }
    if !(t.margin >= 0.0 && t.margin.is_finite()) {
        return bad(format!("margin must be >= 0, got {}", t.margin));
    }
    if p.pieces.is_empty() {
        return bad("no pieces".into());
    }
    if p.required.len() != p.pieces.len() {
        return bad(format!("{} pieces but {} required sizes", p.pieces.len(), p.required.len()));
    }
    for (i, q) in p.pieces.iter().enumerate() {
        if !(q.a > 0.0 && q.b > 0.0 && [q.a, q.b, q.x0, q.y0].iter().all(|v| v.is_finite())) {
            return bad(format!("piece {i} has invalid dimensions or position"));
        }
        let m = q.matrix;
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() != 1 {
            return bad(format!("piece {i} matrix is not unimodular"));
        }
    }
    if p.required.iter().any(|&(a, b)| !(a >= 0.0 && b >= 0.0)) {
        return bad("required sizes must be non-negative".into());
    }
    Ok(())
}

/// Smallest distance from a vertex of `q` to the target's three sides,
/// negative when outside.
pub fn clearance(q: &PlacedTriangle, c: f64, d: f64) -> f64 {
    let norm = c.hypot(d);
    q.vertices()
        .iter()
        .map(|v| v.x.min(v.y).min((c * d - d * v.x - c * v.y) / norm))
        .fold(f64::INFINITY, f64::min)
}

fn project(tri: &[Point2; 3], n: (f64, f64)) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in tri {
        let s = v.x * n.0 + v.y * n.1;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

fn axes(tri: &[Point2; 3]) -> [(f64, f64); 3] {
    let mut out = [(0.0, 0.0); 3];
    for k in 0..3 {
        let (p, q) = (tri[k], tri[(k + 1) % 3]);
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        let len = dx.hypot(dy);
        out[k] = (-dy / len, dx / len);
    }
    out
}

/// Separating-axis test: the smallest overlap of the projections over all
/// edge normals, together with that axis. Non-positive means the triangles
/// are separated (or touch).
fn sat(t1: &[Point2; 3], t2: &[Point2; 3]) -> (f64, (f64, f64)) {
    let mut best = (f64::INFINITY, (0.0, 0.0));
    for n in axes(t1).into_iter().chain(axes(t2)) {
        let (a0, a1) = project(t1, n);
        let (b0, b1) = project(t2, n);
        let depth = a1.min(b1) - a0.max(b0);
        if depth < best.0 {
            best = (depth, n);
        }
    }
    best
}

/// Overlap depth of two placed triangles as seen by the separating-axis test.
pub fn overlap_depth(p: &PlacedTriangle, q: &PlacedTriangle) -> f64 {
    sat(&p.vertices(), &q.vertices()).0
}

/// Checks containment with clearance, pairwise disjointness and leg sizes.
pub fn verify_placement(p: &TrianglePlacement) -> Result<VerifyReport> {
    check_wellformed(p)?;
    let t = p.target;
    let mut failures = Vec::new();
    for (i, q) in p.pieces.iter().enumerate() {
        let c = clearance(q, t.c, t.d);
        if c < t.margin {
            failures.push(PackingFailure::OutsideTarget { piece: i, clearance: c });
        }
    }
    let verts: Vec<[Point2; 3]> = p.pieces.iter().map(PlacedTriangle::vertices).collect();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let (depth, _) = sat(&verts[i], &verts[j]);
            if depth > OVERLAP_TOL {
                failures.push(PackingFailure::Overlap { first: i, second: j, depth });
            }
        }
    }
    for (i, (q, &r)) in p.pieces.iter().zip(&p.required).enumerate() {
        if q.a < r.0 || q.b < r.1 {
            failures.push(PackingFailure::Undersized { piece: i, legs: (q.a, q.b), required: r });
        }
    }
    Ok(VerifyReport { ok: failures.is_empty(), failures })
}

/// Necessary area condition `Σ aᵢbᵢ/2 <= cd/2`.
pub fn area_necessary(p: &TrianglePlacement) -> bool {
    let used: f64 = p.pieces.iter().map(PlacedTriangle::area).sum();
    used <= 0.5 * p.target.c * p.target.d
}

/// Shifts piece `i` along the separating axis toward its nearest neighbour
/// until the two overlap by `depth`. Returns the mutated placement and the
/// neighbour index, trying neighbours in order of increasing gap.
pub fn shift_into_neighbor(
    p: &TrianglePlacement,
    i: usize,
    depth: f64,
) -> Option<(TrianglePlacement, usize)> {
    let vi = p.pieces.get(i)?.vertices();
    let mut others: Vec<(f64, usize, (f64, f64))> = p
        .pieces
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, q)| {
            let vj = q.vertices();
            // the axis with the widest separation, oriented from i toward j
            let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
            for n in axes(&vi).into_iter().chain(axes(&vj)) {
                let (a0, a1) = project(&vi, n);
                let (b0, b1) = project(&vj, n);
                let (ahead, behind) = (b0 - a1, a0 - b1);
                if ahead.max(behind) > best.0 {
                    best = if ahead >= behind { (ahead, n) } else { (behind, (-n.0, -n.1)) };
                }
            }
            (best.0, j, best.1)
        })
        .collect();
    others.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    for (gap, j, n) in others {
        let shift = gap.max(0.0) + depth;
        let mut q = p.clone();
        q.pieces[i] = p.pieces[i].translated(shift * n.0, shift * n.1);
        if overlap_depth(&q.pieces[i], &q.pieces[j]) > OVERLAP_TOL {
            return Some((q, j));
        }
    }
    None
}

const ORIENTATIONS: [[[i64; 2]; 2]; 8] = [
    [[1, 0], [0, 1]],
    [[-1, 0], [0, -1]],
    [[0, 1], [1, 0]],
    [[0, -1], [-1, 0]],
    [[1, -1], [0, 1]],
    [[-1, 1], [0, -1]],
    [[1, 0], [-1, 1]],
    [[-1, 0], [1, -1]],
];

fn potential(v: &Point2, c: f64, d: f64) -> f64 {
    v.x / c + v.y / d
}

/// A group of pieces placed together: a lone triangle, or two equal
/// triangles glued along their hypotenuse into a rectangle.
#[derive(Clone)]
struct Unit {
    parts: Vec<(usize, PlacedTriangle)>,
}

impl Unit {
    fn translated(&self, dx: f64, dy: f64) -> Self {
        Self { parts: self.parts.iter().map(|(i, q)| (*i, q.translated(dx, dy))).collect() }
    }

    fn vertices(&self) -> impl Iterator<Item = Point2> + '_ {
        self.parts.iter().flat_map(|(_, q)| q.vertices())
    }

    fn feasible(&self, placed: &[PlacedTriangle], t: Target) -> bool {
        self.parts.iter().all(|(_, q)| {
            clearance(q, t.c, t.d) >= t.margin
                && placed.iter().all(|o| overlap_depth(q, o) <= OVERLAP_TOL)
        })
    }
}

fn lone(idx: usize, (a, b): (f64, f64), m: [[i64; 2]; 2]) -> Unit {
    Unit { parts: vec![(idx, PlacedTriangle::new(a, b, 0.0, 0.0).with_matrix(m))] }
}

fn glued(first: usize, second: usize, (a, b): (f64, f64), swap: bool) -> Unit {
    let m = if swap { [[0, 1], [1, 0]] } else { IDENTITY };
    let neg = [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]];
    let base = PlacedTriangle::new(a, b, 0.0, 0.0).with_matrix(m);
    let far = base.vertices()[1].x.max(base.vertices()[2].x);
    let top = base.vertices()[1].y.max(base.vertices()[2].y);
    let copy = PlacedTriangle::new(a, b, far, top).with_matrix(neg);
    Unit { parts: vec![(first, base), (second, copy)] }
}

/// Largest feasible shift along `dir`, found by marching then bisecting.
fn slide(u: &Unit, dir: (f64, f64), placed: &[PlacedTriangle], t: Target) -> f64 {
    let step = 0.02 * t.c.min(t.d);
    let ok = |s: f64| u.translated(s * dir.0, s * dir.1).feasible(placed, t);
    let mut lo = 0.0;
    let mut hi = step;
    while ok(hi) {
        lo = hi;
        hi += step;
        if hi > 2.0 * t.c.max(t.d) {
            return lo;
        }
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn settle(mut u: Unit, placed: &[PlacedTriangle], t: Target) -> Unit {
    for _ in 0..6 {
        let dy = slide(&u, (0.0, -1.0), placed, t);
        u = u.translated(0.0, -dy);
        let dx = slide(&u, (-1.0, 0.0), placed, t);
        u = u.translated(-dx, 0.0);
        if dx + dy < 1e-12 {
            break;
        }
    }
    u
}

fn build_units(required: &[(f64, f64)], glue: &[bool]) -> Vec<Vec<Unit>> {
    let n = required.len();
    let mut used = vec![false; n];
    let mut units = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (i + 1..n).find(|&j| !used[j] && required[j] == required[i]);
        match partner {
            Some(j) if glue[i] => {
                used[j] = true;
                units.push(vec![glued(i, j, required[i], false), glued(i, j, required[i], true)]);
            }
            _ => units.push(ORIENTATIONS.iter().map(|&m| lone(i, required[i], m)).collect()),
        }
    }
    units
}

fn greedy_attempt(
    required: &[(f64, f64)],
    target: Target,
    rng: &mut ChaCha8Rng,
    attempt: usize,
) -> Option<Vec<PlacedTriangle>> {
    let n = required.len();
    let mut glue = vec![true; n];
    let mut jitter = vec![1.0; n];
    let mut mix = 1.0;
    if attempt > 0 {
        for i in 0..n {
            glue[i] = rng.gen_bool(0.8);
            jitter[i] = 1.0 + rng.gen_range(0.0..0.8);
        }
        mix = rng.gen_range(0.0..1.0);
    }
    let mut units = build_units(required, &glue);
    let size = |u: &Vec<Unit>| u[0].parts.iter().map(|(i, q)| q.area() * jitter[*i]).sum::<f64>();
    units.sort_by(|x, y| size(y).total_cmp(&size(x)).then(x[0].parts[0].0.cmp(&y[0].parts[0].0)));
    let g = target.margin + 1e-9;
    let far = 1.0 - 1e-9;
    let mut placed: Vec<PlacedTriangle> = Vec::with_capacity(n);
    let mut slots = vec![None; n];
    for mut options in units {
        if attempt > 0 {
            options.shuffle(rng);
            let keep = rng.gen_range(1..=options.len());
            options.truncate(keep);
        }
        let mut anchors = vec![Point2::new(g, g), Point2::new(far * target.c, g), Point2::new(g, far * target.d)];
        for q in &placed {
            for v in q.vertices() {
                anchors.push(v);
                anchors.push(Point2::new(v.x, g));
                anchors.push(Point2::new(g, v.y));
            }
        }
        let mut best: Option<(f64, Unit)> = None;
        for proto in &options {
            let offsets: Vec<Point2> = proto.vertices().collect();
            for anchor in &anchors {
                for w in &offsets {
                    let cand = proto.translated(anchor.x - w.x, anchor.y - w.y);
                    if !cand.feasible(&placed, target) {
                        continue;
                    }
                    let cand = settle(cand, &placed, target);
                    let pot: Vec<f64> = cand.vertices().map(|v| potential(&v, target.c, target.d)).collect();
                    let reach = pot.iter().copied().fold(0.0, f64::max);
                    let centre = pot.iter().sum::<f64>() / pot.len() as f64;
                    let score = mix * reach + (1.0 - mix) * centre;
                    if best.as_ref().is_none_or(|(s, _)| score < *s) {
                        best = Some((score, cand));
                    }
                }
            }
        }
        let (_, u) = best?;
        for (i, q) in u.parts {
            placed.push(q);
            slots[i] = Some(q);
        }
    }
    slots.into_iter().collect()
}

/// Randomized bottom-left greedy placement over the eight lattice
/// orientations of each piece. Attempt 0 is deterministic (largest first);
/// later attempts perturb the order, orientation preference and score.
pub fn greedy_search(
    required: &[(f64, f64)],
    target: (f64, f64),
    attempts: usize,
    seed: u64,
) -> Result<TrianglePlacement> {
    if attempts == 0 {
        return Err(Error::InvalidInput("need at least one attempt".into()));
    }
    let t = Target { c: target.0, d: target.1, margin: DEFAULT_MARGIN };
    if required.is_empty() || required.iter().any(|&(a, b)| !(a > 0.0 && b > 0.0)) {
        return Err(Error::InvalidInput("required sizes must be positive and non-empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..attempts {
        if let Some(pieces) = greedy_attempt(required, t, &mut rng, attempt) {
            let placement = TrianglePlacement { target: t, pieces, required: required.to_vec() };
            if verify_placement(&placement)?.ok {
                return Ok(placement);
            }
        }
    }
    Err(Error::SearchFailed { attempts })
}

/// Leg sizes of the nine pieces in [`shipped_certificate`].
pub fn nine_piece_sizes() -> Vec<(f64, f64)> {
    vec![
        (0.512, 0.804),
        (0.512, 0.804),
        (0.627, 0.304),
        (0.16, 0.23),
        (0.16, 0.23),
        (0.464, 0.464),
        (0.464, 0.464),
        (0.304, 0.304),
        (0.323, 0.304),
    ]
}
