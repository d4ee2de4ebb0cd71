//! Weight expansion of concave regions: cut the largest inscribed triangle,
//! shear the two corner remainders back onto the axes, repeat.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{min_functional, region_area, ConcaveRegion, Point2};

/// Regions below this area are treated as fully expanded.
pub const AREA_MIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    pub weights: Vec<f64>,
    /// The count limit stopped extraction while unexpanded regions remained.
    pub truncated: bool,
    pub count_requested: usize,
}

impl WeightSequence {
    /// Σ wᵢ²/2, the area covered by the extracted triangles.
    pub fn area_covered(&self) -> f64 {
        self.weights.iter().map(|w| 0.5 * w * w).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionOptions {
    pub area_min: f64,
    pub w_min: f64,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        Self { area_min: AREA_MIN, w_min: 0.0 }
    }
}

/// Size of the largest triangle T(a) inside `r`, with the contact range.
pub fn largest_triangle(r: &ConcaveRegion) -> Result<(f64, usize, usize)> {
    let area = region_area(r);
    if area < AREA_MIN {
        return Err(Error::Exhausted { area, area_min: AREA_MIN });
    }
    Ok(min_functional(r, 1.0, 1.0))
}

/// Removes T(a) from `r` and normalizes the two corner pieces.
///
/// The upper piece keeps vertices `0..=first` and is mapped by
/// `(x, y) ↦ (x, x + y − a)`; the lower piece keeps `last..` and is mapped by
/// `(x, y) ↦ (x + y − a, y)`. The contact vertices are snapped onto the axes.
pub fn split_region(
    r: &ConcaveRegion,
    a: f64,
    first: usize,
    last: usize,
) -> Result<(Option<ConcaveRegion>, Option<ConcaveRegion>)> {
    let v = r.vertices();
    if first > last || last >= v.len() {
        return Err(Error::InvalidInput(format!("bad contact range {first}..={last}")));
    }
    let upper = if first == 0 {
        None
    } else {
        let mut chain: Vec<Point2> =
            v[..=first].iter().map(|p| Point2::new(p.x, p.x + p.y - a)).collect();
        chain[first].y = 0.0;
        Some(ConcaveRegion::new(chain)?)
    };
    let lower = if last == v.len() - 1 {
        None
    } else {
        let mut chain: Vec<Point2> =
            v[last..].iter().map(|p| Point2::new(p.x + p.y - a, p.y)).collect();
        chain[0].x = 0.0;
        Some(ConcaveRegion::new(chain)?)
    };
    Ok((upper, lower))
}

struct Entry {
    weight: f64,
    seq: u64,
    region: ConcaveRegion,
    first: usize,
    last: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // larger weight first, then the entry created earlier
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.total_cmp(&other.weight).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// The `k` largest weights of `r`, stopping branches below `w_min`.
pub fn weight_sequence(r: &ConcaveRegion, k: usize, w_min: f64) -> Result<WeightSequence> {
    weight_sequence_with(r, k, ExpansionOptions { w_min, ..Default::default() })
}

pub fn weight_sequence_with(
    r: &ConcaveRegion,
    k: usize,
    opts: ExpansionOptions,
) -> Result<WeightSequence> {
    if k == 0 {
        return Err(Error::InvalidInput("weight count must be at least 1".into()));
    }
    if !(opts.w_min >= 0.0) {
        return Err(Error::InvalidInput(format!("w_min = {} must be >= 0", opts.w_min)));
    }
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |heap: &mut BinaryHeap<Entry>, region: ConcaveRegion| {
        if region_area(&region) < opts.area_min {
            return;
        }
        let (weight, first, last) = min_functional(&region, 1.0, 1.0);
        if weight <= 0.0 || weight < opts.w_min {
            return;
        }
        heap.push(Entry { weight, seq, region, first, last });
        seq += 1;
    };
    push(&mut heap, r.clone());

    let mut weights = Vec::with_capacity(k.min(1 << 16));
    while weights.len() < k {
        let Some(e) = heap.pop() else { break };
        weights.push(e.weight);
        let (upper, lower) = split_region(&e.region, e.weight, e.first, e.last)?;
        for child in [upper, lower].into_iter().flatten() {
            push(&mut heap, child);
        }
    }
    Ok(WeightSequence { weights, truncated: !heap.is_empty(), count_requested: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_omega0;
    use proptest::prelude::*;

    fn s3() -> f64 {
        3f64.sqrt()
    }

    /// Plain recursion without a priority queue, returning every weight above `floor`.
    fn brute_expansion(r: &ConcaveRegion, floor: f64, out: &mut Vec<f64>) {
        if region_area(r) < AREA_MIN {
            return;
        }
        let (a, i, j) = min_functional(r, 1.0, 1.0);
        if a < floor {
            return;
        }
        out.push(a);
        let v = r.vertices();
        if i > 0 {
            let mut c: Vec<Point2> = v[..=i].iter().map(|p| Point2::new(p.x, p.x + p.y - a)).collect();
            c[i].y = 0.0;
            brute_expansion(&ConcaveRegion::new(c).unwrap(), floor, out);
        }
        if j + 1 < v.len() {
            let mut c: Vec<Point2> = v[j..].iter().map(|p| Point2::new(p.x + p.y - a, p.y)).collect();
            c[0].x = 0.0;
            brute_expansion(&ConcaveRegion::new(c).unwrap(), floor, out);
        }
    }

    #[test]
    fn single_triangle() {
        let r = ConcaveRegion::triangle(1.0, 1.0).unwrap();
        let w = weight_sequence(&r, 5, 0.0).unwrap();
        assert_eq!(w.weights, vec![1.0]);
        assert!(!w.truncated);
        assert_eq!(largest_triangle(&r).unwrap(), (1.0, 0, 1));
        assert_eq!(split_region(&r, 1.0, 0, 1).unwrap(), (None, None));
    }

    #[test]
    fn ellipsoid_four_three_root_three() {
        let r = ConcaveRegion::triangle(4.0, 3.0 * s3()).unwrap();
        let (a, i, j) = largest_triangle(&r).unwrap();
        assert_eq!((a, i, j), (4.0, 1, 1));
        let (up, lo) = split_region(&r, a, i, j).unwrap();
        assert!(lo.is_none());
        let up = up.unwrap();
        assert_eq!(up.vertices(), &[Point2::new(0.0, 3.0 * s3() - 4.0), Point2::new(4.0, 0.0)]);
        let w = weight_sequence(&r, 3, 0.0).unwrap();
        let t = 3.0 * s3() - 4.0;
        assert_eq!(w.weights[0], 4.0);
        assert!((w.weights[1] - t).abs() < 1e-12 && (w.weights[2] - t).abs() < 1e-12);
        assert!(w.truncated);
    }

    #[test]
    fn rational_triangle_terminates() {
        let r = ConcaveRegion::triangle(2.0, 3.0).unwrap();
        let w = weight_sequence(&r, 50, 0.0).unwrap();
        assert_eq!(w.weights, vec![2.0, 1.0, 1.0]);
        assert!(!w.truncated);
        assert!((w.area_covered() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn golden_triangle_matches_recursion() {
        let phi = 0.5 * (1.0 + 5f64.sqrt());
        let r = ConcaveRegion::triangle(1.0, phi).unwrap();
        let w = weight_sequence(&r, 3, 0.0).unwrap();
        let mut brute = Vec::new();
        brute_expansion(&r, 0.3, &mut brute);
        brute.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(w.weights, brute[..3].to_vec());
        assert!((w.weights[1] - (phi - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn omega0_first_weights() {
        let r = sample_omega0(8192).unwrap();
        let (a, i, j) = largest_triangle(&r).unwrap();
        assert!((a - 4.0).abs() < 1e-12);
        assert_eq!(r.vertices()[i], Point2::new(2.0, 2.0));
        assert_eq!(i, j);
        let (up, lo) = split_region(&r, a, i, j).unwrap();
        let (up, lo) = (up.unwrap(), lo.unwrap());
        let t = 3.0 * s3() - 4.0;
        let wu = largest_triangle(&up).unwrap().0;
        let wl = largest_triangle(&lo).unwrap().0;
        assert!((wu - t).abs() < 1e-4);
        assert_eq!(wu, wl);
        let w = weight_sequence(&r, 5, 0.0).unwrap();
        let u = 4.0 * 2f64.sqrt() - 3.0 * s3();
        let expect = [4.0, t, t, u, u];
        for (x, y) in w.weights.iter().zip(expect) {
            assert!((x - y).abs() < 1e-3, "{x} vs {y}");
        }
    }

    #[test]
    fn omega0_pairs_and_coverage() {
        let r = sample_omega0(2048).unwrap();
        let w = weight_sequence(&r, 301, 0.0).unwrap();
        for m in 1..150 {
            assert_eq!(w.weights[2 * m - 1], w.weights[2 * m]);
        }
        assert!(w.area_covered() <= region_area(&r) + 1e-9);
        assert!(w.weights.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn min_weight_stops_branches() {
        let r = sample_omega0(1024).unwrap();
        let w = weight_sequence(&r, 1000, 0.3).unwrap();
        assert!(w.weights.iter().all(|&x| x >= 0.3));
        assert!(!w.truncated);
        assert!(weight_sequence(&r, 0, 0.0).is_err());
        assert!(weight_sequence(&r, 3, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn split_conserves_area_and_shrinks(n in 3usize..300, depth in 0usize..6) {
            let mut r = sample_omega0(n).unwrap();
            for _ in 0..depth {
                let (a, i, j) = largest_triangle(&r).unwrap();
                let (up, lo) = split_region(&r, a, i, j).unwrap();
                let total = 0.5 * a * a
                    + up.as_ref().map_or(0.0, region_area)
                    + lo.as_ref().map_or(0.0, region_area);
                prop_assert!((total - region_area(&r)).abs() <= 1e-9 * region_area(&r));
                for c in [&up, &lo].into_iter().flatten() {
                    prop_assert!(largest_triangle(c).unwrap().0 <= a + 1e-12);
                }
                match up.or(lo) {
                    Some(c) if region_area(&c) > 1e-9 => r = c,
                    _ => break,
                }
            }
        }

        #[test]
        fn rational_triangles_fill_exactly(p in 1u32..9, q in 1u32..9) {
            let r = ConcaveRegion::triangle(p as f64, q as f64).unwrap();
            let w = weight_sequence(&r, 200, 0.0).unwrap();
            prop_assert!(!w.truncated);
            prop_assert!((w.area_covered() - 0.5 * (p * q) as f64).abs() < 1e-9);
        }

        #[test]
        fn coverage_monotone(n in 3usize..200, k in 1usize..60) {
            let r = sample_omega0(n).unwrap();
            let w = weight_sequence(&r, k, 0.0).unwrap();
            let mut acc = 0.0;
            for x in &w.weights {
                let next = acc + 0.5 * x * x;
                prop_assert!(next >= acc);
                acc = next;
            }
            prop_assert!(acc <= region_area(&r) * (1.0 + 1e-12));
        }
    }
}
