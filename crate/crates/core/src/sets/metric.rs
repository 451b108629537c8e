use kiddo::immutable::float::kdtree::ImmutableKdTree;
use kiddo::SquaredEuclidean;
use num_complex::Complex64;

use super::CompactSet;

/// Clouds at most this large are searched by brute force.
const BRUTE_FORCE_MAX: usize = 64;
/// Points per parametric component when comparing against a point cloud.
const COMPARE_DENSITY: usize = 1024;

/// The k-d tree cannot hold many points sharing one coordinate, which
/// axis-parallel segments and grids produce; indexing in a rotated frame
/// (distances are unchanged) with exact duplicates removed avoids that.
fn frame() -> Complex64 {
    Complex64::from_polar(1.0, 0.577_215_664_901_532_9)
}

/// Nearest-neighbour lookup over a fixed point cloud.
pub struct NearestIndex {
    points: Vec<Complex64>,
    tree: Option<(ImmutableKdTree<f64, u64, 2, 32>, Vec<usize>)>,
}

impl NearestIndex {
    pub fn new(points: &[Complex64]) -> Self {
        let tree = (points.len() > BRUTE_FORCE_MAX).then(|| {
            let mut order: Vec<usize> = (0..points.len()).collect();
            order.sort_by(|&i, &j| points[i].re.total_cmp(&points[j].re).then(points[i].im.total_cmp(&points[j].im)));
            order.dedup_by(|i, j| points[*i] == points[*j]);
            let rot = frame();
            let coords: Vec<[f64; 2]> = order
                .iter()
                .map(|&i| {
                    let z = points[i] * rot;
                    [z.re, z.im]
                })
                .collect();
            (ImmutableKdTree::new_from_slice(&coords), order)
        });
        NearestIndex { points: points.to_vec(), tree }
    }

    /// Distance to the nearest indexed point; infinite for an empty index.
    pub fn distance(&self, z: Complex64) -> f64 {
        self.nearest(z).map_or(f64::INFINITY, |(_, d)| d)
    }

    pub fn nearest(&self, z: Complex64) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        match &self.tree {
            Some((t, order)) => {
                let w = z * frame();
                let nn = t.nearest_one::<SquaredEuclidean>(&[w.re, w.im]);
                let i = order[nn.item as usize];
                Some((i, (self.points[i] - z).norm()))
            }
            None => self
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| (i, (p - z).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1)),
        }
    }
}

/// Directed distance `sup_{a ∈ A} d(a, B)`.
pub fn directed_hausdorff(a: &[Complex64], b: &NearestIndex) -> f64 {
    crate::par::max_f64(a, |&z| b.distance(z))
}

/// Symmetric Hausdorff distance between point clouds.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let ia = NearestIndex::new(a);
    let ib = NearestIndex::new(b);
    directed_hausdorff(a, &ib).max(directed_hausdorff(b, &ia))
}

fn segment_gap(a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> f64 {
    let same = (a1 - a2).norm().max((b1 - b2).norm());
    let swapped = (a1 - b2).norm().max((b1 - a2).norm());
    same.min(swapped)
}

/// Hausdorff distance between two sets (exact for matching parametric kinds,
/// point clouds otherwise) and whether it is within `tol`.
pub fn set_equal(s1: &CompactSet, s2: &CompactSet, tol: f64) -> (bool, f64) {
    let d = match (s1, s2) {
        (CompactSet::ConcentricCircles { center: c1, radii: r1 }, CompactSet::ConcentricCircles { center: c2, radii: r2 }) if r1.len() == r2.len() => {
            let dc = (c1 - c2).norm();
            r1.iter().zip(r2).map(|(a, b)| (a - b).abs() + dc).fold(0.0, f64::max)
        }
        (CompactSet::Segment { a: a1, b: b1 }, CompactSet::Segment { a: a2, b: b2 }) => segment_gap(*a1, *b1, *a2, *b2),
        (CompactSet::Ellipse(e1), CompactSet::Ellipse(e2)) => (e1.semi_major - e2.semi_major).abs().max((e1.semi_minor - e2.semi_minor).abs()),
        _ => hausdorff(&s1.sample(COMPARE_DENSITY), &s2.sample(COMPARE_DENSITY)),
    };
    (d <= tol, d)
}
