use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::metric::NearestIndex;
use super::{CompactSet, FinitePoints};
use crate::decompose::Order;
use crate::error::{Error, Result};
use crate::json::map_to_json;
use crate::linear::LinearMap;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-15
    }

    fn through2(a: Complex64, b: Complex64) -> Circle {
        let center = (a + b) / 2.0;
        Circle { center, radius: (a - center).norm().max((b - center).norm()) }
    }

    fn through3(a: Complex64, b: Complex64, c: Complex64) -> Circle {
        let (bx, by) = (b.re - a.re, b.im - a.im);
        let (cx, cy) = (c.re - a.re, c.im - a.im);
        let d = 2.0 * (bx * cy - by * cx);
        if d.abs() <= 1e-300 || !d.is_finite() {
            // collinear: the widest pair spans the circle
            return [Circle::through2(a, b), Circle::through2(a, c), Circle::through2(b, c)]
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .unwrap();
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (cy * b2 - by * c2) / d;
        let uy = (bx * c2 - cx * b2) / d;
        let center = Complex64::new(a.re + ux, a.im + uy);
        let radius = [a, b, c].iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
        Circle { center, radius }
    }
}

/// Welzl's algorithm (iterative move-to-front form over a fixed-seed shuffle).
pub fn smallest_enclosing_circle(points: &[Complex64]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("smallest enclosing circle of an empty set".into()));
    }
    let mut p = points.to_vec();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5ec));
    let mut c = Circle { center: p[0], radius: 0.0 };
    for i in 1..p.len() {
        if c.contains(p[i]) {
            continue;
        }
        c = Circle { center: p[i], radius: 0.0 };
        for j in 0..i {
            if c.contains(p[j]) {
                continue;
            }
            c = Circle::through2(p[i], p[j]);
            for k in 0..j {
                if !c.contains(p[k]) {
                    c = Circle::through3(p[i], p[j], p[k]);
                }
            }
        }
    }
    Ok(c)
}

/// The cyclic group of rotations carrying a set onto itself.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryGroup {
    pub center: Complex64,
    pub order: Order,
    /// Rotation by `2π/b` about the center; `None` for an infinite group.
    pub generator: Option<LinearMap<Complex64>>,
}

impl SymmetryGroup {
    fn finite(center: Complex64, b: usize) -> Self {
        let eps = Complex64::from_polar(1.0, std::f64::consts::TAU / b as f64);
        let eps = if b == 2 { Complex64::new(-1.0, 0.0) } else if b == 1 { Complex64::new(1.0, 0.0) } else { eps };
        let generator = LinearMap::new(eps, center - eps * center);
        SymmetryGroup { center, order: Order::Finite(b), generator }
    }

    fn infinite(center: Complex64) -> Self {
        SymmetryGroup { center, order: Order::Infinite, generator: None }
    }

    /// Rotation by `2πk/b` (any angle for an infinite group) is in the group.
    pub fn contains_rotation(&self, eps: Complex64, tol: f64) -> bool {
        match self.order {
            Order::Infinite => (eps.norm() - 1.0).abs() <= tol,
            Order::Finite(b) => {
                let p = eps.powu(b as u32);
                (p - Complex64::new(1.0, 0.0)).norm() <= tol * b as f64
            }
        }
    }

    /// `m(z) = a·z + b` is an element: a rotation about the center whose angle is in the group.
    pub fn contains(&self, m: &LinearMap<Complex64>, tol: f64) -> bool {
        let fixes_center = (m.apply_complex(self.center) - self.center).norm() <= tol * (1.0 + self.center.norm());
        fixes_center && self.contains_rotation(*m.a(), tol)
    }

    pub fn to_json(&self) -> Value {
        let order = match self.order {
            Order::Finite(b) => json!(b),
            Order::Infinite => json!("infinite"),
        };
        json!({
            "center": [self.center.re, self.center.im],
            "order": order,
            "generator": self.generator.as_ref().map(map_to_json),
        })
    }
}

/// Rotations about the smallest-enclosing-circle center that map the cloud to
/// itself within `tol`, found by sending one farthest point to every point at
/// the same radius and checking each candidate on the whole set.
pub fn symmetry_group_finite(points: &[Complex64], tol: f64) -> Result<SymmetryGroup> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("symmetry group of an empty set".into()));
    }
    if points.len() == 1 {
        return Ok(SymmetryGroup::infinite(points[0]));
    }
    let center = smallest_enclosing_circle(points)?.center;
    let (p0, rmax) = points
        .iter()
        .map(|&p| (p, (p - center).norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let tol = tol.max(1e-12 * rmax);
    let index = NearestIndex::new(points);
    let u0 = (p0 - center) / rmax;
    let verified = crate::par::map(points, |&q| {
        let r = (q - center).norm();
        if (r - rmax).abs() > tol {
            return false;
        }
        let eps = (q - center) / r / u0;
        points.iter().all(|&z| index.distance(center + eps * (z - center)) <= tol)
    });
    let b = verified.iter().filter(|&&v| v).count().max(1);
    Ok(SymmetryGroup::finite(center, b))
}

/// Symmetry group of a set. Sampled clouds are checked with a tolerance of
/// 1% of their radius, so their answer is heuristic.
pub fn symmetry_group(s: &CompactSet) -> Result<SymmetryGroup> {
    match s {
        CompactSet::FinitePoints(p) if !p.is_sampled() => symmetry_group_finite(p.points(), p.tol()),
        CompactSet::ConcentricCircles { center, .. } => Ok(SymmetryGroup::infinite(*center)),
        CompactSet::Segment { a, b } => Ok(SymmetryGroup::finite((a + b) / 2.0, 2)),
        CompactSet::Ellipse(_) => Ok(SymmetryGroup::finite(Complex64::new(0.0, 0.0), 2)),
        other => {
            let pts = other.sample(0);
            let r = smallest_enclosing_circle(&pts)?.radius;
            symmetry_group_finite(&pts, 0.01 * r.max(1e-12))
        }
    }
}

/// Invariance of `S` under rotation by `2π/b` about `center`, within `S.tol`.
pub fn closure_under_rotation(s: &FinitePoints, b: usize, center: Complex64) -> bool {
    if b == 0 {
        return false;
    }
    let eps = Complex64::from_polar(1.0, std::f64::consts::TAU / b as f64);
    let index = NearestIndex::new(s.points());
    let tol = s.tol().max(1e-12);
    s.points().iter().all(|&z| index.distance(center + eps * (z - center)) <= tol * (1.0 + z.norm()))
}
