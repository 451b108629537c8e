//! Compact plane sets: finite point sets and the parametric families that
//! occur as invariant sets (concentric circles, segments, confocal ellipses,
//! sampled Julia sets), with preimages and images under polynomials.

mod geometry;
mod julia;
mod metric;

pub use geometry::{closure_under_rotation, smallest_enclosing_circle, symmetry_group, symmetry_group_finite, Circle, SymmetryGroup};
pub use julia::{escape_radius, in_filled_julia, julia_sample, JuliaMethod, JuliaParams};
pub use metric::{hausdorff, set_equal, NearestIndex};

use std::collections::HashMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::decompose::{power_structure, chebyshev_structure};
use crate::error::{Error, Result};
use crate::json::{points_to_json, poly_to_json};
use crate::linear::LinearMap;
use crate::poly::{chebyshev, ApproxPoly, ExactPoly, Poly};
use crate::roots::{raw_roots, roots};
use crate::scalar::{Field, GaussRat};

/// Points per circle, segment or ellipse when a parametric set is sampled.
pub const DEFAULT_DENSITY: usize = 128;
/// Default clustering tolerance for finite point sets.
pub const DEFAULT_POINT_TOL: f64 = 1e-9;
/// Relative tolerance for recognizing closed-form cases.
const FORM_TOL: f64 = 1e-10;

/// Finite set of points, pairwise farther apart than `2·tol`. `sampled`
/// marks a finite sample standing in for a continuum.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePoints {
    points: Vec<Complex64>,
    tol: f64,
    sampled: bool,
}

impl FinitePoints {
    /// Clusters the input: a point within `2·tol` of an earlier kept point is dropped.
    pub fn new(points: Vec<Complex64>, tol: f64) -> Self {
        Self::build(points, tol, false)
    }

    pub fn sampled(points: Vec<Complex64>, tol: f64) -> Self {
        Self::build(points, tol, true)
    }

    fn build(points: Vec<Complex64>, tol: f64, sampled: bool) -> Self {
        let tol = if tol > 0.0 { tol } else { DEFAULT_POINT_TOL };
        let cell = 2.0 * tol;
        let key = |z: Complex64| ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut kept: Vec<Complex64> = Vec::with_capacity(points.len());
        for z in points {
            if !(z.re.is_finite() && z.im.is_finite()) {
                continue;
            }
            let (kx, ky) = key(z);
            let dup = (-1..=1).any(|dx| {
                (-1..=1).any(|dy| grid.get(&(kx + dx, ky + dy)).is_some_and(|v| v.iter().any(|&i| (kept[i] - z).norm() <= cell)))
            });
            if !dup {
                grid.entry((kx, ky)).or_default().push(kept.len());
                kept.push(z);
            }
        }
        FinitePoints { points: kept, tol, sampled }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_sampled(&self) -> bool {
        self.sampled
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The confocal ellipse `E_t = {cos(t + s) : s ∈ [0, 2π]}` with foci ±1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse {
    pub t: Complex64,
    pub semi_major: f64,
    pub semi_minor: f64,
}

impl Ellipse {
    pub fn new(t: Complex64) -> Self {
        let m = (Complex64::i() * t).exp().norm();
        Ellipse { t, semi_major: (m + 1.0 / m) / 2.0, semi_minor: ((m - 1.0 / m) / 2.0).abs() }
    }

    /// `|e^{it}| = 1`: the ellipse collapses to `[−1, 1]`.
    pub fn is_degenerate(&self) -> bool {
        self.semi_minor <= 1e-15
    }

    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| (self.t + std::f64::consts::TAU * k as f64 / n as f64).cos()).collect()
    }
}

pub fn ellipse_of(t: Complex64) -> Ellipse {
    Ellipse::new(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledJulia {
    pub generator: ApproxPoly,
    pub samples: Vec<Complex64>,
    pub params: JuliaParams,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompactSet {
    FinitePoints(FinitePoints),
    ConcentricCircles { center: Complex64, radii: Vec<f64> },
    Segment { a: Complex64, b: Complex64 },
    Ellipse(Ellipse),
    SampledJulia(SampledJulia),
}

impl CompactSet {
    pub fn points(points: Vec<Complex64>) -> Self {
        CompactSet::FinitePoints(FinitePoints::new(points, DEFAULT_POINT_TOL))
    }

    pub fn points_with_tol(points: Vec<Complex64>, tol: f64) -> Self {
        CompactSet::FinitePoints(FinitePoints::new(points, tol))
    }

    /// Radii are sorted; duplicates and nonpositive radii are rejected.
    pub fn circles(center: Complex64, mut radii: Vec<f64>) -> Result<Self> {
        radii.sort_by(f64::total_cmp);
        if radii.is_empty() || radii[0] <= 0.0 || radii.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("circle radii must be positive and distinct".into()));
        }
        Ok(CompactSet::ConcentricCircles { center, radii })
    }

    pub fn unit_circle() -> Self {
        CompactSet::ConcentricCircles { center: Complex64::new(0.0, 0.0), radii: vec![1.0] }
    }

    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArgument("segment endpoints must differ".into()));
        }
        Ok(CompactSet::Segment { a, b })
    }

    /// `[−1, 1]`.
    pub fn unit_segment() -> Self {
        CompactSet::Segment { a: Complex64::new(-1.0, 0.0), b: Complex64::new(1.0, 0.0) }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CompactSet::FinitePoints(_) => "points",
            CompactSet::ConcentricCircles { .. } => "circles",
            CompactSet::Segment { .. } => "segment",
            CompactSet::Ellipse(_) => "ellipse",
            CompactSet::SampledJulia(_) => "julia",
        }
    }

    /// Finite and not standing in for a continuum.
    pub fn is_finite(&self) -> bool {
        matches!(self, CompactSet::FinitePoints(p) if !p.is_sampled())
    }

    pub fn as_finite(&self) -> Option<&FinitePoints> {
        match self {
            CompactSet::FinitePoints(p) => Some(p),
            _ => None,
        }
    }

    /// A point cloud: the set itself when finite, `density` points per
    /// circle, segment or ellipse otherwise.
    pub fn sample(&self, density: usize) -> Vec<Complex64> {
        let n = density.max(2);
        match self {
            CompactSet::FinitePoints(p) => p.points.clone(),
            CompactSet::ConcentricCircles { center, radii } => radii
                .iter()
                .flat_map(|&r| (0..n).map(move |k| center + Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64)))
                .collect(),
            CompactSet::Segment { a, b } => (0..n).map(|k| a + (b - a) * (k as f64 / (n - 1) as f64)).collect(),
            CompactSet::Ellipse(e) => e.sample(n),
            CompactSet::SampledJulia(j) => j.samples.clone(),
        }
    }

    /// The set as a point cloud (see [`CompactSet::sample`]), wrapped as a finite set.
    pub fn to_cloud(&self, density: usize) -> FinitePoints {
        match self {
            CompactSet::FinitePoints(p) => p.clone(),
            _ => FinitePoints::sampled(self.sample(density), DEFAULT_POINT_TOL),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CompactSet::FinitePoints(p) => {
                json!({ "kind": "points", "tol": p.tol, "sampled": p.sampled, "points": points_to_json(&p.points) })
            }
            CompactSet::ConcentricCircles { center, radii } => {
                json!({ "kind": "circles", "center": [center.re, center.im], "radii": radii })
            }
            CompactSet::Segment { a, b } => json!({ "kind": "segment", "endpoints": [[a.re, a.im], [b.re, b.im]] }),
            CompactSet::Ellipse(e) => json!({
                "kind": "ellipse",
                "t": [e.t.re, e.t.im],
                "semi_major": e.semi_major,
                "semi_minor": e.semi_minor,
            }),
            CompactSet::SampledJulia(j) => json!({
                "kind": "julia",
                "generator": poly_to_json(&j.generator),
                "generator_text": j.generator.to_string(),
                "params": j.params.to_json(),
                "points": points_to_json(&j.samples),
            }),
        }
    }
}

fn exact_view<F: Field>(f: &Poly<F>) -> Option<ExactPoly> {
    if F::EXACT {
        Some(Poly::new(f.coeffs().iter().map(|c| c.as_gauss().expect("exact flavor")).collect()))
    } else {
        None
    }
}

/// Roots of `f(z) = w`, each listed once. Exact polynomials with a
/// recognizably rational `w` are solved exactly (Yun splitting), so repeated
/// roots over critical values come out as single points.
pub fn fiber<F: Field>(f: &Poly<F>, w: Complex64) -> Result<Vec<Complex64>> {
    if let Some(fe) = exact_view(f) {
        let scale = w.norm().max(1.0);
        if let Some(we) = GaussRat::recognize(w, 1 << 20, 1e-13 * scale) {
            let g = &fe - &Poly::constant(we);
            return Ok(roots(&g)?.into_iter().map(|r| r.z).collect());
        }
    }
    let g = &f.to_approx() - &Poly::constant(w);
    Ok(roots(&g)?.into_iter().map(|r| r.z).collect())
}

fn pointwise_preimage<F: Field>(f: &Poly<F>, pts: &[Complex64], tol: f64, sampled: bool) -> Result<FinitePoints> {
    let fibers = crate::par::map(pts, |&w| fiber(f, w));
    let mut all = Vec::new();
    for fb in fibers {
        all.extend(fb?);
    }
    Ok(FinitePoints::build(all, tol, sampled))
}

/// Fast fiber for sampled inputs: no multiplicity recovery.
fn pointwise_preimage_raw(f: &ApproxPoly, pts: &[Complex64]) -> Result<FinitePoints> {
    let fibers = crate::par::map(pts, |&w| raw_roots(&(f - &Poly::constant(w))));
    let mut all = Vec::new();
    for fb in fibers {
        all.extend(fb?);
    }
    Ok(FinitePoints::sampled(all, DEFAULT_POINT_TOL))
}

/// `f = a·z + b` as a map, when `f` has degree one.
fn as_linear(f: &ApproxPoly) -> Option<LinearMap<Complex64>> {
    LinearMap::from_poly(f)
}

/// `f = s·T_n∘λ + t` where `λ` carries `[a, b]` onto `[−1, 1]`.
fn chebyshev_on_segment(f: &ApproxPoly, a: Complex64, b: Complex64) -> Option<LinearMap<Complex64>> {
    let n = f.deg();
    let lam = LinearMap::new(Complex64::new(2.0, 0.0) / (b - a), -(a + b) / (b - a))?;
    let g = f.compose_linear(&lam.inverse());
    let t = chebyshev::<Complex64>(n);
    let s = g.lead() / t.lead();
    let shift = g.coeff(0) - s * t.coeff(0);
    let fit = t.scale(&s).apply_linear(&LinearMap::shift(shift));
    (fit.residual(&g) <= FORM_TOL).then(|| LinearMap::new(s, shift)).flatten()
}

/// Is `f ≈ T_n` itself.
fn is_plain_chebyshev(f: &ApproxPoly) -> bool {
    f.deg() >= 1 && f.residual(&chebyshev(f.deg())) <= FORM_TOL
}

/// `f⁻¹(S)`, closed-form when a parametric rule applies, pointwise otherwise.
pub fn preimage<F: Field>(f: &Poly<F>, s: &CompactSet) -> Result<CompactSet> {
    preimage_with(f, s, DEFAULT_DENSITY)
}

pub fn preimage_with<F: Field>(f: &Poly<F>, s: &CompactSet, density: usize) -> Result<CompactSet> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::Degree("preimage needs deg f >= 1".into()));
    }
    let fa = f.to_approx();
    match s {
        CompactSet::FinitePoints(p) => {
            if p.is_sampled() {
                return Ok(CompactSet::FinitePoints(pointwise_preimage_raw(&fa, &p.points)?));
            }
            Ok(CompactSet::FinitePoints(pointwise_preimage(f, &p.points, p.tol, false)?))
        }
        CompactSet::ConcentricCircles { center, radii } => {
            if let Some(m) = as_linear(&fa) {
                let inv = m.inverse();
                let scale = inv.a().norm();
                return Ok(CompactSet::ConcentricCircles { center: inv.apply_complex(*center), radii: radii.iter().map(|r| r * scale).collect() });
            }
            if let Ok(Some(nf)) = power_structure(&fa) {
                let (a, b) = (*nf.sigma.a(), *nf.sigma.b());
                if (b - center).norm() <= FORM_TOL * (1.0 + center.norm()) {
                    let c = -*nf.lambda.b();
                    let radii = radii.iter().map(|r| (r / a.norm()).powf(1.0 / n as f64)).collect();
                    return Ok(CompactSet::ConcentricCircles { center: c, radii });
                }
            }
            Ok(CompactSet::FinitePoints(pointwise_preimage_raw(&fa, &s.sample(density))?))
        }
        CompactSet::Segment { a, b } => {
            if let Some(m) = as_linear(&fa) {
                let inv = m.inverse();
                return Ok(CompactSet::Segment { a: inv.apply_complex(*a), b: inv.apply_complex(*b) });
            }
            let sigma = LinearMap::new((b - a) / 2.0, (a + b) / 2.0).expect("distinct endpoints");
            let g = fa.apply_linear(&sigma.inverse());
            if let Ok(Some(nf)) = chebyshev_structure(&g) {
                let one = Complex64::new(1.0, 0.0);
                let sa = nf.sigma.apply_complex(-one);
                let sb = nf.sigma.apply_complex(one);
                let fixes = |x: Complex64, y: Complex64| (x + one).norm() <= FORM_TOL && (y - one).norm() <= FORM_TOL;
                if fixes(sa, sb) || fixes(sb, sa) {
                    let li = nf.lambda.inverse();
                    return Ok(CompactSet::Segment { a: li.apply_complex(-one), b: li.apply_complex(one) });
                }
            }
            Ok(CompactSet::FinitePoints(pointwise_preimage_raw(&fa, &s.sample(density))?))
        }
        CompactSet::Ellipse(e) => {
            if is_plain_chebyshev(&fa) {
                return Ok(CompactSet::Ellipse(Ellipse::new(e.t / n as f64)));
            }
            Ok(CompactSet::FinitePoints(pointwise_preimage_raw(&fa, &s.sample(density))?))
        }
        CompactSet::SampledJulia(j) => Ok(CompactSet::FinitePoints(pointwise_preimage_raw(&fa, &j.samples)?)),
    }
}

/// `f(S)`, closed-form when a parametric rule applies, pointwise otherwise.
pub fn image<F: Field>(f: &Poly<F>, s: &CompactSet) -> Result<CompactSet> {
    image_with(f, s, DEFAULT_DENSITY)
}

pub fn image_with<F: Field>(f: &Poly<F>, s: &CompactSet, density: usize) -> Result<CompactSet> {
    let n = f.degree().unwrap_or(0);
    let fa = f.to_approx();
    let eval_all = |pts: &[Complex64], tol: f64, sampled: bool| FinitePoints::build(crate::par::map(pts, |&z| fa.eval_complex(z)), tol, sampled);
    if n == 0 {
        return Ok(CompactSet::points(vec![fa.coeff(0)]));
    }
    match s {
        CompactSet::FinitePoints(p) => {
            if let Some(fe) = exact_view(f) {
                // exact evaluation at rational points keeps critical values exact
                let vals: Vec<Complex64> = p
                    .points
                    .iter()
                    .map(|&z| match GaussRat::recognize(z, 1 << 20, 1e-13 * z.norm().max(1.0)) {
                        Some(ze) => fe.eval(&ze).to_complex(),
                        None => fa.eval_complex(z),
                    })
                    .collect();
                return Ok(CompactSet::FinitePoints(FinitePoints::build(vals, p.tol, p.sampled)));
            }
            Ok(CompactSet::FinitePoints(eval_all(&p.points, p.tol, p.sampled)))
        }
        CompactSet::ConcentricCircles { center, radii } => {
            if let Some(m) = as_linear(&fa) {
                let scale = m.a().norm();
                return Ok(CompactSet::ConcentricCircles { center: m.apply_complex(*center), radii: radii.iter().map(|r| r * scale).collect() });
            }
            if let Ok(Some(nf)) = power_structure(&fa) {
                let c = -*nf.lambda.b();
                if (c - center).norm() <= FORM_TOL * (1.0 + center.norm()) {
                    let a = nf.sigma.a().norm();
                    let radii = radii.iter().map(|r| a * r.powi(n as i32)).collect();
                    return Ok(CompactSet::ConcentricCircles { center: *nf.sigma.b(), radii });
                }
            }
            Ok(CompactSet::FinitePoints(eval_all(&s.sample(density), DEFAULT_POINT_TOL, true)))
        }
        CompactSet::Segment { a, b } => {
            if let Some(m) = as_linear(&fa) {
                return Ok(CompactSet::Segment { a: m.apply_complex(*a), b: m.apply_complex(*b) });
            }
            if let Some(sigma) = chebyshev_on_segment(&fa, *a, *b) {
                let one = Complex64::new(1.0, 0.0);
                return Ok(CompactSet::Segment { a: sigma.apply_complex(-one), b: sigma.apply_complex(one) });
            }
            Ok(CompactSet::FinitePoints(eval_all(&s.sample(density), DEFAULT_POINT_TOL, true)))
        }
        CompactSet::Ellipse(e) => {
            if is_plain_chebyshev(&fa) {
                return Ok(CompactSet::Ellipse(Ellipse::new(e.t * n as f64)));
            }
            Ok(CompactSet::FinitePoints(eval_all(&s.sample(density), DEFAULT_POINT_TOL, true)))
        }
        CompactSet::SampledJulia(j) => Ok(CompactSet::FinitePoints(eval_all(&j.samples, DEFAULT_POINT_TOL, true))),
    }
}
