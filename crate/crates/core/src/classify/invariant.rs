//! Pairs sharing a completely invariant compact set `f1⁻¹(T) = f2⁻¹(T) = T`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::{check_degree_cap, invariance, left_linear_fit, validations_json, Validation};
use crate::decompose::{divisors, power_structure, right_factor_any};
use crate::error::{Error, Result};
use crate::json::{map_to_json, poly_entry, scalar_to_json};
use crate::linear::LinearMap;
use crate::poly::{chebyshev, conjugate, iterate, Poly};
use crate::scalar::{Field, GaussRat};
use crate::sets::{image, smallest_enclosing_circle, CompactSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InvariantCase {
    /// `T = {t}`: `σ⁻¹∘f1∘σ = z^{d1}`, `σ⁻¹∘f2∘σ = γz^{d2}`.
    PointCase,
    /// Concentric circles: as for a point, with `|γ| = 1`.
    Circles,
    /// `T = σ([−1, 1])`: `σ⁻¹∘f_i∘σ = ±T_{d_i}`.
    Segment,
    /// `f_i = μ_i ∘ p^{∘s_i}` with `p⁻¹(T) = T` and `μ_i(T) = T`.
    IterateFamily,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterateGenerator<F: Field> {
    pub p: Poly<F>,
    pub s1: usize,
    pub s2: usize,
    pub mu1: LinearMap<F>,
    pub mu2: LinearMap<F>,
    /// Every candidate generator that was tested, in order.
    pub tried: Vec<String>,
    pub validations: Vec<Validation>,
}

impl<F: Field> IterateGenerator<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "p": poly_entry(&self.p),
            "s1": self.s1,
            "s2": self.s2,
            "mu1": map_to_json(&self.mu1),
            "mu2": map_to_json(&self.mu2),
            "tried": self.tried,
            "validations": validations_json(&self.validations),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSetReport<F: Field> {
    pub case: InvariantCase,
    pub sigma: Option<LinearMap<F>>,
    pub gamma: Option<F>,
    pub signs: Option<(i8, i8)>,
    pub generator: Option<IterateGenerator<F>>,
    pub validations: Vec<Validation>,
}

impl<F: Field> InvariantSetReport<F> {
    pub fn passed(&self) -> bool {
        self.validations.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "sigma": self.sigma.as_ref().map(map_to_json),
            "gamma": self.gamma.as_ref().map(scalar_to_json),
            "signs": self.signs.map(|(a, b)| vec![a, b]),
            "generator": self.generator.as_ref().map(IterateGenerator::to_json),
            "validations": validations_json(&self.validations),
        })
    }
}

pub fn classify_invariant<F: Field>(f1: &Poly<F>, f2: &Poly<F>, t: &CompactSet, tol: f64) -> Result<InvariantSetReport<F>> {
    let (d1, d2) = degrees(f1, f2)?;
    let mut validations = Vec::new();
    for (name, f) in [("f1⁻¹(T) = T", f1), ("f2⁻¹(T) = T", f2)] {
        let v = invariance(name, f, t, tol)?;
        if !v.passed {
            return Err(Error::Hypothesis { what: name.into(), gap: v.residual });
        }
        validations.push(v);
    }
    let report = |case, sigma, gamma, signs, generator, mut extra: Vec<Validation>| {
        let mut all = validations.clone();
        all.append(&mut extra);
        InvariantSetReport { case, sigma, gamma, signs, generator, validations: all }
    };

    let single = t.as_finite().filter(|p| p.len() == 1).map(|p| p.points()[0]);
    let circle_center = match t {
        CompactSet::ConcentricCircles { center, .. } => Some(*center),
        _ => None,
    };
    if let Some(center) = single.or(circle_center) {
        if let Some((sigma, gamma, extra)) = power_conjugacy(f1, f2, d1, d2, center)? {
            if single.is_some() {
                return Ok(report(InvariantCase::PointCase, Some(sigma), Some(gamma), None, None, extra));
            }
            let gap = (gamma.abs() - 1.0).abs();
            let mut extra = extra;
            extra.push(Validation::new("|γ| = 1", gap <= 1e-10, gap).require()?);
            return Ok(report(InvariantCase::Circles, Some(sigma), Some(gamma), None, None, extra));
        }
    }
    if let CompactSet::Segment { a, b } = t {
        let sigma = LinearMap::new(F::from_complex((b - a) / 2.0), F::from_complex((a + b) / 2.0)).expect("distinct endpoints");
        let back = sigma.inverse();
        if let (Some(s1), Some(s2)) = (chebyshev_sign(&conjugate(f1, &back), d1), chebyshev_sign(&conjugate(f2, &back), d2)) {
            let extra = vec![
                Validation::polys("σ⁻¹∘f1∘σ = ±T_d1", &conjugate(f1, &back), &chebyshev::<F>(d1).scale(&F::from_i64(s1 as i64))),
                Validation::polys("σ⁻¹∘f2∘σ = ±T_d2", &conjugate(f2, &back), &chebyshev::<F>(d2).scale(&F::from_i64(s2 as i64))),
            ];
            return Ok(report(InvariantCase::Segment, Some(sigma), None, Some((s1, s2)), None, extra));
        }
    }
    let generator = minimal_invariant_generator(f1, f2, t, tol)?;
    let extra = generator.validations.clone();
    Ok(report(InvariantCase::IterateFamily, None, None, None, Some(generator), extra))
}

fn degrees<F: Field>(f1: &Poly<F>, f2: &Poly<F>) -> Result<(usize, usize)> {
    match (f1.degree(), f2.degree()) {
        (Some(a), Some(b)) if a >= 2 && b >= 2 => Ok((a, b)),
        _ => Err(Error::Degree("invariant-set classification needs deg f_i >= 2".into())),
    }
}

/// `f_i = c + a_i (z − c)^{d_i}` with `c` at `center`; returns `σ = αz + c`
/// with `α^{1−d1} = a1` and `γ = a2·α^{d2−1}`.
fn power_conjugacy<F: Field>(f1: &Poly<F>, f2: &Poly<F>, d1: usize, d2: usize, center: Complex64) -> Result<Option<(LinearMap<F>, F, Vec<Validation>)>> {
    let (Some(n1), Some(n2)) = (power_structure(f1)?, power_structure(f2)?) else { return Ok(None) };
    let c = -n1.lambda.b().clone();
    let fixed = |nf: &crate::decompose::NormalForm<F>| {
        let ci = -nf.lambda.b().clone();
        (ci.clone() - c.clone()).is_negligible(c.abs()) && (nf.sigma.b().clone() - ci).is_negligible(c.abs())
    };
    if !fixed(&n1) || !fixed(&n2) || (c.to_complex() - center).norm() > 1e-9 * (1.0 + center.norm()) {
        return Ok(None);
    }
    let a1 = n1.sigma.a().clone();
    let alpha = if d1 == 1 {
        F::one()
    } else {
        let inv = F::one() / a1;
        inv.nth_root(d1 as u32 - 1).ok_or_else(|| Error::Irrational(format!("({inv})^(1/{})", d1 - 1)))?
    };
    let gamma = n2.sigma.a().clone() * alpha.pow(d2 as u32 - 1);
    let sigma = LinearMap::new(alpha, c).expect("nonzero scaling");
    let back = sigma.inverse();
    let extra = vec![
        Validation::polys("σ⁻¹∘f1∘σ = z^d1", &conjugate(f1, &back), &Poly::monomial(F::one(), d1)),
        Validation::polys("σ⁻¹∘f2∘σ = γz^d2", &conjugate(f2, &back), &Poly::monomial(gamma.clone(), d2)),
    ];
    for v in &extra {
        v.clone().require()?;
    }
    Ok(Some((sigma, gamma, extra)))
}

fn chebyshev_sign<F: Field>(g: &Poly<F>, d: usize) -> Option<i8> {
    let t = chebyshev::<F>(d);
    if Validation::polys("", g, &t).passed {
        Some(1)
    } else if Validation::polys("", g, &-&t).passed {
        Some(-1)
    } else {
        None
    }
}

/// `k` with `r^k = n`.
fn log_exact(n: usize, r: usize) -> Option<usize> {
    let (mut m, mut k) = (1usize, 0usize);
    while m < n {
        m = m.checked_mul(r)?;
        k += 1;
    }
    (m == n).then_some(k)
}

/// The generator `p` of least degree: a normalized right factor `h` of `f1`
/// moved by a linear `ν` so that `p = ν∘h` satisfies `p⁻¹(T) = T`, then
/// `f_i = μ_i ∘ p^{∘s_i}` solved for linear `μ_i` with `μ_i(T) = T`.
pub fn minimal_invariant_generator<F: Field>(f1: &Poly<F>, f2: &Poly<F>, t: &CompactSet, tol: f64) -> Result<IterateGenerator<F>> {
    let (d1, d2) = degrees(f1, f2)?;
    check_degree_cap(d1.max(d2))?;
    let mut tried = Vec::new();
    for r in divisors(d1).into_iter().filter(|&r| r >= 2) {
        let (Some(s1), Some(s2)) = (log_exact(d1, r), log_exact(d2, r)) else { continue };
        let Some((_, h)) = right_factor_any(f1, r)? else {
            tried.push(format!("degree {r}: no right factor"));
            continue;
        };
        let mut found: Option<IterateGenerator<F>> = None;
        for nu in placement_candidates(&h, t)? {
            let p = h.apply_linear(&nu);
            tried.push(p.to_string());
            let inv = invariance("p⁻¹(T) = T", &p, t, tol)?;
            if !inv.passed {
                continue;
            }
            let (q1, q2) = (iterate(&p, s1)?, iterate(&p, s2)?);
            let (Some(mu1), Some(mu2)) = (left_linear_fit(f1, &q1), left_linear_fit(f2, &q2)) else { continue };
            let mut validations = vec![
                inv,
                Validation::polys("f1 = μ1∘p^s1", &q1.apply_linear(&mu1), f1),
                Validation::polys("f2 = μ2∘p^s2", &q2.apply_linear(&mu2), f2),
            ];
            for (name, mu) in [("μ1(T) = T", &mu1), ("μ2(T) = T", &mu2)] {
                validations.push(Validation::sets(name, &image(&mu.as_poly(), t)?, t, tol));
            }
            if !validations.iter().all(|v| v.passed) {
                continue;
            }
            let identity = mu1.is_near_identity(1e-12) && mu2.is_near_identity(1e-12);
            let g = IterateGenerator { p, s1, s2, mu1, mu2, tried: Vec::new(), validations };
            if identity {
                found = Some(g);
                break;
            }
            found.get_or_insert(g);
        }
        if let Some(mut g) = found {
            g.tried = tried;
            return Ok(g);
        }
    }
    Err(Error::NoGenerator(tried))
}

/// Linear maps `ν` carrying `h(T)` onto `T`, read off the smallest enclosing
/// circles of the two clouds and the directions of their outermost points.
fn placement_candidates<F: Field>(h: &Poly<F>, t: &CompactSet) -> Result<Vec<LinearMap<F>>> {
    let cloud = t.sample(256);
    let ha = h.to_approx();
    let s: Vec<Complex64> = cloud.iter().map(|&z| ha.eval_complex(z)).collect();
    let (ct, cs) = (smallest_enclosing_circle(&cloud)?, smallest_enclosing_circle(&s)?);
    if ct.radius <= 0.0 || cs.radius <= 0.0 {
        return Ok(Vec::new());
    }
    let ratio = ct.radius / cs.radius;
    let mut rotations = vec![Complex64::new(1.0, 0.0)];
    if let Some(&from) = extreme_directions(&s, cs.center, cs.radius).first() {
        for to in extreme_directions(&cloud, ct.center, ct.radius).into_iter().take(24) {
            rotations.push(Complex64::from_polar(1.0, to - from));
        }
    }
    let mut out: Vec<LinearMap<F>> = Vec::new();
    for rot in rotations {
        let alpha = rot * ratio;
        let beta = ct.center - alpha * cs.center;
        let Some(nu) = to_field::<F>(alpha).zip(to_field::<F>(beta)).and_then(|(a, b)| LinearMap::new(a, b)) else { continue };
        if !out.iter().any(|m| m.distance(&nu) <= 1e-9) {
            out.push(nu);
        }
    }
    Ok(out)
}

/// Coefficients recovered from geometry are rounded to small Gaussian
/// rationals in the exact flavor.
fn to_field<F: Field>(c: Complex64) -> Option<F> {
    if F::EXACT {
        let g = GaussRat::recognize(c, 64, 0.05 * c.norm().max(1.0))?;
        Some(F::from_gauss(&g))
    } else {
        Some(F::from_complex(c))
    }
}

/// Mean angles of clusters of near-farthest points; empty when the outer
/// points fill more than half the circle (no preferred direction).
fn extreme_directions(pts: &[Complex64], center: Complex64, radius: f64) -> Vec<f64> {
    let mut ang: Vec<f64> = pts.iter().filter(|p| (*p - center).norm() >= 0.98 * radius).map(|p| (p - center).arg()).collect();
    if ang.is_empty() {
        return Vec::new();
    }
    ang.sort_by(f64::total_cmp);
    const GAP: f64 = 0.1;
    let n = ang.len();
    // start after the widest gap so no cluster wraps around
    let mut widest = 0;
    let mut best = ang[0] + std::f64::consts::TAU - ang[n - 1];
    for i in 1..n {
        if ang[i] - ang[i - 1] > best {
            best = ang[i] - ang[i - 1];
            widest = i;
        }
    }
    if best < GAP {
        return Vec::new();
    }
    let ordered: Vec<f64> = (0..n).map(|k| {
        let i = (widest + k) % n;
        if i < widest { ang[i] + std::f64::consts::TAU } else { ang[i] }
    }).collect();
    let mut clusters: Vec<Vec<f64>> = vec![vec![ordered[0]]];
    for w in ordered.windows(2) {
        if w[1] - w[0] > GAP {
            clusters.push(Vec::new());
        }
        clusters.last_mut().expect("nonempty").push(w[1]);
    }
    if clusters.iter().any(|c| c.last().unwrap() - c[0] > std::f64::consts::PI) {
        return Vec::new();
    }
    clusters.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}
