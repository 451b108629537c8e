//! Numerical checks that least-deviation polynomials pull back along `P`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::{least_deviation, monic_least_deviation};
use crate::error::{Error, Result};
use crate::json::poly_entry;
use crate::poly::{ApproxPoly, Poly};
use crate::scalar::Field;
use crate::sets::{fiber, smallest_enclosing_circle, CompactSet};

/// Coefficient tolerance of the three checks.
pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub theorem: String,
    pub hypothesis_ok: bool,
    pub max_coeff_gap: f64,
    pub deviation_gap: f64,
    pub passed: bool,
    #[serde(skip)]
    pub details: Value,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem,
            "hypothesis_ok": self.hypothesis_ok,
            "max_coeff_gap": self.max_coeff_gap,
            "deviation_gap": self.deviation_gap,
            "passed": self.passed,
            "details": self.details,
        })
    }
}

/// `cos(jπ/(n−1))`, `j = 0, …, n−1`: the extrema of `T_{n−1}`, endpoints included.
pub fn lobatto_nodes(n: usize) -> Vec<Complex64> {
    match n {
        0 => Vec::new(),
        1 => vec![Complex64::new(0.0, 0.0)],
        _ => (0..n).map(|j| Complex64::new((std::f64::consts::PI * j as f64 / (n - 1) as f64).cos(), 0.0)).collect(),
    }
}

/// Sample points of `R`: Lobatto nodes mapped onto segments, the set's own
/// sampling otherwise.
pub fn minimax_sample(r: &CompactSet, density: usize) -> Vec<Complex64> {
    match r {
        CompactSet::Segment { a, b } => lobatto_nodes(density).into_iter().map(|x| (a + b) / 2.0 + x * (b - a) / 2.0).collect(),
        _ => r.sample(density),
    }
}

/// Each base point's fiber under `P`, flattened, with the index of its base point.
fn pull_back<F: Field>(p: &Poly<F>, base: &[Complex64]) -> Result<(Vec<Complex64>, Vec<usize>)> {
    let fibers = crate::par::map(base, |&w| fiber(p, w));
    let mut pts = Vec::new();
    let mut owner = Vec::new();
    for (k, fb) in fibers.into_iter().enumerate() {
        for z in fb? {
            pts.push(z);
            owner.push(k);
        }
    }
    Ok((pts, owner))
}

fn coeff_gap(a: &ApproxPoly, b: &ApproxPoly) -> f64 {
    let n = a.deg().max(b.deg());
    (0..=n).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

/// The monic optimum of degree `deg P` on `P⁻¹(R)` is `P` itself when `R`'s
/// smallest enclosing circle is centered at the origin.
pub fn verify_thm21<F: Field>(p: &Poly<F>, r: &CompactSet, density: usize) -> Result<VerifyReport> {
    let pa = p.to_approx();
    if !pa.lead().eq(&Complex64::new(1.0, 0.0)) && (pa.lead() - 1.0).norm() > 1e-12 {
        return Err(Error::InvalidArgument("P must be monic".into()));
    }
    let n = pa.deg();
    let base = minimax_sample(r, density);
    let sec = smallest_enclosing_circle(&base)?;
    if sec.center.norm() > 1e-9 * (1.0 + sec.radius) {
        return Err(Error::Hypothesis { what: "R's smallest enclosing circle is centered at 0".into(), gap: sec.center.norm() });
    }
    let (pre, _) = pull_back(p, &base)?;
    let opt = monic_least_deviation(&pre, n)?;
    let expected_dev = base.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let max_coeff_gap = coeff_gap(&opt.poly, &pa);
    let deviation_gap = (opt.deviation - expected_dev).abs();
    Ok(VerifyReport {
        theorem: "thm21".into(),
        hypothesis_ok: true,
        max_coeff_gap,
        deviation_gap,
        passed: max_coeff_gap <= VERIFY_TOL && deviation_gap <= VERIFY_TOL,
        details: json!({ "optimum": opt.to_json(), "expected": poly_entry(&pa), "pullback_points": pre.len() }),
    })
}

/// The monic optimum of degree `mn` on `P⁻¹(R)` is `T(P)/c^m`, where `T` is
/// the monic optimum of degree `m` on `R` and `c` the leading coefficient of `P`.
pub fn verify_thm22<F: Field>(p: &Poly<F>, r: &CompactSet, m: usize, density: usize) -> Result<VerifyReport> {
    let pa = p.to_approx();
    let n = pa.deg();
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("need deg P >= 1 and m >= 1".into()));
    }
    let base = minimax_sample(r, density);
    let t = monic_least_deviation(&base, m)?;
    let (pre, _) = pull_back(p, &base)?;
    let q = monic_least_deviation(&pre, m * n)?;
    let cm = pa.lead().powu(m as u32);
    let expected = t.poly.compose(&pa).scale(&(1.0 / cm));
    let max_coeff_gap = coeff_gap(&q.poly, &expected);
    let deviation_gap = (q.deviation - t.deviation / cm.norm()).abs();
    Ok(VerifyReport {
        theorem: "thm22".into(),
        hypothesis_ok: true,
        max_coeff_gap,
        deviation_gap,
        passed: max_coeff_gap <= VERIFY_TOL && deviation_gap <= VERIFY_TOL,
        details: json!({
            "base_optimum": t.to_json(),
            "pullback_optimum": q.to_json(),
            "expected": poly_entry(&expected),
            "pullback_points": pre.len(),
        }),
    })
}

/// `p_{mn+n−1, φ∘P} = p_{m,φ} ∘ P` on `P⁻¹(R)`, with equal deviations.
pub fn verify_thm23<F: Field>(p: &Poly<F>, r: &CompactSet, phi: impl Fn(Complex64) -> Complex64, m: usize, density: usize) -> Result<VerifyReport> {
    let pa = p.to_approx();
    let n = pa.deg();
    if n == 0 {
        return Err(Error::InvalidArgument("need deg P >= 1".into()));
    }
    let base = minimax_sample(r, density);
    let values: Vec<Complex64> = base.iter().map(|&w| phi(w)).collect();
    let best = least_deviation(&base, &values, m)?;
    let (pre, owner) = pull_back(p, &base)?;
    let pulled: Vec<Complex64> = owner.iter().map(|&k| values[k]).collect();
    let q = least_deviation(&pre, &pulled, m * n + n - 1)?;
    let expected = best.poly.compose(&pa);
    let max_coeff_gap = coeff_gap(&q.poly, &expected);
    let deviation_gap = (q.deviation - best.deviation).abs();
    Ok(VerifyReport {
        theorem: "thm23".into(),
        hypothesis_ok: true,
        max_coeff_gap,
        deviation_gap,
        passed: max_coeff_gap <= VERIFY_TOL && deviation_gap <= VERIFY_TOL,
        details: json!({
            "base_optimum": best.to_json(),
            "pullback_optimum": q.to_json(),
            "expected": poly_entry(&expected),
            "pullback_points": pre.len(),
        }),
    })
}
