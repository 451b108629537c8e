//! Pairs with `f1⁻¹(T) = f2⁻¹(T)` for a single compact set `T`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::witness::{classify_shared_preimage, SharedPreimage, SharedPreimageWitness, WitnessCase};
use super::{invariance, validations_json, Validation};
use crate::error::{Error, Result};
use crate::json::{map_to_json, scalar_to_json};
use crate::linear::LinearMap;
use crate::poly::Poly;
use crate::scalar::Field;
use crate::sets::{image, preimage, CompactSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TargetCase {
    /// `f2 = g1 ∘ f1` with `g1⁻¹(T) = T`.
    Composite,
    /// `f̃1 = σ ∘ z^{d1/d}`, `f̃2 = σ ∘ γz^{d2/d}`; `T` is a union of circles centered at `σ(0)`.
    Circles,
    /// `f̃1 = σ ∘ T_{d1/d}`, `f̃2 = σ ∘ ±T_{d2/d}`; `T = σ([−1, 1])`.
    Segment,
    /// `T` is finite: only the shared-preimage witness applies.
    OutOfTheorem,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetReport<F: Field> {
    pub case: TargetCase,
    pub witness: SharedPreimageWitness<F>,
    pub sigma: Option<LinearMap<F>>,
    pub gamma: Option<F>,
    /// Signs in front of `T_{d1/d}` and `T_{d2/d}`.
    pub signs: Option<(i8, i8)>,
    pub validations: Vec<Validation>,
}

impl<F: Field> TargetReport<F> {
    pub fn passed(&self) -> bool {
        self.validations.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "witness": self.witness.to_json(),
            "sigma": self.sigma.as_ref().map(map_to_json),
            "gamma": self.gamma.as_ref().map(scalar_to_json),
            "signs": self.signs.map(|(a, b)| vec![a, b]),
            "validations": validations_json(&self.validations),
        })
    }
}

/// Identifies which of the three shapes `(f1, f2, T)` takes.
pub fn classify_same_target<F: Field>(f1: &Poly<F>, f2: &Poly<F>, t: &CompactSet, tol: f64) -> Result<TargetReport<F>> {
    let hyp = Validation::sets("f1⁻¹(T) = f2⁻¹(T)", &preimage(f1, t)?, &preimage(f2, t)?, tol);
    if !hyp.passed {
        return Err(Error::Hypothesis { what: "f1⁻¹(T) = f2⁻¹(T)".into(), gap: hyp.residual });
    }
    let w = match classify_shared_preimage(f1, f2)? {
        SharedPreimage::Witness(w) => *w,
        SharedPreimage::NoSolution { residual } => {
            return Err(Error::Validation { name: "g1∘f1 = g2∘f2 solvable".into(), residual });
        }
    };
    let mut validations = vec![hyp];
    let mut report = |case, sigma, gamma, signs, extra: Vec<Validation>| {
        validations.extend(extra);
        TargetReport { case, witness: w.clone(), sigma, gamma, signs, validations: validations.clone() }
    };

    if t.is_finite() {
        return Ok(report(TargetCase::OutOfTheorem, None, None, None, Vec::new()));
    }

    match w.case {
        WitnessCase::Composite => {
            let v = invariance("g1⁻¹(T) = T", &w.g1, t, tol)?.require()?;
            Ok(report(TargetCase::Composite, None, None, None, vec![v]))
        }
        WitnessCase::PowerForm => {
            let r = w.r.as_ref().expect("power witness carries R");
            let k = r.deg();
            if (0..k).any(|m| !r.coeff(m).is_negligible(r.max_abs_coeff())) {
                return Err(Error::Validation { name: "R is a monomial".into(), residual: r.residual(&Poly::monomial(r.lead(), k)) });
            }
            let (s1, s2) = (&w.sigma1, &w.sigma2);
            if !(s2.b().clone() - s1.b().clone()).is_negligible(s1.b().abs()) {
                return Err(Error::Validation { name: "σ2 = σ1 ∘ γz".into(), residual: (s2.b().clone() - s1.b().clone()).abs() });
            }
            let gamma = r.lead() / s1.a().clone();
            let n2 = w.f2_tilde.deg();
            let form2 = Poly::monomial(gamma.clone(), n2).apply_linear(s1);
            let center = s1.b().to_complex();
            let extra = vec![
                Validation::polys("f2_tilde = σ ∘ γz^(d2/d)", &form2, &w.f2_tilde),
                circles_centered("T is circles centered at σ(0)", t, center, tol)?,
                Validation::sets("f1_tilde⁻¹(T) = f2_tilde⁻¹(T)", &preimage(&w.f1_tilde, t)?, &preimage(&form2, t)?, tol),
            ];
            for v in &extra {
                v.clone().require()?;
            }
            Ok(report(TargetCase::Circles, Some(s1.clone()), Some(gamma), None, extra))
        }
        WitnessCase::ChebyshevForm => {
            let (s1, s2) = (&w.sigma1, &w.sigma2);
            let rel = s1.inverse().compose(s2);
            let sign = if rel.is_near_identity(1e-12) {
                1
            } else if rel.distance(&LinearMap::scaling(-F::one()).expect("nonzero")) <= 1e-12 {
                -1
            } else {
                return Err(Error::Validation { name: "σ2 = σ1 ∘ ±z".into(), residual: rel.distance(&LinearMap::identity()) });
            };
            let seg = image(&s1.as_poly(), &CompactSet::unit_segment())?;
            let extra = vec![
                Validation::sets("T = σ([−1, 1])", t, &seg, tol),
                Validation::sets("f1_tilde⁻¹(T) = f2_tilde⁻¹(T)", &preimage(&w.f1_tilde, t)?, &preimage(&w.f2_tilde, t)?, tol),
            ];
            for v in &extra {
                v.clone().require()?;
            }
            Ok(report(TargetCase::Segment, Some(s1.clone()), None, Some((1, sign)), extra))
        }
    }
}

fn circles_centered(name: &str, t: &CompactSet, center: Complex64, tol: f64) -> Result<Validation> {
    if let CompactSet::ConcentricCircles { center: c, .. } = t {
        let gap = (c - center).norm();
        return Ok(Validation::new(name, gap <= tol.max(1e-9) * (1.0 + center.norm()), gap));
    }
    // a union of circles is closed under rotation by an angle incommensurable with π
    let eps = Complex64::from_polar(1.0, 1.0);
    let rot = LinearMap::new(eps, center - eps * center).expect("unit rotation");
    Ok(Validation::sets(name, &image(&rot.as_poly(), t)?, t, tol))
}
