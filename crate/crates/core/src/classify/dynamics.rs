//! Julia sets, the twisted commutation `f1∘f2 = μ∘f2∘f1`, and the
//! semiconjugate shadows of rotationally symmetric pairs.

use serde_json::{json, Value};

use super::{invariance, validations_json, Validation};
use crate::error::{Error, Result};
use crate::json::{map_to_json, poly_entry, scalar_to_json};
use crate::linear::LinearMap;
use crate::poly::{critical_center, Poly};
use crate::scalar::Field;
use crate::sets::{hausdorff, image, julia_sample, CompactSet, JuliaParams};

/// Hausdorff threshold below which two sampled Julia sets count as equal.
pub const DEFAULT_JULIA_THRESHOLD: f64 = 0.05;

/// `μ` with `f1∘f2 = μ∘f2∘f1`, or `None`.
pub fn find_mu<F: Field>(f1: &Poly<F>, f2: &Poly<F>) -> Option<LinearMap<F>> {
    if f1.degree()? < 2 || f2.degree()? < 2 {
        return None;
    }
    let l = f1.compose(f2);
    let r = f2.compose(f1);
    let a = l.lead() / r.lead();
    let b = l.coeff(0) - a.clone() * r.coeff(0);
    let mu = LinearMap::new(a, b)?;
    Validation::polys("", &r.apply_linear(&mu), &l).passed.then_some(mu)
}

/// Samples both Julia sets with the same parameters and compares them.
pub fn julia_equal<F: Field>(f1: &Poly<F>, f2: &Poly<F>, params: &JuliaParams, threshold: f64) -> Result<(bool, f64)> {
    let j1 = julia_sample(f1, params)?;
    let j2 = julia_sample(f2, params)?;
    let d = hausdorff(&j1.samples, &j2.samples);
    Ok((d <= threshold, d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowReport<F: Field> {
    /// Common center `c`; shadows live in the coordinate `z − c`.
    pub center: F,
    pub residues: (usize, usize),
    pub shadow1: Poly<F>,
    pub shadow2: Poly<F>,
    pub commute: bool,
    pub mu: Option<LinearMap<F>>,
    /// `μ(w) = εw` with `ε^d = 1`.
    pub mu_rotation_of_order_dividing_d: bool,
    pub validations: Vec<Validation>,
}

impl<F: Field> ShadowReport<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "center": scalar_to_json(&self.center),
            "residues": [self.residues.0, self.residues.1],
            "shadow1": poly_entry(&self.shadow1),
            "shadow2": poly_entry(&self.shadow2),
            "commute": self.commute,
            "mu": self.mu.as_ref().map(map_to_json),
            "mu_rotation_of_order_dividing_d": self.mu_rotation_of_order_dividing_d,
            "validations": validations_json(&self.validations),
        })
    }
}

/// `F = z^a R(z^d)`: the residue `a` and `R`.
fn rotational_split<F: Field>(g: &Poly<F>, d: usize) -> Option<(usize, Poly<F>)> {
    let scale = g.max_abs_coeff();
    let support: Vec<usize> = (0..=g.deg()).filter(|&k| !g.coeff(k).is_negligible(scale)).collect();
    let a = *support.first()? % d;
    if support.iter().any(|k| k % d != a) {
        return None;
    }
    let r = Poly::new((0..=(g.deg() - a) / d).map(|m| g.coeff(a + m * d)).collect());
    Some((a, r))
}

/// Shadows `z^{a_i}·R_i(z)^d` with `shadow_i ∘ z^d = z^d ∘ f_i` in coordinates
/// centered at the critical center of `f1`. Whether the shadows commute and
/// whether `μ` is a rotation of order dividing `d` are reported, not required.
pub fn commuting_shadow<F: Field>(f1: &Poly<F>, f2: &Poly<F>, d: usize) -> Result<ShadowReport<F>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    if f1.degree().unwrap_or(0) < 1 || f2.degree().unwrap_or(0) < 1 {
        return Err(Error::Degree("shadows need nonconstant polynomials".into()));
    }
    let c = critical_center(f1);
    let m = LinearMap::shift(c.clone());
    let g1 = crate::poly::conjugate(f1, &m.inverse());
    let g2 = crate::poly::conjugate(f2, &m.inverse());
    let split = |g: &Poly<F>, which: &str| {
        rotational_split(g, d).ok_or_else(|| Error::Hypothesis { what: format!("{which} = z^a R(z^{d}) about the center"), gap: f64::INFINITY })
    };
    let (a1, r1) = split(&g1, "f1")?;
    let (a2, r2) = split(&g2, "f2")?;
    let zd = Poly::monomial(F::one(), d);
    let shadow = |a: usize, r: &Poly<F>| &Poly::monomial(F::one(), a) * &r.pow(d as u32);
    let (s1, s2) = (shadow(a1, &r1), shadow(a2, &r2));
    let validations = vec![
        Validation::polys("shadow1∘z^d = z^d∘f1", &s1.compose(&zd), &zd.compose(&g1)).require()?,
        Validation::polys("shadow2∘z^d = z^d∘f2", &s2.compose(&zd), &zd.compose(&g2)).require()?,
    ];
    let commute = Validation::polys("", &s1.compose(&s2), &s2.compose(&s1)).passed;
    let mu = find_mu(&g1, &g2);
    let rotation = mu.as_ref().is_some_and(|mu| {
        mu.b().is_negligible(1.0) && (mu.a().pow(d as u32) - F::one()).is_negligible(1.0)
    });
    Ok(ShadowReport {
        center: c,
        residues: (a1, a2),
        shadow1: s1,
        shadow2: s2,
        commute,
        mu,
        mu_rotation_of_order_dividing_d: rotation,
        validations,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem4Report<F: Field> {
    /// `f_i⁻¹(T_i) = T_i` for the supplied sets.
    pub hypotheses: (bool, bool),
    /// A common completely invariant set other than a point, and where it was found.
    pub common_invariant: Option<String>,
    pub julia_equal: bool,
    pub julia_distance: f64,
    pub mu: Option<LinearMap<F>>,
    /// `μ` carries both reference sets onto themselves.
    pub mu_preserves_sets: bool,
    pub conditions: [bool; 3],
    pub agree: bool,
    pub validations: Vec<Validation>,
}

impl<F: Field> Theorem4Report<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "hypotheses": [self.hypotheses.0, self.hypotheses.1],
            "common_invariant": self.common_invariant,
            "julia_equal": self.julia_equal,
            "julia_distance": self.julia_distance,
            "mu": self.mu.as_ref().map(map_to_json),
            "mu_preserves_sets": self.mu_preserves_sets,
            "conditions": self.conditions,
            "agree": self.agree,
            "validations": validations_json(&self.validations),
        })
    }
}

fn is_point(s: &CompactSet) -> bool {
    s.as_finite().is_some_and(|p| p.len() <= 1)
}

/// Evaluates the three equivalent conditions: a common invariant set that is
/// not a point, equal Julia sets, and `f1∘f2 = μ∘f2∘f1` with `μ` preserving
/// the invariant sets. A `T_i` failing `f_i⁻¹(T_i) = T_i` is replaced by the
/// sampled Julia set of `f_i`.
pub fn theorem4_suite<F: Field>(f1: &Poly<F>, f2: &Poly<F>, t1: &CompactSet, t2: &CompactSet, params: &JuliaParams, threshold: f64, tol: f64) -> Result<Theorem4Report<F>> {
    for f in [f1, f2] {
        if f.degree().unwrap_or(0) < 2 {
            return Err(Error::Degree("Julia sets need deg >= 2".into()));
        }
    }
    let h1 = invariance("f1⁻¹(T1) = T1", f1, t1, tol)?;
    let h2 = invariance("f2⁻¹(T2) = T2", f2, t2, tol)?;
    let j1 = CompactSet::SampledJulia(julia_sample(f1, params)?);
    let j2 = CompactSet::SampledJulia(julia_sample(f2, params)?);
    let julia_distance = hausdorff(&j1.sample(0), &j2.sample(0));
    let julia_equal = julia_distance <= threshold;

    let mut common_invariant = None;
    for (name, s) in [("T1", t1), ("T2", t2), ("J(f1)", &j1), ("J(f2)", &j2)] {
        if is_point(s) {
            continue;
        }
        if invariance("", f1, s, tol)?.passed && invariance("", f2, s, tol)?.passed {
            common_invariant = Some(name.to_string());
            break;
        }
    }

    let r1 = if h1.passed { t1 } else { &j1 };
    let r2 = if h2.passed { t2 } else { &j2 };
    let mu = find_mu(f1, f2);
    let mut validations = vec![h1.clone(), h2.clone()];
    let mu_preserves_sets = match &mu {
        Some(m) => {
            let mp = m.as_poly();
            let v1 = Validation::sets("μ(T1) = T1", &image(&mp, r1)?, r1, tol);
            let v2 = Validation::sets("μ(T2) = T2", &image(&mp, r2)?, r2, tol);
            let ok = v1.passed && v2.passed;
            validations.extend([v1, v2]);
            ok
        }
        None => false,
    };
    let conditions = [common_invariant.is_some(), julia_equal, mu.is_some() && mu_preserves_sets];
    Ok(Theorem4Report {
        hypotheses: (h1.passed, h2.passed),
        common_invariant,
        julia_equal,
        julia_distance,
        mu,
        mu_preserves_sets,
        conditions,
        agree: conditions.iter().all(|&b| b == conditions[0]),
        validations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_exact;
    use crate::poly::ExactPoly;
    use crate::GaussRat;

    fn p(s: &str) -> ExactPoly {
        parse_exact(s).unwrap()
    }

    #[test]
    fn find_mu_examples() {
        assert_eq!(find_mu(&p("z^2"), &p("z^3")), Some(LinearMap::identity()));
        assert_eq!(find_mu(&p("z^2"), &p("-z^3")), LinearMap::scaling(-GaussRat::one()));
        assert_eq!(find_mu(&p("z^2 + 1"), &p("z^3")), None);
        assert_eq!(find_mu(&p("z"), &p("z^3")), None);
    }

    #[test]
    fn shadow_examples() {
        let r = commuting_shadow(&p("z*(z^2+1)"), &p("z^3"), 2).unwrap();
        assert_eq!(r.shadow1, p("z*(z+1)^2"));
        assert_eq!(r.shadow2, p("z^3"));
        // z(z+1)^2 ∘ z^3 = z^3(z^3+1)^2 differs from z^3(z+1)^6
        assert!(!r.commute);
        let r = commuting_shadow(&p("z^2"), &p("z^3"), 1).unwrap();
        assert_eq!((r.shadow1, r.shadow2), (p("z^2"), p("z^3")));
        assert!(r.commute && r.mu_rotation_of_order_dividing_d);
        let r = commuting_shadow(&p("-z^3"), &p("z^2"), 2).unwrap();
        assert_eq!(r.shadow1, p("z^3"));
        assert_eq!(r.residues, (1, 0));
        assert!(r.mu_rotation_of_order_dividing_d);
        assert!(commuting_shadow(&p("z^3 + z^2"), &p("z^2"), 2).is_err());
    }

    #[test]
    fn julia_comparisons() {
        let params = JuliaParams::with_samples(4000);
        assert!(julia_equal(&p("z^2"), &p("z^3"), &params, DEFAULT_JULIA_THRESHOLD).unwrap().0);
        assert!(julia_equal(&p("z^2 - 2"), &p("z^3 - 3z"), &params, DEFAULT_JULIA_THRESHOLD).unwrap().0);
        assert!(!julia_equal(&p("z^2"), &p("z^2 - 1"), &params, DEFAULT_JULIA_THRESHOLD).unwrap().0);
    }

    #[test]
    fn theorem4_examples() {
        let params = JuliaParams::with_samples(4000);
        let circle = CompactSet::unit_circle();
        let r = theorem4_suite(&p("z^2"), &p("-z^3"), &circle, &circle, &params, DEFAULT_JULIA_THRESHOLD, 1e-8).unwrap();
        assert_eq!(r.conditions, [true, true, true]);
        assert_eq!(r.mu, LinearMap::scaling(-GaussRat::one()));

        let r = theorem4_suite(&p("z^2"), &p("z^2 - 1"), &circle, &circle, &params, DEFAULT_JULIA_THRESHOLD, 1e-8).unwrap();
        assert_eq!(r.hypotheses, (true, false));
        assert!(!r.conditions[1] && !r.conditions[2]);
        assert!(r.agree);
    }
}
