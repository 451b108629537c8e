//! Witness construction for polynomials sharing preimages of compact sets.
//!
//! Every report carries a list of [`Validation`]s: the identities that were
//! actually checked, by exact comparison for exact inputs and by relative
//! residual otherwise.

mod chain;
mod dynamics;
mod invariant;
mod target;
mod witness;

pub use chain::{build_chain, ChainEntry, ChainReport};
pub use dynamics::{commuting_shadow, find_mu, julia_equal, theorem4_suite, ShadowReport, Theorem4Report, DEFAULT_JULIA_THRESHOLD};
pub use invariant::{classify_invariant, minimal_invariant_generator, InvariantCase, InvariantSetReport, IterateGenerator};
pub use target::{classify_same_target, TargetCase, TargetReport};
pub use witness::{cardinality_gate, classify_shared_preimage, construct_k3, preimage_cardinality_bound, SharedPreimage, SharedPreimageWitness, WitnessCase};

use serde::Serialize;
use serde_json::{json, Value};

use crate::decompose::APPROX_RECOMPOSE_TOL;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Field;
use crate::sets::{preimage, set_equal, CompactSet};

/// Total degree above which compositions are refused.
pub const DEGREE_CAP: usize = 10_000;
/// Default Hausdorff tolerance for set identities between exact or parametric sets.
pub const DEFAULT_SET_TOL: f64 = 1e-8;
/// Floor on the Hausdorff tolerance when a sampled cloud is involved.
pub const SAMPLED_SET_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Validation {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

impl Validation {
    pub fn new(name: impl Into<String>, passed: bool, residual: f64) -> Self {
        Validation { name: name.into(), passed, residual: residual.max(0.0) }
    }

    /// `lhs = rhs` as polynomials.
    pub fn polys<F: Field>(name: impl Into<String>, lhs: &Poly<F>, rhs: &Poly<F>) -> Self {
        let residual = lhs.residual(rhs);
        let passed = if F::EXACT { lhs == rhs } else { residual <= APPROX_RECOMPOSE_TOL };
        Validation::new(name, passed, residual)
    }

    /// `s1 = s2` within Hausdorff distance `tol` (raised to [`SAMPLED_SET_TOL`] for sampled sets).
    pub fn sets(name: impl Into<String>, s1: &CompactSet, s2: &CompactSet, tol: f64) -> Self {
        let (passed, d) = set_equal(s1, s2, effective_tol(s1, s2, tol));
        Validation::new(name, passed, d)
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "residual": self.residual })
    }

    /// The validation as a hard requirement.
    pub fn require(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::Validation { name: self.name, residual: self.residual })
        }
    }
}

pub fn validations_json(v: &[Validation]) -> Value {
    Value::Array(v.iter().map(Validation::to_json).collect())
}

pub(crate) fn is_sampled(s: &CompactSet) -> bool {
    match s {
        CompactSet::FinitePoints(p) => p.is_sampled(),
        CompactSet::SampledJulia(_) => true,
        _ => false,
    }
}

pub(crate) fn effective_tol(s1: &CompactSet, s2: &CompactSet, tol: f64) -> f64 {
    if is_sampled(s1) || is_sampled(s2) {
        tol.max(SAMPLED_SET_TOL)
    } else {
        tol
    }
}

/// `f⁻¹(T) = T` within tolerance.
pub(crate) fn invariance<F: Field>(name: &str, f: &Poly<F>, t: &CompactSet, tol: f64) -> Result<Validation> {
    let pre = preimage(f, t)?;
    Ok(Validation::sets(name, &pre, t, tol))
}

pub(crate) fn check_degree_cap(degree: usize) -> Result<()> {
    if degree > DEGREE_CAP {
        return Err(Error::DegreeCap { degree, cap: DEGREE_CAP });
    }
    Ok(())
}

/// `f = μ ∘ g` for linear `μ`, fitted from the leading and constant coefficients and verified.
pub(crate) fn left_linear_fit<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Option<crate::LinearMap<F>> {
    if f.degree()? != g.degree()? || g.deg() == 0 {
        return None;
    }
    let a = f.lead() / g.lead();
    let b = f.coeff(0) - a.clone() * g.coeff(0);
    let mu = crate::LinearMap::new(a, b)?;
    Validation::polys("", &g.apply_linear(&mu), f).passed.then_some(mu)
}
