//! Solutions of `g1 ∘ f1 = g2 ∘ f2` in the normal forms of Ritt's second theorem.

use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use super::{check_degree_cap, left_linear_fit, validations_json, Validation};
use crate::decompose::{chebyshev_structure, gcrc, padic_expand, power_structure};
use crate::error::{Error, Result};
use crate::json::{map_to_json, poly_entry};
use crate::linalg::{solve, Solution};
use crate::linear::LinearMap;
use crate::poly::{chebyshev, critical_center, Poly};
use crate::scalar::Field;
use crate::sets::{image, preimage, CompactSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessCase {
    Composite,
    PowerForm,
    ChebyshevForm,
}

/// `g1 ∘ f1 = g2 ∘ f2`, `f_i = f̃_i ∘ W`, with `f̃_i` and `g_i` in power or
/// Chebyshev form. Inputs are ordered so that `deg f1 ≤ deg f2`; `swapped`
/// records whether the caller's order was reversed.
///
/// For `Composite`, `f2 = g1 ∘ f1`, `W = f1`, `f̃1 = g2 = z` and `f̃2 = g1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SharedPreimageWitness<F: Field> {
    pub case: WitnessCase,
    pub swapped: bool,
    pub f1: Poly<F>,
    pub f2: Poly<F>,
    pub d: usize,
    pub w: Poly<F>,
    pub f1_tilde: Poly<F>,
    pub f2_tilde: Poly<F>,
    pub g1: Poly<F>,
    pub g2: Poly<F>,
    pub sigma1: LinearMap<F>,
    pub sigma2: LinearMap<F>,
    /// Power form only: `f̃2 = σ2 ∘ z^c R(z^{d1/d})`.
    pub r: Option<Poly<F>>,
    pub c: Option<usize>,
    pub k3: Option<CompactSet>,
    pub validations: Vec<Validation>,
}

impl<F: Field> SharedPreimageWitness<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "swapped": self.swapped,
            "f1": poly_entry(&self.f1),
            "f2": poly_entry(&self.f2),
            "d": self.d,
            "W": poly_entry(&self.w),
            "f1_tilde": poly_entry(&self.f1_tilde),
            "f2_tilde": poly_entry(&self.f2_tilde),
            "g1": poly_entry(&self.g1),
            "g2": poly_entry(&self.g2),
            "sigma1": map_to_json(&self.sigma1),
            "sigma2": map_to_json(&self.sigma2),
            "R": self.r.as_ref().map(poly_entry),
            "c": self.c,
            "K3": self.k3.as_ref().map(CompactSet::to_json),
            "validations": validations_json(&self.validations),
        })
    }

    /// All recorded validations passed.
    pub fn passed(&self) -> bool {
        self.validations.iter().all(|v| v.passed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SharedPreimage<F: Field> {
    Witness(Box<SharedPreimageWitness<F>>),
    /// `g1 ∘ f1 = g2 ∘ f2` has no solution with the required degrees;
    /// `residual` measures the inconsistency.
    NoSolution { residual: f64 },
}

impl<F: Field> SharedPreimage<F> {
    pub fn witness(self) -> Option<SharedPreimageWitness<F>> {
        match self {
            SharedPreimage::Witness(w) => Some(*w),
            SharedPreimage::NoSolution { .. } => None,
        }
    }
}

/// Lower bound `deg f · (card K − 1) + 1` on `card f⁻¹(K)` for finite nonempty `K`.
pub fn preimage_cardinality_bound(deg: usize, card: usize) -> usize {
    if card == 0 {
        0
    } else {
        deg * (card - 1) + 1
    }
}

/// The cardinality hypothesis: `card K ≥ lcm(d1, d2)`, or one of the weaker
/// conditions `card K1 ≥ d2/d + 1`, `card K2 ≥ d1/d + 1` that imply it.
pub fn cardinality_gate(d1: usize, d2: usize, card_k: usize, card_k1: usize, card_k2: usize) -> bool {
    let d = d1.gcd(&d2);
    card_k >= d1.lcm(&d2) || card_k1 > d2 / d || card_k2 > d1 / d
}

/// Decides `g1 ∘ f1 = g2 ∘ f2` with `deg g1 = d2/d`, `deg g2 = d1/d` and
/// returns the normal-form witness.
pub fn classify_shared_preimage<F: Field>(f1: &Poly<F>, f2: &Poly<F>) -> Result<SharedPreimage<F>> {
    let (d1, d2) = match (f1.degree(), f2.degree()) {
        (Some(a), Some(b)) if a >= 1 && b >= 1 => (a, b),
        _ => return Err(Error::Degree("classification needs nonconstant polynomials".into())),
    };
    let swapped = d1 > d2;
    let (f1, f2, d1, d2) = if swapped { (f2, f1, d2, d1) } else { (f1, f2, d1, d2) };
    let d = d1.gcd(&d2);
    let (n1, n2) = (d1 / d, d2 / d);
    check_degree_cap(d1 * n2)?;

    if n1 == 1 {
        return composite(f1, f2, swapped);
    }

    let (gh1, gh2) = match solve_left_factors(f1, f2, n1, n2) {
        Ok(pair) => pair,
        Err(residual) => return Ok(SharedPreimage::NoSolution { residual }),
    };

    let common = gcrc(f1, f2)?;
    if common.w.deg() != d {
        return Err(Error::Validation { name: format!("common right component of degree {d}"), residual: f64::INFINITY });
    }

    let form = match chebyshev_form(&common.a, &common.b, n1) {
        Ok(Some(form)) => form,
        Ok(None) => power_form(&common.a, &common.b, n1, n2)?
            .ok_or_else(|| Error::Validation { name: "power or Chebyshev normal form".into(), residual: f64::INFINITY })?,
        // the Chebyshev scaling is irrational; a power form still settles it exactly
        Err(Error::Irrational(what)) => power_form(&common.a, &common.b, n1, n2)?.ok_or(Error::Irrational(what))?,
        Err(e) => return Err(e),
    };

    let w = common.w.apply_linear(&form.lambda);
    let mut validations = vec![
        Validation::polys("g1∘f1 = g2∘f2", &form.g1.compose(f1), &form.g2.compose(f2)),
        Validation::polys("f1 = f1_tilde∘W", &form.f1_tilde.compose(&w), f1),
        Validation::polys("f2 = f2_tilde∘W", &form.f2_tilde.compose(&w), f2),
    ];
    let agree = match left_linear_fit(&gh1, &form.g1) {
        Some(nu) => Validation::polys("left factors agree with the linear solve", &form.g2.apply_linear(&nu), &gh2),
        None => Validation::new("left factors agree with the linear solve", false, f64::INFINITY),
    };
    validations.push(agree);
    if let Some(c) = form.c {
        let ok = c == n2 % n1 && c.gcd(&n1) == 1;
        validations.push(Validation::new("c = (d2/d) mod (d1/d), gcd(c, d1/d) = 1", ok, if ok { 0.0 } else { 1.0 }));
    }
    for v in &validations {
        v.clone().require()?;
    }

    Ok(SharedPreimage::Witness(Box::new(SharedPreimageWitness {
        case: form.case,
        swapped,
        f1: f1.clone(),
        f2: f2.clone(),
        d,
        w,
        f1_tilde: form.f1_tilde,
        f2_tilde: form.f2_tilde,
        g1: form.g1,
        g2: form.g2,
        sigma1: form.sigma1,
        sigma2: form.sigma2,
        r: form.r,
        c: form.c,
        k3: None,
        validations,
    })))
}

fn composite<F: Field>(f1: &Poly<F>, f2: &Poly<F>, swapped: bool) -> Result<SharedPreimage<F>> {
    let exp = padic_expand(f2, f1)?;
    let scale = f2.max_abs_coeff();
    let Some(g1) = exp.constant_digits(scale) else {
        let residual = exp.digits.iter().flat_map(|dg| dg.coeffs().iter().skip(1)).map(Field::abs).fold(0.0, f64::max);
        return Ok(SharedPreimage::NoSolution { residual: residual / (1.0 + scale) });
    };
    let v = Validation::polys("f2 = g1∘f1", &g1.compose(f1), f2);
    if !v.passed {
        return Ok(SharedPreimage::NoSolution { residual: v.residual });
    }
    Ok(SharedPreimage::Witness(Box::new(SharedPreimageWitness {
        case: WitnessCase::Composite,
        swapped,
        f1: f1.clone(),
        f2: f2.clone(),
        d: f1.deg(),
        w: f1.clone(),
        f1_tilde: Poly::z(),
        f2_tilde: g1.clone(),
        g1,
        g2: Poly::z(),
        sigma1: LinearMap::identity(),
        sigma2: LinearMap::identity(),
        r: None,
        c: None,
        k3: None,
        validations: vec![v],
    })))
}

/// `ĝ1 ∘ f1 = ĝ2 ∘ f2` with `ĝ1` monic, `ĝ1(0) = 0`, as a linear system in
/// the remaining coefficients. The solution is unique when it exists.
fn solve_left_factors<F: Field>(f1: &Poly<F>, f2: &Poly<F>, n1: usize, n2: usize) -> std::result::Result<(Poly<F>, Poly<F>), f64> {
    let p1: Vec<Poly<F>> = (0..=n2).map(|k| f1.pow(k as u32)).collect();
    let p2: Vec<Poly<F>> = (0..=n1).map(|j| f2.pow(j as u32)).collect();
    let top = if F::EXACT { 0 } else { f1.deg() * n2 };
    let unknowns = (n2 - 1) + (n1 + 1);
    let mut a = Vec::with_capacity(top + 1);
    let mut b = Vec::with_capacity(top + 1);
    for row in (0..=top).filter(|_| !F::EXACT) {
        let mut r = Vec::with_capacity(unknowns);
        for p in &p1[1..n2] {
            r.push(p.coeff(row));
        }
        for p in &p2 {
            r.push(-p.coeff(row));
        }
        a.push(r);
        b.push(-p1[n2].coeff(row));
    }
    let x = if F::EXACT {
        triangular_solve(&p1[1..n2], &p2, &p1[n2])
    } else {
        match solve(a, b) {
            Solution::Unique(x) | Solution::Underdetermined { particular: x, .. } => x,
            Solution::Inconsistent { residual } => return Err(residual),
        }
    };
    let mut c1 = vec![F::zero()];
    c1.extend(x[..n2 - 1].iter().cloned());
    c1.push(F::one());
    let gh1 = Poly::new(c1);
    let gh2 = Poly::new(x[n2 - 1..].to_vec());
    let v = Validation::polys("", &gh1.compose(f1), &gh2.compose(f2));
    if !v.passed || gh2.degree() != Some(n1) {
        return Err(v.residual.max(f64::MIN_POSITIVE));
    }
    Ok((gh1, gh2))
}

/// The unknowns' leading degrees `k·d1` and `j·d2` are pairwise distinct, so
/// the equations at those degrees form a triangular system; the caller checks
/// the remaining equations by recomposition.
fn triangular_solve<F: Field>(g1_cols: &[Poly<F>], g2_cols: &[Poly<F>], top: &Poly<F>) -> Vec<F> {
    let cols: Vec<Poly<F>> = g1_cols.iter().cloned().chain(g2_cols.iter().map(|p| -p)).collect();
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(cols[i].deg()));
    let mut x = vec![F::zero(); cols.len()];
    for (pos, &i) in order.iter().enumerate() {
        let row = cols[i].deg();
        let mut r = -top.coeff(row);
        for &j in &order[..pos] {
            r = r - x[j].clone() * cols[j].coeff(row);
        }
        x[i] = r / cols[i].lead();
    }
    x
}

struct Form<F: Field> {
    case: WitnessCase,
    /// `W_new = λ ∘ W`.
    lambda: LinearMap<F>,
    sigma1: LinearMap<F>,
    sigma2: LinearMap<F>,
    f1_tilde: Poly<F>,
    f2_tilde: Poly<F>,
    g1: Poly<F>,
    g2: Poly<F>,
    r: Option<Poly<F>>,
    c: Option<usize>,
}

/// `f̃1 = σ1 ∘ T_{n1} ∘ λ`, `f̃2 = σ2 ∘ T_{n2} ∘ λ` with one common `λ`.
/// The scaling of `λ` is read off `f̃2`, whose degree is at least 3.
fn chebyshev_form<F: Field>(ft1: &Poly<F>, ft2: &Poly<F>, n1: usize) -> Result<Option<Form<F>>> {
    let c1 = critical_center(ft1);
    let big_f2 = ft2.compose_linear(&LinearMap::shift(c1.clone()));
    let Some(nf) = chebyshev_structure(&big_f2)? else { return Ok(None) };
    if !nf.lambda.b().is_negligible(nf.lambda.a().abs()) {
        return Ok(None);
    }
    let alpha = nf.lambda.a().clone();
    let lambda = LinearMap::new(alpha.clone(), -(alpha * c1)).expect("nonzero scaling");
    let f1p = ft1.compose_linear(&lambda.inverse());
    let t1 = chebyshev::<F>(n1);
    let s = f1p.lead() / t1.lead();
    let Some(sigma1) = LinearMap::new(s.clone(), f1p.coeff(0) - s * t1.coeff(0)) else { return Ok(None) };
    if !Validation::polys("", &t1.apply_linear(&sigma1), &f1p).passed {
        return Ok(None);
    }
    let sigma2 = nf.sigma;
    let n2 = nf.n;
    Ok(Some(Form {
        case: WitnessCase::ChebyshevForm,
        lambda,
        f1_tilde: t1.apply_linear(&sigma1),
        f2_tilde: chebyshev::<F>(n2).apply_linear(&sigma2),
        g1: chebyshev::<F>(n2).compose_linear(&sigma1.inverse()),
        g2: t1.compose_linear(&sigma2.inverse()),
        sigma1,
        sigma2,
        r: None,
        c: None,
    }))
}

/// `f̃1 = σ1 ∘ z^{n1} ∘ λ`, `f̃2 = σ2 ∘ z^c R(z^{n1}) ∘ λ` with `λ` the shift to the center of `f̃1`.
fn power_form<F: Field>(ft1: &Poly<F>, ft2: &Poly<F>, n1: usize, n2: usize) -> Result<Option<Form<F>>> {
    let Some(nf) = power_structure(ft1)? else { return Ok(None) };
    let f2p = ft2.compose_linear(&nf.lambda.inverse());
    let scale = f2p.max_abs_coeff();
    let c = n2 % n1;
    if (1..=n2).any(|k| k % n1 != c && !f2p.coeff(k).is_negligible(scale)) {
        return Ok(None);
    }
    let r = Poly::new((0..=(n2 - c) / n1).map(|m| f2p.coeff(c + m * n1)).collect());
    let sigma1 = nf.sigma;
    let sigma2 = LinearMap::shift(f2p.coeff(0));
    let zc = Poly::monomial(F::one(), c);
    let zn1 = Poly::monomial(F::one(), n1);
    Ok(Some(Form {
        case: WitnessCase::PowerForm,
        lambda: nf.lambda,
        f1_tilde: zn1.apply_linear(&sigma1),
        f2_tilde: (&zc * &r.compose(&zn1)).apply_linear(&sigma2),
        g1: (&zc * &r.pow(n1 as u32)).compose_linear(&sigma1.inverse()),
        g2: zn1.compose_linear(&sigma2.inverse()),
        sigma1,
        sigma2,
        r: Some(r),
        c: Some(c),
    }))
}

/// `K3 = g1(K1)`, checked against `g2(K2) = K3`, `g1⁻¹(K3) = K1` and
/// `g2⁻¹(K3) = K2`. `K1` pairs with `w.f1` (after any swap).
pub fn construct_k3<F: Field>(w: &mut SharedPreimageWitness<F>, k1: &CompactSet, k2: &CompactSet, tol: f64) -> Result<CompactSet> {
    if w.case == WitnessCase::Composite {
        return Err(Error::InvalidArgument("K3 is defined for power and Chebyshev witnesses".into()));
    }
    let common = Validation::sets("f1⁻¹(K1) = f2⁻¹(K2)", &preimage(&w.f1, k1)?, &preimage(&w.f2, k2)?, tol);
    if !common.passed {
        return Err(Error::Hypothesis { what: "f1⁻¹(K1) = f2⁻¹(K2)".into(), gap: common.residual });
    }
    let k3 = image(&w.g1, k1)?;
    let checks = [
        common,
        Validation::sets("g2(K2) = K3", &image(&w.g2, k2)?, &k3, tol),
        Validation::sets("g1⁻¹(K3) = K1", &preimage(&w.g1, &k3)?, k1, tol),
        Validation::sets("g2⁻¹(K3) = K2", &preimage(&w.g2, &k3)?, k2, tol),
    ];
    w.validations.extend(checks.iter().cloned());
    for v in checks {
        v.require()?;
    }
    w.k3 = Some(k3.clone());
    Ok(k3)
}
