//! Recognizers for rotational symmetry, pure powers and Chebyshev forms.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::poly::{chebyshev, critical_center, Poly};
use crate::scalar::Field;

use super::APPROX_RECOMPOSE_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Order {
    Finite(usize),
    Infinite,
}

/// `f(z) = outer((z−c)^a · R((z−c)^b))`; for `Order::Infinite`, `a = 0` and
/// `f(z) = outer(R(z−c))` with `R = lead·z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationalStructure<F: Field> {
    pub center: F,
    pub order: Order,
    pub residue: usize,
    pub inner: Poly<F>,
    pub outer: LinearMap<F>,
}

impl<F: Field> RotationalStructure<F> {
    pub fn recompose(&self) -> Poly<F> {
        let shift = Poly::new(vec![-self.center.clone(), F::one()]);
        let body = match self.order {
            Order::Infinite => self.inner.compose(&shift),
            Order::Finite(b) => {
                let zb = shift.pow(b as u32);
                &shift.pow(self.residue as u32) * &self.inner.compose(&zb)
            }
        };
        body.apply_linear(&self.outer)
    }
}

/// Center `c`, then `b` = gcd of exponent differences of `f(z + c) − f(c)`.
pub fn rotational_structure<F: Field>(f: &Poly<F>) -> Result<RotationalStructure<F>> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::Degree("rotational structure needs deg f >= 2".into()));
    }
    let c = critical_center(f);
    let g = f.compose(&Poly::new(vec![c.clone(), F::one()]));
    let scale = g.max_abs_coeff();
    let exps: Vec<usize> = (1..=n).filter(|&k| !g.coeff(k).is_negligible(scale)).collect();
    let outer = LinearMap::shift(g.coeff(0));
    if exps.len() == 1 {
        return Ok(RotationalStructure {
            center: c,
            order: Order::Infinite,
            residue: 0,
            inner: Poly::monomial(g.lead(), n),
            outer,
        });
    }
    let b = exps.iter().fold(0usize, |acc, &k| acc.gcd(&(n - k)));
    let a = n % b;
    let inner = Poly::new((0..=(n - a) / b).map(|m| g.coeff(a + m * b)).collect());
    Ok(RotationalStructure { center: c, order: Order::Finite(b), residue: a, inner, outer })
}

/// `f = σ ∘ P_n ∘ λ` with `P_n` a pure power or a Chebyshev polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<F: Field> {
    pub sigma: LinearMap<F>,
    pub lambda: LinearMap<F>,
    pub n: usize,
}

impl<F: Field> NormalForm<F> {
    pub fn recompose_power(&self) -> Poly<F> {
        Poly::monomial(F::one(), self.n).compose_linear(&self.lambda).apply_linear(&self.sigma)
    }

    pub fn recompose_chebyshev(&self) -> Poly<F> {
        chebyshev::<F>(self.n).compose_linear(&self.lambda).apply_linear(&self.sigma)
    }
}

fn centered<F: Field>(f: &Poly<F>) -> (F, Poly<F>) {
    let c = critical_center(f);
    let g = f.compose(&Poly::new(vec![c.clone(), F::one()]));
    (c, g)
}

/// `f = σ ∘ z^n ∘ λ` with `λ = z − c` monic; `None` when `f′` has more than one root.
pub fn power_structure<F: Field>(f: &Poly<F>) -> Result<Option<NormalForm<F>>> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::Degree("power structure needs deg f >= 2".into()));
    }
    let (c, g) = centered(f);
    let scale = g.max_abs_coeff();
    if (1..n).any(|k| !g.coeff(k).is_negligible(scale)) {
        return Ok(None);
    }
    let sigma = LinearMap::new(g.lead(), g.coeff(0)).expect("nonzero leading coefficient");
    let nf = NormalForm { sigma, lambda: LinearMap::shift(-c), n };
    if !F::EXACT && nf.recompose_power().residual(f) > APPROX_RECOMPOSE_TOL {
        return Ok(None);
    }
    Ok(Some(nf))
}

/// `f = σ ∘ T_n ∘ λ`. The shape test needs only `α²` (the square of the
/// scaling in `λ`) and is exact; building `λ` needs `α` itself, so exact
/// inputs whose `α` lies outside Q(i) give [`Error::Irrational`].
pub fn chebyshev_structure<F: Field>(f: &Poly<F>) -> Result<Option<NormalForm<F>>> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::Degree("Chebyshev structure needs deg f >= 2".into()));
    }
    let (c, g) = centered(f);
    let scale = g.max_abs_coeff();
    let lead = g.lead();
    let t = chebyshev::<F>(n);
    let two_pow = F::from_i64(2).pow(n as u32 - 1);

    let alpha = if n == 2 {
        // every quadratic qualifies; prefer the scaling fixed by the constant term
        let fallback = F::one();
        if g.coeff(0).is_negligible(scale) {
            fallback
        } else {
            let sq = -(F::from_i64(2) * lead.clone()) / (F::from_i64(4) * g.coeff(0));
            sq.nth_root(2).unwrap_or(fallback)
        }
    } else {
        let sub = g.coeff(n - 2);
        if sub.is_negligible(scale) {
            return Ok(None);
        }
        let alpha_sq = -(F::from_i64(n as i64) * lead.clone()) / (F::from_i64(4) * sub);
        // coefficient k of s·T_n(αz) is (lead/2^{n−1})·t_k·(α²)^{−(n−k)/2}
        let unit = lead.clone() / two_pow.clone();
        for k in 1..n {
            let expected = if (n - k) % 2 == 1 {
                F::zero()
            } else {
                unit.clone() * t.coeff(k) / alpha_sq.pow(((n - k) / 2) as u32)
            };
            if !(g.coeff(k) - expected).is_negligible(scale) {
                return Ok(None);
            }
        }
        match alpha_sq.nth_root(2) {
            Some(a) => a,
            None => return Err(Error::Irrational(format!("Chebyshev scaling with square {alpha_sq}"))),
        }
    };
    let s = lead / (two_pow * alpha.pow(n as u32));
    let shift = g.coeff(0) - s.clone() * t.coeff(0);
    let sigma = LinearMap::new(s, shift).expect("nonzero scale");
    let lambda = LinearMap::new(alpha.clone(), -(alpha * c)).expect("nonzero scaling");
    let nf = NormalForm { sigma, lambda, n };
    if !nf.recompose_chebyshev().approx_eq(f, APPROX_RECOMPOSE_TOL) {
        return Ok(None);
    }
    Ok(Some(nf))
}
