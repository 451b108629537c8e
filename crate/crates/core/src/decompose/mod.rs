//! Functional decomposition: right factors, decomposition chains, greatest
//! common right components, P-adic expansion and fiber averages.

mod structure;

pub use structure::{chebyshev_structure, power_structure, rotational_structure, NormalForm, Order, RotationalStructure};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::poly::{normalize, NormalMode, Poly};
use crate::scalar::Field;

/// Recomposition tolerance for the approximate flavor.
pub const APPROX_RECOMPOSE_TOL: f64 = 1e-9;

/// `outer ∘ chain[0] ∘ … ∘ chain[k] ∘ inner`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<F: Field> {
    pub chain: Vec<Poly<F>>,
    pub outer: LinearMap<F>,
    pub inner: LinearMap<F>,
}

impl<F: Field> Decomposition<F> {
    pub fn recompose(&self) -> Poly<F> {
        let mut acc = self.inner.as_poly();
        for p in self.chain.iter().rev() {
            acc = p.compose(&acc);
        }
        acc.apply_linear(&self.outer)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.chain.iter().map(Poly::deg).collect()
    }
}

/// `Q = Σ digits[i] · base^i` with `deg digits[i] < deg base`.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicExpansion<F: Field> {
    pub base: Poly<F>,
    pub digits: Vec<Poly<F>>,
}

impl<F: Field> PadicExpansion<F> {
    pub fn recompose(&self) -> Poly<F> {
        let mut acc = Poly::zero();
        for d in self.digits.iter().rev() {
            acc = &(&acc * &self.base) + d;
        }
        acc
    }

    /// The digits as a polynomial in the base, when every digit is constant
    /// (negligibly non-constant for the approximate flavor, relative to `scale`).
    pub fn constant_digits(&self, scale: f64) -> Option<Poly<F>> {
        let mut out = Vec::with_capacity(self.digits.len());
        for d in &self.digits {
            if d.coeffs().iter().skip(1).any(|c| !c.is_negligible(scale)) {
                return None;
            }
            out.push(d.coeff(0));
        }
        Some(Poly::new(out))
    }
}

pub fn padic_expand<F: Field>(q: &Poly<F>, p: &Poly<F>) -> Result<PadicExpansion<F>> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Degree("P-adic base needs degree >= 1".into())),
    };
    let k = q.degree().unwrap_or(0) / n;
    let mut digits = Vec::with_capacity(k + 1);
    let mut rest = q.clone();
    for _ in 0..=k {
        let (quot, rem) = rest.div_rem(p);
        digits.push(rem);
        rest = quot;
    }
    debug_assert!(rest.is_zero() || !F::EXACT);
    Ok(PadicExpansion { base: p.clone(), digits })
}

/// Power sums `p_0 … p_{n−1}` of the roots of `P(y) − w`; none depends on `w`.
pub fn fiber_power_sums<F: Field>(p: &Poly<F>) -> Vec<F> {
    let n = p.deg();
    let lead = p.lead();
    // monic coefficients c_k of y^k
    let c: Vec<F> = (0..=n).map(|k| p.coeff(k) / lead.clone()).collect();
    let mut sums = vec![F::from_i64(n as i64)];
    for j in 1..n {
        let mut s = F::from_i64(j as i64) * c[n - j].clone();
        for i in 1..j {
            s = s + c[n - i].clone() * sums[j - i].clone();
        }
        sums.push(-s);
    }
    sums
}

/// Mean of `Q` over the fiber `P⁻¹(P(z))`, counted with multiplicity, as a polynomial.
pub fn fiber_average<F: Field>(q: &Poly<F>, p: &Poly<F>) -> Result<Poly<F>> {
    let exp = padic_expand(q, p)?;
    let n = p.deg();
    let sums = fiber_power_sums(p);
    let inv_n = F::one() / F::from_i64(n as i64);
    let means: Vec<F> = exp
        .digits
        .iter()
        .map(|d| {
            let mut acc = F::zero();
            for (j, c) in d.coeffs().iter().enumerate() {
                acc = acc + c.clone() * sums[j].clone();
            }
            acc * inv_n.clone()
        })
        .collect();
    Ok(Poly::new(means).compose(p))
}

fn check_proper_divisor(n: usize, r: usize) -> Result<()> {
    if r <= 1 || r >= n || n % r != 0 {
        return Err(Error::InvalidArgument(format!("{r} is not a proper divisor of {n}")));
    }
    Ok(())
}

/// The Kozen–Landau candidate: the unique monic `h` with `h(0) = 0` whose
/// `s`-th power agrees with `f / lead` in the top `r` coefficients.
pub fn right_factor_candidate<F: Field>(f: &Poly<F>, r: usize) -> Poly<F> {
    let n = f.deg();
    let s = n / r;
    let lead = f.lead();
    // reversed monic series F(x) = x^n f̂(1/x), F_0 = 1
    let big_f: Vec<F> = (0..r).map(|k| f.coeff(n - k) / lead.clone()).collect();
    let alpha_plus_one = F::from_ratio(1, s as i64) + F::one();
    let mut g = vec![F::one()];
    for k in 1..r {
        let mut acc = F::zero();
        for j in 1..=k {
            let w = alpha_plus_one.clone() * F::from_i64(j as i64) - F::from_i64(k as i64);
            acc = acc + w * big_f[j].clone() * g[k - j].clone();
        }
        g.push(acc / F::from_i64(k as i64));
    }
    let mut coeffs = vec![F::zero(); r + 1];
    for (k, gk) in g.into_iter().enumerate() {
        coeffs[r - k] = gk;
    }
    Poly::new(coeffs)
}

/// `f = g ∘ h` with `deg h = r`, `h` monic and `h(0) = 0`, when it exists.
pub fn right_factor<F: Field>(f: &Poly<F>, r: usize) -> Result<Option<(Poly<F>, Poly<F>)>> {
    check_proper_divisor(f.degree().unwrap_or(0), r)?;
    let h = right_factor_candidate(f, r);
    let exp = padic_expand(f, &h)?;
    let scale = f.max_abs_coeff();
    let Some(g) = exp.constant_digits(scale) else { return Ok(None) };
    if !F::EXACT && g.compose(&h).residual(f) > APPROX_RECOMPOSE_TOL {
        return Ok(None);
    }
    Ok(Some((g, h)))
}

/// Right factor in normal form for any `1 ≤ r ≤ deg f`, including the trivial
/// cases `r = deg f` (the normalized `f`) and `r = 1` (`z`).
pub fn right_factor_any<F: Field>(f: &Poly<F>, r: usize) -> Result<Option<(Poly<F>, Poly<F>)>> {
    let n = f.degree().unwrap_or(0);
    if r == 0 || n == 0 || n % r != 0 {
        return Err(Error::InvalidArgument(format!("{r} does not divide {n}")));
    }
    if r == 1 {
        return Ok(Some((f.clone(), Poly::z())));
    }
    if r == n {
        let nf = normalize(f, NormalMode::RightFactorForm)?;
        return Ok(Some((nf.post.as_poly(), nf.h)));
    }
    right_factor(f, r)
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// A maximal chain, splitting off the smallest right factor at each step.
pub fn full_decomposition<F: Field>(f: &Poly<F>) -> Result<Decomposition<F>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::Degree("decomposition needs deg f >= 1".into()));
    }
    if n == 1 {
        let m = LinearMap::from_poly(f).expect("degree one");
        return Ok(Decomposition { chain: Vec::new(), outer: m, inner: LinearMap::identity() });
    }
    let nf = normalize(f, NormalMode::RightFactorForm)?;
    let mut outer = nf.post;
    let mut cur = nf.h;
    let mut rev = Vec::new();
    'outer: loop {
        let m = cur.deg();
        for r in divisors(m).into_iter().filter(|&r| r > 1 && r < m) {
            if let Some((g, h)) = right_factor(&cur, r)? {
                rev.push(h);
                let ng = normalize(&g, NormalMode::RightFactorForm)?;
                outer = outer.compose(&ng.post);
                cur = ng.h;
                continue 'outer;
            }
        }
        rev.push(cur);
        break;
    }
    rev.reverse();
    Ok(Decomposition { chain: rev, outer, inner: LinearMap::identity() })
}

/// Greatest common right component `W` with `f1 = A ∘ W`, `f2 = B ∘ W`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gcrc<F: Field> {
    pub w: Poly<F>,
    pub a: Poly<F>,
    pub b: Poly<F>,
}

pub fn gcrc<F: Field>(f1: &Poly<F>, f2: &Poly<F>) -> Result<Gcrc<F>> {
    let (n1, n2) = (f1.degree().unwrap_or(0), f2.degree().unwrap_or(0));
    if n1 == 0 || n2 == 0 {
        return Err(Error::Degree("gcrc needs nonconstant inputs".into()));
    }
    let d = n1.gcd(&n2);
    for r in divisors(d).into_iter().rev().filter(|&r| r > 1) {
        let (Some((a, w1)), Some((b, w2))) = (right_factor_any(f1, r)?, right_factor_any(f2, r)?) else { continue };
        if w1.approx_eq(&w2, APPROX_RECOMPOSE_TOL) {
            return Ok(Gcrc { w: w1, a, b });
        }
    }
    Ok(Gcrc { w: Poly::z(), a: f1.clone(), b: f2.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_exact;
    use crate::poly::{chebyshev, ExactPoly};
    use crate::scalar::GaussRat;

    fn p(s: &str) -> ExactPoly {
        parse_exact(s).unwrap()
    }

    #[test]
    fn right_factor_examples() {
        assert_eq!(right_factor(&p("z^6"), 2).unwrap(), Some((p("z^3"), p("z^2"))));
        assert_eq!(right_factor(&p("(z^2+1)^3"), 2).unwrap(), Some((p("(z+1)^3"), p("z^2"))));
        assert_eq!(right_factor(&p("z^4 + z"), 2).unwrap(), None);
        assert!(right_factor(&p("z^6"), 4).is_err());
        assert!(right_factor(&p("z^6"), 6).is_err());
    }

    #[test]
    fn right_factor_of_nonmonic_input() {
        let f = p("3*(z^2 + z)^3 - 2*(z^2+z) + 7");
        let (g, h) = right_factor(&f, 2).unwrap().unwrap();
        assert_eq!(h, p("z^2 + z"));
        assert_eq!(g.compose(&h), f);
    }

    #[test]
    fn full_decomposition_examples() {
        let d = full_decomposition(&p("z^8")).unwrap();
        assert_eq!(d.chain, vec![p("z^2"), p("z^2"), p("z^2")]);
        assert!(d.outer.is_identity() && d.inner.is_identity());

        let t12 = chebyshev::<GaussRat>(12);
        let d = full_decomposition(&t12).unwrap();
        assert_eq!(d.degrees().iter().product::<usize>(), 12);
        assert_eq!(d.chain.len(), 3);
        assert_eq!(d.recompose(), t12);

        let d = full_decomposition(&p("z^3 + z")).unwrap();
        assert_eq!(d.chain, vec![p("z^3 + z")]);

        let d = full_decomposition(&p("2z + 1")).unwrap();
        assert!(d.chain.is_empty());
        assert_eq!(d.recompose(), p("2z + 1"));
    }

    #[test]
    fn gcrc_examples() {
        let g = gcrc(&p("(z^2+1)^2"), &p("(z^2+1)^3 + (z^2+1)")).unwrap();
        assert_eq!(g.w, p("z^2"));
        assert_eq!(g.a, p("(z+1)^2"));
        assert_eq!(g.b, p("(z+1)^3 + (z+1)"));
        assert_eq!(gcrc(&p("z^4"), &p("z^6")).unwrap().w, p("z^2"));
        let g = gcrc(&p("z^2"), &p("z^3 + 1")).unwrap();
        assert_eq!(g.w, p("z"));
    }

    #[test]
    fn padic_examples() {
        let e = padic_expand(&p("z^5"), &p("z^2")).unwrap();
        assert_eq!(e.digits, vec![p("0"), p("0"), p("z")]);
        let e = padic_expand(&p("z^2 + z + 1"), &p("z^2")).unwrap();
        assert_eq!(e.digits, vec![p("z + 1"), p("1")]);
        let base = p("z^3 - 2z + i");
        let e = padic_expand(&base, &base).unwrap();
        assert_eq!(e.digits, vec![p("0"), p("1")]);
    }

    #[test]
    fn fiber_average_examples() {
        assert_eq!(fiber_average(&p("z^3 + z"), &p("z^2")).unwrap(), p("0"));
        assert_eq!(fiber_average(&p("z^2"), &p("z^2")).unwrap(), p("z^2"));
        assert_eq!(fiber_average(&p("z^2 + z + 1"), &p("z^2")).unwrap(), p("z^2 + 1"));
    }

    #[test]
    fn power_sums_match_roots() {
        // P(y) = 6 has roots 1, 2, 3
        let s = fiber_power_sums(&p("z^3 - 6z^2 + 11z"));
        assert_eq!(s, vec![GaussRat::from_i64(3), GaussRat::from_i64(6), GaussRat::from_i64(14)]);
    }
}
