//! Univariate polynomials over a [`Field`], Chebyshev constructors and
//! conjugation by linear maps.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::scalar::{Field, GaussRat};

pub type ExactPoly = Poly<GaussRat>;
pub type ApproxPoly = Poly<Complex64>;

/// Coefficients in ascending degree; the last stored coefficient is never
/// exactly zero, so the zero polynomial is the empty sequence and has
/// `degree() == None`.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| F::from_i64(x)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// `None` is the degree −∞ of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating the zero polynomial as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == F::one()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex();
        }
        acc
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self ∘ inner`, by Horner's scheme in the polynomial ring.
    pub fn compose(&self, inner: &Self) -> Self {
        if self.is_zero() || inner.is_zero() {
            return Self::constant(self.coeff(0));
        }
        Poly::new(F::poly_compose(&self.coeffs, &inner.coeffs))
    }

    /// `self ∘ m`.
    pub fn compose_linear(&self, m: &LinearMap<F>) -> Self {
        self.compose(&m.as_poly())
    }

    /// `m ∘ self`.
    pub fn apply_linear(&self, m: &LinearMap<F>) -> Self {
        &self.scale(m.a()) + &Self::constant(m.b().clone())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = F::one() / d.lead();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = rem[k].clone() * lead_inv.clone();
            if q.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = rem[idx].clone() - q.clone() * dc.clone();
            }
            // the leading slot is cancelled by construction; clear rounding residue
            rem[k] = F::zero();
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(F::one() / self.lead()))
    }

    /// Monic greatest common divisor (meaningful for the exact flavor).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn to_approx(&self) -> ApproxPoly {
        Poly::new(self.coeffs.iter().map(Field::to_complex).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Field::abs).fold(0.0, f64::max)
    }

    /// Largest coefficientwise gap.
    pub fn distance(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).abs()).fold(0.0, f64::max)
    }

    /// Coefficient gap relative to `1 + max |coeff|`; zero means equal for the exact flavor.
    pub fn residual(&self, other: &Self) -> f64 {
        if F::EXACT && self == other {
            return 0.0;
        }
        let scale = 1.0 + self.max_abs_coeff().max(other.max_abs_coeff());
        self.distance(other) / scale
    }

    /// Equality: exact for the exact flavor, `residual <= tol` otherwise.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if F::EXACT {
            self == other
        } else {
            self.residual(other) <= tol
        }
    }

    /// Drops trailing coefficients that are negligible relative to the largest one.
    pub fn trim_negligible(&self) -> Self {
        let scale = self.max_abs_coeff();
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(|c| c.is_negligible(scale)) {
            v.pop();
        }
        Self::new(v)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(Field::is_finite)
    }

    /// Multiplicative form of degree: `deg(g∘f) = deg g · deg f`.
    pub fn composed_degree(&self, inner: &Self) -> usize {
        self.deg() * inner.deg()
    }
}

impl ExactPoly {
    pub fn from_rationals(c: &[(i64, i64)]) -> Self {
        Poly::new(c.iter().map(|&(n, d)| GaussRat::from_ratio(n, d)).collect())
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        Poly::new(F::poly_mul(&self.coeffs, &o.coeffs))
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, o: Poly<F>) -> Poly<F> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> fmt::Display for Poly<F> {
    /// `z^3 - 3/4*z + 1/2*i`; re-parses with [`crate::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, mag) = match c.real_sign() {
                Some(Ordering::Less) => (true, -c.clone()),
                _ => (false, c.clone()),
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{}", mag.to_text())?;
            } else if mag == F::one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", mag.to_text())?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// `g ∘ f`.
pub fn compose<F: Field>(g: &Poly<F>, f: &Poly<F>) -> Poly<F> {
    g.compose(f)
}

/// Classical Chebyshev polynomial `T_n`. The coefficient of `z^{n−2k}` is
/// built from the previous one by the ratio
/// `−(n−2k)(n−2k−1) / (4(k+1)(n−k−1))`, starting from `2^{n−1}`.
pub fn chebyshev<F: Field>(n: usize) -> Poly<F> {
    if n == 0 {
        return Poly::one();
    }
    let mut coeffs = vec![F::zero(); n + 1];
    let mut a = BigInt::one() << (n - 1);
    for k in 0..=n / 2 {
        coeffs[n - 2 * k] = F::from_gauss(&GaussRat::real(BigRational::from_integer(a.clone())));
        if 2 * k + 2 <= n {
            a = -(a * BigInt::from((n - 2 * k) * (n - 2 * k - 1))) / BigInt::from(4 * (k + 1) * (n - k - 1));
        }
    }
    Poly::new(coeffs)
}

/// `2^{1−n}·T_n`, the monic Chebyshev polynomial (`n ≥ 1`).
pub fn monic_chebyshev<F: Field>(n: usize) -> Result<Poly<F>> {
    if n == 0 {
        return Err(Error::Degree("monic Chebyshev polynomial needs n >= 1".into()));
    }
    Ok(chebyshev::<F>(n).monic())
}

/// `p ∘ p ∘ … ∘ p` (`s` copies).
pub fn iterate<F: Field>(p: &Poly<F>, s: usize) -> Result<Poly<F>> {
    if s == 0 {
        return Err(Error::InvalidArgument("iterate needs s >= 1".into()));
    }
    let mut acc = p.clone();
    for _ in 1..s {
        acc = p.compose(&acc);
        if !acc.is_finite() {
            return Err(Error::Overflow(format!("iterate(p, {s})")));
        }
    }
    Ok(acc)
}

/// `m ∘ f ∘ m⁻¹`.
pub fn conjugate<F: Field>(f: &Poly<F>, m: &LinearMap<F>) -> Poly<F> {
    f.compose_linear(&m.inverse()).apply_linear(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalMode {
    /// `h` monic with `h(0) = 0`, obtained by a left linear map only.
    RightFactorForm,
    /// `h` monic with vanishing `z^{deg−1}` coefficient, obtained by a shift of the variable.
    CenteredForm,
}

/// A normal form `h` with `f = post ∘ h ∘ pre⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized<F: Field> {
    pub h: Poly<F>,
    pub pre: LinearMap<F>,
    pub post: LinearMap<F>,
}

pub fn normalize<F: Field>(f: &Poly<F>, mode: NormalMode) -> Result<Normalized<F>> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Degree("normalize needs deg f >= 1".into())),
    };
    let lead = f.lead();
    match mode {
        NormalMode::RightFactorForm => {
            let post = LinearMap::new(lead.clone(), f.coeff(0)).expect("nonzero leading coefficient");
            let h = f.apply_linear(&post.inverse());
            Ok(Normalized { h, pre: LinearMap::identity(), post })
        }
        NormalMode::CenteredForm => {
            let c = critical_center(f);
            let pre = LinearMap::shift(c);
            let h = f.compose_linear(&pre).scale(&(F::one() / lead.clone()));
            let post = LinearMap::scaling(lead).expect("nonzero leading coefficient");
            debug_assert!(n >= 1);
            Ok(Normalized { h, pre, post })
        }
    }
}

/// `−a_{n−1} / (n·a_n)`: the mean of the roots (and of the critical points).
pub fn critical_center<F: Field>(f: &Poly<F>) -> F {
    let n = f.deg();
    if n == 0 {
        return F::zero();
    }
    -(f.coeff(n - 1) / (F::from_i64(n as i64) * f.lead()))
}
