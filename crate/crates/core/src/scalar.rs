//! Coefficient fields.
//!
//! Two flavors share one trait: [`GaussRat`] is an exact Gaussian rational
//! (real and imaginary parts are arbitrary-precision rationals) and
//! [`Complex64`] is the approximate double-precision flavor.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative tolerance used by the approximate flavor when deciding whether a
/// computed value is zero.
pub const APPROX_ZERO_TOL: f64 = 1e-9;

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for error-free arithmetic.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact conversion for the exact flavor (every finite double is a dyadic rational).
    fn from_complex(c: Complex64) -> Self;
    fn to_complex(&self) -> Complex64;
    fn from_gauss(g: &GaussRat) -> Self;
    /// The exact value, for the exact flavor only.
    fn as_gauss(&self) -> Option<GaussRat>;

    /// Exactly zero.
    fn is_zero(&self) -> bool;

    /// Zero for decision purposes: exact zero, or below `APPROX_ZERO_TOL * max(1, scale)`.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= APPROX_ZERO_TOL * scale.max(1.0)
        }
    }

    fn is_finite(&self) -> bool {
        let c = self.to_complex();
        c.re.is_finite() && c.im.is_finite()
    }

    fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    fn conj(&self) -> Self;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Coefficients of the product of two nonempty coefficient vectors.
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut out = vec![Self::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        out
    }

    /// Coefficients of `outer ∘ inner`, both nonempty, by Horner's scheme.
    fn poly_compose(outer: &[Self], inner: &[Self]) -> Vec<Self> {
        let mut acc = vec![outer[outer.len() - 1].clone()];
        for c in outer.iter().rev().skip(1) {
            acc = Self::poly_mul(&acc, inner);
            acc[0] = acc[0].clone() + c.clone();
        }
        acc
    }

    /// Parseable text (`3/4`, `-i`, `(1/2 + 2*i)`, `0.25`).
    fn to_text(&self) -> String;

    /// `Some(sign)` when the value is real.
    fn real_sign(&self) -> Option<std::cmp::Ordering>;

    /// Some `r` with `r^n == self`. The approximate flavor returns the principal
    /// root; the exact flavor returns `None` when no root lies in Q(i).
    fn nth_root(&self, n: u32) -> Option<Self>;
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_complex(c: Complex64) -> Self {
        c
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn from_gauss(g: &GaussRat) -> Self {
        g.to_complex()
    }
    fn as_gauss(&self) -> Option<GaussRat> {
        None
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_text(&self) -> String {
        if self.im == 0.0 {
            format!("{:?}", self.re)
        } else if self.re == 0.0 {
            format!("{:?}*i", self.im)
        } else if self.im < 0.0 {
            format!("({:?} - {:?}*i)", self.re, -self.im)
        } else {
            format!("({:?} + {:?}*i)", self.re, self.im)
        }
    }
    fn real_sign(&self) -> Option<std::cmp::Ordering> {
        (self.im == 0.0).then(|| self.re.partial_cmp(&0.0).unwrap_or(std::cmp::Ordering::Equal))
    }
    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if Field::is_zero(self) {
            return Some(*self);
        }
        Some(self.powf(1.0 / n as f64))
    }
}

/// Exact Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Recognizes a double as a Gaussian rational with bounded denominators.
    pub fn recognize(c: Complex64, max_den: u64, tol: f64) -> Option<Self> {
        let re = recognize_rational(c.re, max_den, tol)?;
        let im = recognize_rational(c.im, max_den, tol)?;
        Some(GaussRat { re, im })
    }
}

/// Continued-fraction recognition of `x` as `p/q` with `q <= max_den` and `|x - p/q| <= tol`.
pub fn recognize_rational(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 as u128 > max_den as u128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let rem = frac - a;
        if rem.abs() < 1e-300 {
            break;
        }
        frac = 1.0 / rem;
    }
    if k1 != 0 && (x - h1 as f64 / k1 as f64).abs() <= tol {
        return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
    }
    None
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to scaled division for huge numerators/denominators.
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        if shift >= 0 {
            let q = r / BigRational::from_integer(BigInt::one() << shift as usize);
            q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
        } else {
            let q = r * BigRational::from_integer(BigInt::one() << (-shift) as usize);
            q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
        }
    })
}

/// Common denominator `L` and the Gaussian integers `L·c`.
fn clear_denominators(cs: &[GaussRat]) -> (BigInt, Vec<(BigInt, BigInt)>) {
    let l = cs.iter().fold(BigInt::one(), |l, c| l.lcm(c.re.denom()).lcm(c.im.denom()));
    let scaled = cs
        .iter()
        .map(|c| (c.re.numer() * (&l / c.re.denom()), c.im.numer() * (&l / c.im.denom())))
        .collect();
    (l, scaled)
}

fn gauss_int_mul(a: &[(BigInt, BigInt)], b: &[(BigInt, BigInt)]) -> Vec<(BigInt, BigInt)> {
    let real = a.iter().chain(b).all(|(_, im)| im.is_zero());
    let mut out = vec![(BigInt::zero(), BigInt::zero()); a.len() + b.len() - 1];
    for (i, (xr, xi)) in a.iter().enumerate() {
        if xr.is_zero() && xi.is_zero() {
            continue;
        }
        for (j, (yr, yi)) in b.iter().enumerate() {
            let o = &mut out[i + j];
            o.0 += xr * yr;
            if !real {
                o.0 -= xi * yi;
                o.1 += xr * yi;
                o.1 += xi * yr;
            }
        }
    }
    out
}

fn from_gauss_ints(v: Vec<(BigInt, BigInt)>, den: &BigInt) -> Vec<GaussRat> {
    v.into_iter()
        .map(|(r, i)| GaussRat { re: BigRational::new(r, den.clone()), im: BigRational::new(i, den.clone()) })
        .collect()
}

impl Field for GaussRat {
    const EXACT: bool = true;

    /// Convolution over the Gaussian integers after clearing denominators, so
    /// each output coefficient is reduced once.
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        let (la, ia) = clear_denominators(a);
        let (lb, ib) = clear_denominators(b);
        from_gauss_ints(gauss_int_mul(&ia, &ib), &(la * lb))
    }

    /// Horner's scheme on `L^{s−k}·G_k` and `H`, where `inner = H/L` and
    /// `outer = G/L_g` have integer `G`, `H`.
    fn poly_compose(outer: &[Self], inner: &[Self]) -> Vec<Self> {
        let (lg, go) = clear_denominators(outer);
        let (l, h) = clear_denominators(inner);
        let s = outer.len() - 1;
        let mut acc = vec![go[s].clone()];
        let mut lpow = BigInt::one();
        for k in (0..s).rev() {
            lpow *= &l;
            acc = gauss_int_mul(&acc, &h);
            acc[0].0 += &go[k].0 * &lpow;
            acc[0].1 += &go[k].1 * &lpow;
        }
        from_gauss_ints(acc, &(lg * lpow))
    }

    fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }
    fn imag_unit() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }
    fn from_i64(n: i64) -> Self {
        GaussRat::real(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn from_complex(c: Complex64) -> Self {
        let re = BigRational::from_float(c.re).expect("finite real part");
        let im = BigRational::from_float(c.im).expect("finite imaginary part");
        GaussRat { re, im }
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn from_gauss(g: &GaussRat) -> Self {
        g.clone()
    }
    fn as_gauss(&self) -> Option<GaussRat> {
        Some(self.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn real_sign(&self) -> Option<std::cmp::Ordering> {
        self.im.is_zero().then(|| self.re.cmp(&BigRational::zero()))
    }
    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if self.is_zero() || n == 1 {
            return Some(self.clone());
        }
        let approx = self.to_complex();
        let principal = approx.powf(1.0 / n as f64);
        let step = Complex64::from_polar(1.0, std::f64::consts::TAU / n as f64);
        let scale = principal.norm().max(1.0);
        let mut cand = principal;
        for _ in 0..n {
            if let Some(r) = GaussRat::recognize(cand, 1 << 20, 1e-9 * scale) {
                if r.pow(n) == *self {
                    return Some(r);
                }
            }
            cand *= step;
        }
        None
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(self.re * o.re);
        }
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    /// Panics on a zero divisor, like the underlying rationals.
    fn div(self, o: GaussRat) -> GaussRat {
        assert!(!o.is_zero(), "division by zero Gaussian rational");
        if o.im.is_zero() {
            return GaussRat { re: self.re / &o.re, im: self.im / o.re };
        }
        let n = o.norm_sqr();
        let c = o.conj();
        let p = self * c;
        GaussRat { re: p.re / &n, im: p.im / n }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

fn fmt_rat(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    /// `a`, `b*i`, or `(a + b*i)`; re-parses to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rat(&self.re, f),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    fmt_rat(&self.im, f)?;
                    write!(f, "*i")
                }
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_rat(&self.re, f)?;
                if self.im.is_negative() {
                    write!(f, " - ")?;
                    fmt_rat(&-self.im.clone(), f)?;
                } else {
                    write!(f, " + ")?;
                    fmt_rat(&self.im, f)?;
                }
                write!(f, "*i)")
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussRat {
        GaussRat::from_ratio(n, d)
    }

    #[test]
    fn gaussian_field_ops_are_exact() {
        let a = GaussRat::new(BigRational::new(1.into(), 3.into()), BigRational::new((-2).into(), 5.into()));
        let b = GaussRat::new(BigRational::new(7.into(), 2.into()), BigRational::one());
        let p = a.clone() * b.clone();
        assert_eq!(p / b.clone(), a);
        assert_eq!((a.clone() + b.clone()) - b, a);
        assert_eq!(GaussRat::imag_unit().pow(2), -GaussRat::one());
    }

    #[test]
    fn nth_root_finds_rational_roots_only() {
        assert_eq!(q(9, 4).nth_root(2).map(|r| r.pow(2)), Some(q(9, 4)));
        assert!(q(2, 1).nth_root(2).is_none());
        // -1 has the rational cube root -1 even though the principal root is not rational.
        assert_eq!(q(-1, 1).nth_root(3).map(|r| r.pow(3)), Some(q(-1, 1)));
        // -3/4 is not a square in Q(i).
        assert!(q(-3, 4).nth_root(2).is_none());
        assert_eq!((-GaussRat::one()).nth_root(2).map(|r| r.pow(2)), Some(-GaussRat::one()));
    }

    #[test]
    fn display_round_trips_shape() {
        assert_eq!(q(-3, 4).to_string(), "-3/4");
        assert_eq!(GaussRat::imag_unit().to_string(), "i");
        let z = GaussRat::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-1).into()));
        assert_eq!(z.to_string(), "(1/2 - 1*i)");
    }

    #[test]
    fn approx_negligible_is_relative() {
        let tiny = Complex64::new(1e-12, 0.0);
        assert!(tiny.is_negligible(1.0));
        assert!(!Complex64::new(1e-3, 0.0).is_negligible(1.0));
        assert!(Complex64::new(1e-3, 0.0).is_negligible(1e7));
        assert!(!q(1, 1_000_000_000).is_negligible(1e12));
    }

    #[test]
    fn rational_recognition() {
        let r = recognize_rational(0.75, 100, 1e-12).unwrap();
        assert_eq!(r, BigRational::new(3.into(), 4.into()));
        assert!(recognize_rational(std::f64::consts::PI, 100, 1e-12).is_none());
    }
}
