use std::fmt;

use num_complex::Complex64;

use crate::poly::Poly;
use crate::scalar::{Field, GaussRat};

/// The affine map `z ↦ a·z + b` with `a ≠ 0`.
#[derive(Clone, PartialEq)]
pub struct LinearMap<F> {
    a: F,
    b: F,
}

impl<F: Field> LinearMap<F> {
    /// Returns `None` when `a` is zero.
    pub fn new(a: F, b: F) -> Option<Self> {
        if a.is_zero() {
            None
        } else {
            Some(LinearMap { a, b })
        }
    }

    pub fn identity() -> Self {
        LinearMap { a: F::one(), b: F::zero() }
    }

    pub fn scaling(a: F) -> Option<Self> {
        Self::new(a, F::zero())
    }

    pub fn shift(b: F) -> Self {
        LinearMap { a: F::one(), b }
    }

    pub fn a(&self) -> &F {
        &self.a
    }

    pub fn b(&self) -> &F {
        &self.b
    }

    pub fn apply(&self, z: &F) -> F {
        self.a.clone() * z.clone() + self.b.clone()
    }

    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        self.a.to_complex() * z + self.b.to_complex()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap<F>) -> LinearMap<F> {
        LinearMap {
            a: self.a.clone() * inner.a.clone(),
            b: self.a.clone() * inner.b.clone() + self.b.clone(),
        }
    }

    pub fn inverse(&self) -> LinearMap<F> {
        let ai = F::one() / self.a.clone();
        LinearMap { b: -(self.b.clone() * ai.clone()), a: ai }
    }

    pub fn is_identity(&self) -> bool {
        self.a == F::one() && self.b.is_zero()
    }

    /// Identity up to the approximate-flavor tolerance.
    pub fn is_near_identity(&self, tol: f64) -> bool {
        (self.a.to_complex() - Complex64::new(1.0, 0.0)).norm() <= tol && self.b.abs() <= tol
    }

    pub fn as_poly(&self) -> Poly<F> {
        Poly::new(vec![self.b.clone(), self.a.clone()])
    }

    /// Reads a degree-1 polynomial as a map.
    pub fn from_poly(p: &Poly<F>) -> Option<Self> {
        match p.degree() {
            Some(1) => Self::new(p.coeff(1), p.coeff(0)),
            _ => None,
        }
    }

    pub fn to_approx(&self) -> LinearMap<Complex64> {
        LinearMap { a: self.a.to_complex(), b: self.b.to_complex() }
    }

    /// Largest coefficient gap to another map.
    pub fn distance(&self, other: &LinearMap<F>) -> f64 {
        (self.a.clone() - other.a.clone()).abs().max((self.b.clone() - other.b.clone()).abs())
    }
}

impl LinearMap<Complex64> {
    pub fn from_exact(m: &LinearMap<GaussRat>) -> Self {
        m.to_approx()
    }
}

impl<F: Field> fmt::Display for LinearMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z ↦ {}", self.as_poly())
    }
}

impl<F: Field> fmt::Debug for LinearMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
