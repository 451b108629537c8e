//! Polynomials whose preimages of compact plane sets coincide.
//!
//! Exact arithmetic over the Gaussian rationals and approximate arithmetic over
//! `Complex64` share one generic [`Poly`] type. On top of it sit functional
//! decomposition, recognition of power and Chebyshev normal forms, witness
//! construction for shared-preimage problems, compact-set geometry and a
//! least-deviation (minimax) solver.

pub mod classify;
pub mod decompose;
pub mod error;
pub mod json;
pub mod linalg;
pub mod linear;
pub mod minimax;
pub mod par;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod sets;

pub use error::{Error, Result};
pub use linear::LinearMap;
pub use poly::{chebyshev, compose, conjugate, iterate, monic_chebyshev, normalize, ApproxPoly, ExactPoly, NormalMode, Poly};
pub use scalar::{Field, GaussRat};
