//! JSON forms of scalars, polynomials and linear maps.
//!
//! Exact scalars are `[re_num, re_den, im_num, im_den]` (integers, or decimal
//! strings once they leave the `i64` range); approximate scalars are `[re, im]`.
//! A polynomial is the array of its coefficients in ascending degree.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::poly::Poly;
use crate::scalar::{Field, GaussRat};

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s.parse().map_err(|_| bad(format!("not an integer: {s}")));
    }
    Err(bad(format!("not an integer: {v}")))
}

fn bad(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

pub fn scalar_to_json<F: Field>(c: &F) -> Value {
    match c.as_gauss() {
        Some(g) => json!([int_to_json(g.re.numer()), int_to_json(g.re.denom()), int_to_json(g.im.numer()), int_to_json(g.im.denom())]),
        None => {
            let z = c.to_complex();
            json!([z.re, z.im])
        }
    }
}

pub fn scalar_from_json<F: Field>(v: &Value) -> Result<F> {
    let arr = v.as_array().ok_or_else(|| bad(format!("scalar must be an array: {v}")))?;
    if F::EXACT {
        if arr.len() != 4 {
            return Err(bad(format!("exact scalar needs 4 integers: {v}")));
        }
        let part = |n: &Value, d: &Value| -> Result<BigRational> {
            let d = int_from_json(d)?;
            if d == BigInt::from(0) {
                return Err(bad("zero denominator".into()));
            }
            Ok(BigRational::new(int_from_json(n)?, d))
        };
        Ok(F::from_gauss(&GaussRat::new(part(&arr[0], &arr[1])?, part(&arr[2], &arr[3])?)))
    } else {
        if arr.len() != 2 {
            return Err(bad(format!("approximate scalar needs [re, im]: {v}")));
        }
        let re = arr[0].as_f64().ok_or_else(|| bad(format!("not a number: {}", arr[0])))?;
        let im = arr[1].as_f64().ok_or_else(|| bad(format!("not a number: {}", arr[1])))?;
        Ok(F::from_complex(Complex64::new(re, im)))
    }
}

pub fn poly_to_json<F: Field>(p: &Poly<F>) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

/// `{"text": …, "coeffs": […]}`: readable and exact.
pub fn poly_entry<F: Field>(p: &Poly<F>) -> Value {
    json!({ "text": p.to_string(), "coeffs": poly_to_json(p) })
}

pub fn poly_from_json<F: Field>(v: &Value) -> Result<Poly<F>> {
    let arr = v.as_array().ok_or_else(|| bad(format!("polynomial must be an array: {v}")))?;
    Ok(Poly::new(arr.iter().map(scalar_from_json).collect::<Result<Vec<F>>>()?))
}

pub fn map_to_json<F: Field>(m: &LinearMap<F>) -> Value {
    json!({ "a": scalar_to_json(m.a()), "b": scalar_to_json(m.b()), "text": m.as_poly().to_string() })
}

pub fn map_from_json<F: Field>(v: &Value) -> Result<LinearMap<F>> {
    let a = scalar_from_json(v.get("a").ok_or_else(|| bad("map needs 'a'".into()))?)?;
    let b = scalar_from_json(v.get("b").ok_or_else(|| bad("map needs 'b'".into()))?)?;
    LinearMap::new(a, b).ok_or_else(|| bad("linear map with a = 0".into()))
}

/// `[[re, im], …]`.
pub fn points_to_json(points: &[Complex64]) -> Value {
    Value::Array(points.iter().map(|z| json!([z.re, z.im])).collect())
}
