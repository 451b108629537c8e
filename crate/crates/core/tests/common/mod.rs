#![allow(dead_code)]

use num_complex::Complex64;
use preimage_core::{ExactPoly, Field, GaussRat, LinearMap, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn g(n: i64) -> GaussRat {
    GaussRat::from_i64(n)
}

/// Small Gaussian integer, occasionally with a halved real part.
pub fn small_scalar(r: &mut ChaCha8Rng, bound: i64) -> GaussRat {
    let re = GaussRat::from_ratio(r.gen_range(-bound..=bound), if r.gen_bool(0.2) { 2 } else { 1 });
    if r.gen_bool(0.3) {
        re + GaussRat::imag_unit() * g(r.gen_range(-bound..=bound))
    } else {
        re
    }
}

pub fn nonzero_scalar(r: &mut ChaCha8Rng, bound: i64) -> GaussRat {
    loop {
        let s = small_scalar(r, bound);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_poly(r: &mut ChaCha8Rng, deg: usize, bound: i64) -> ExactPoly {
    let mut cs: Vec<GaussRat> = (0..deg).map(|_| small_scalar(r, bound)).collect();
    cs.push(nonzero_scalar(r, bound));
    Poly::new(cs)
}

pub fn random_monic(r: &mut ChaCha8Rng, deg: usize, bound: i64) -> ExactPoly {
    let mut cs: Vec<GaussRat> = (0..deg).map(|_| small_scalar(r, bound)).collect();
    cs.push(g(1));
    Poly::new(cs)
}

pub fn random_map(r: &mut ChaCha8Rng) -> LinearMap<GaussRat> {
    LinearMap::new(nonzero_scalar(r, 2), small_scalar(r, 2)).unwrap()
}

/// Decides `f = g ∘ h` with `deg h = r` by undetermined coefficients: the top
/// `r − 1` coefficients of `h^s` fix `h` one unknown at a time, then the
/// remaining coefficients of `g` come from an overdetermined linear system.
pub fn decomposition_oracle(f: &ExactPoly, r: usize) -> Option<(ExactPoly, ExactPoly)> {
    let n = f.deg();
    assert!(r > 1 && r < n && n % r == 0);
    let s = n / r;
    let f = f.scale(&(g(1) / f.lead()));
    let mut h: Vec<GaussRat> = vec![g(0); r + 1];
    h[r] = g(1);
    for j in 1..r {
        let trial = Poly::new(h.clone()).pow(s as u32);
        let gap = f.coeff(n - j) - trial.coeff(n - j);
        h[r - j] = gap / g(s as i64);
    }
    let h = Poly::new(h);
    // columns: h^0, …, h^{s−1}; rows: every coefficient of f − h^s
    let rhs = &f - &h.pow(s as u32);
    let cols: Vec<ExactPoly> = (0..s).map(|k| h.pow(k as u32)).collect();
    let mut rows: Vec<Vec<GaussRat>> = (0..=n).map(|i| {
        let mut row: Vec<GaussRat> = cols.iter().map(|p| p.coeff(i)).collect();
        row.push(rhs.coeff(i));
        row
    }).collect();
    let mut pivot_row = 0;
    for col in 0..s {
        let Some(p) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(pivot_row, p);
        let inv = g(1) / rows[pivot_row][col].clone();
        for k in col..=s {
            rows[pivot_row][k] = rows[pivot_row][k].clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for k in col..=s {
                    let v = rows[pivot_row][k].clone() * factor.clone();
                    rows[i][k] = rows[i][k].clone() - v;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|row| !row[s].is_zero()) {
        return None;
    }
    // each h^k has degree kr, so the system is triangular with pivots in columns 0..s
    let mut gc: Vec<GaussRat> = (0..s).map(|k| rows[k][s].clone()).collect();
    gc.push(g(1));
    Some((Poly::new(gc), h))
}

/// Distinct roots of `f − w`, counted exactly as `deg f − deg gcd(f − w, f′)`.
pub fn distinct_root_count(f: &ExactPoly, w: &GaussRat) -> usize {
    let shifted = f - &Poly::constant(w.clone());
    f.deg() - Poly::gcd(&shifted, &f.derivative()).deg()
}

pub mod strategies {
    use super::g;
    use preimage_core::{ExactPoly, Field, GaussRat, LinearMap, Poly};
    use proptest::collection::vec;
    use proptest::prelude::*;
    use std::ops::RangeInclusive;

    pub fn gauss_int(re: i64, im: i64) -> impl Strategy<Value = GaussRat> {
        (-re..=re, -im..=im).prop_map(|(a, b)| g(a) + GaussRat::imag_unit() * g(b))
    }

    pub fn nonzero_gauss_int(re: i64, im: i64) -> impl Strategy<Value = GaussRat> {
        gauss_int(re, im).prop_filter("nonzero", |c| !c.is_zero())
    }

    pub fn exact_poly(deg: RangeInclusive<usize>) -> impl Strategy<Value = ExactPoly> {
        deg.prop_flat_map(|d| (vec(gauss_int(3, 1), d), nonzero_gauss_int(2, 1))).prop_map(|(mut cs, lead)| {
            cs.push(lead);
            Poly::new(cs)
        })
    }

    pub fn monic_poly(deg: RangeInclusive<usize>) -> impl Strategy<Value = ExactPoly> {
        deg.prop_flat_map(|d| vec(gauss_int(3, 1), d)).prop_map(|mut cs| {
            cs.push(g(1));
            Poly::new(cs)
        })
    }

    pub fn linear_map() -> impl Strategy<Value = LinearMap<GaussRat>> {
        (nonzero_gauss_int(2, 1), gauss_int(2, 1)).prop_map(|(a, b)| LinearMap::new(a, b).unwrap())
    }
}
