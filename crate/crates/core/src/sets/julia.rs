//! Julia-set point clouds by escape-time boundary extraction or by random
//! backward orbits.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::SampledJulia;
use crate::error::{Error, Result};
use crate::poly::{ApproxPoly, Poly};
use crate::roots::raw_roots;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JuliaMethod {
    EscapeTime,
    InverseIteration,
    /// Union of both clouds.
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JuliaParams {
    pub method: JuliaMethod,
    /// Points requested from inverse iteration.
    pub samples: usize,
    /// Grid resolution per side for escape time.
    pub grid: usize,
    pub max_iter: usize,
    /// Backward steps discarded at the start of each orbit.
    pub burn_in: usize,
    /// Points recorded per backward orbit.
    pub orbit_len: usize,
    pub seed: u64,
}

impl Default for JuliaParams {
    fn default() -> Self {
        JuliaParams {
            method: JuliaMethod::InverseIteration,
            samples: 10_000,
            grid: 600,
            max_iter: 256,
            burn_in: 40,
            orbit_len: 100,
            seed: 7,
        }
    }
}

impl JuliaParams {
    pub fn with_samples(samples: usize) -> Self {
        JuliaParams { samples, ..Self::default() }
    }

    pub fn to_json(&self) -> Value {
        let method = match self.method {
            JuliaMethod::EscapeTime => "escape_time",
            JuliaMethod::InverseIteration => "inverse_iteration",
            JuliaMethod::Both => "both",
        };
        json!({
            "method": method,
            "samples": self.samples,
            "grid": self.grid,
            "max_iter": self.max_iter,
            "burn_in": self.burn_in,
            "orbit_len": self.orbit_len,
            "seed": self.seed,
        })
    }
}

/// `max(2, 1 + Σ_{i<n} |a_i| / |a_n|)`, enlarged to `(2/|a_n|)^{1/(n−1)}`
/// when the leading coefficient is small, so every orbit leaving the disk escapes.
pub fn escape_radius(f: &ApproxPoly) -> f64 {
    let n = f.deg();
    let lead = f.lead().norm();
    let tail: f64 = f.coeffs()[..n].iter().map(|c| c.norm()).sum();
    let base = (1.0 + tail / lead).max(2.0);
    if n >= 2 {
        base.max((2.0 / lead).powf(1.0 / (n as f64 - 1.0)))
    } else {
        base
    }
}

/// Bounded-orbit test for the filled Julia set `K_f`.
pub fn in_filled_julia(f: &ApproxPoly, z: Complex64, max_iter: usize) -> bool {
    let r = escape_radius(f);
    escape_time(f, z, r, max_iter).is_none()
}

fn escape_time(f: &ApproxPoly, mut z: Complex64, radius: f64, max_iter: usize) -> Option<usize> {
    for k in 0..max_iter {
        if z.norm() > radius || !z.is_finite() {
            return Some(k);
        }
        z = f.eval_complex(z);
    }
    None
}

pub fn julia_sample<F: Field>(f: &Poly<F>, params: &JuliaParams) -> Result<SampledJulia> {
    if f.degree().unwrap_or(0) < 2 {
        return Err(Error::Degree("Julia sampling needs deg f >= 2".into()));
    }
    let fa = f.to_approx();
    let samples = match params.method {
        JuliaMethod::EscapeTime => escape_boundary(&fa, params)?,
        JuliaMethod::InverseIteration => inverse_iteration(&fa, params)?,
        JuliaMethod::Both => {
            let mut s = escape_boundary(&fa, params)?;
            s.extend(inverse_iteration(&fa, params)?);
            s
        }
    };
    Ok(SampledJulia { generator: fa, samples, params: params.clone() })
}

/// Grid points of `K_f` with a 4-neighbour outside `K_f`.
fn escape_boundary(f: &ApproxPoly, params: &JuliaParams) -> Result<Vec<Complex64>> {
    let g = params.grid;
    if g < 2 || params.max_iter == 0 {
        return Err(Error::DegenerateParams(format!("grid {g}, max_iter {}", params.max_iter)));
    }
    let r = escape_radius(f);
    let h = 2.0 * r / (g - 1) as f64;
    let at = |i: usize, j: usize| Complex64::new(-r + i as f64 * h, -r + j as f64 * h);
    let rows: Vec<Vec<bool>> = crate::par::map_range(g, |j| (0..g).map(|i| escape_time(f, at(i, j), r, params.max_iter).is_none()).collect());
    let mut out = Vec::new();
    for j in 0..g {
        for i in 0..g {
            if !rows[j][i] {
                continue;
            }
            let edge = i == 0 || j == 0 || i + 1 == g || j + 1 == g || !rows[j][i - 1] || !rows[j][i + 1] || !rows[j - 1][i] || !rows[j + 1][i];
            if edge {
                out.push(at(i, j));
            }
        }
    }
    Ok(out)
}

/// Random backward orbits, each from its own seeded stream, so the cloud is
/// deterministic regardless of thread count.
fn inverse_iteration(f: &ApproxPoly, params: &JuliaParams) -> Result<Vec<Complex64>> {
    if params.samples == 0 || params.orbit_len == 0 {
        return Err(Error::DegenerateParams(format!("samples {}, orbit length {}", params.samples, params.orbit_len)));
    }
    let orbits = params.samples.div_ceil(params.orbit_len);
    let r = escape_radius(f);
    let per_orbit = crate::par::map_range(orbits, |k| -> Result<Vec<Complex64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64));
        let mut z = Complex64::from_polar(r * rng.gen_range(0.2..0.9), rng.gen_range(0.0..std::f64::consts::TAU));
        let mut out = Vec::with_capacity(params.orbit_len);
        for step in 0..params.burn_in + params.orbit_len {
            let pre = raw_roots(&(f - &Poly::constant(z)))?;
            z = pre[rng.gen_range(0..pre.len())];
            if step >= params.burn_in {
                out.push(z);
            }
        }
        Ok(out)
    });
    let mut samples = Vec::with_capacity(orbits * params.orbit_len);
    for o in per_orbit {
        samples.extend(o?);
    }
    samples.truncate(params.samples);
    Ok(samples)
}
