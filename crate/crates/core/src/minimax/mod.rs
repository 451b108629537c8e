//! Polynomials of least deviation on finite point sets.
//!
//! Lawson's iteratively reweighted least squares gives an approximate optimum.
//! A log-barrier interior-point method on the cone form `min t`,
//! `|φ_i − p(x_i)| ≤ t` refines it and estimates the extremal set with its
//! dual weights. A Newton solve of the optimality conditions on that set (with
//! point exchange) then polishes the result to full precision.

mod verify;

pub use verify::{lobatto_nodes, minimax_sample, verify_thm21, verify_thm22, verify_thm23, VerifyReport, VERIFY_TOL};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::poly_entry;
use crate::linear::LinearMap;
use crate::poly::{chebyshev, ApproxPoly, Poly};
use crate::sets::smallest_enclosing_circle;

pub const LAWSON_MAX_ITER: usize = 500;
pub const WEIGHT_FLOOR: f64 = 1e-14;
const LAWSON_STABLE: f64 = 1e-10;
const EXCHANGE_ROUNDS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct MinimaxResult {
    pub poly: ApproxPoly,
    /// `max |φ(x) − p(x)|` over the points.
    pub deviation: f64,
    pub weights: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl MinimaxResult {
    pub fn to_json(&self) -> Value {
        json!({
            "poly": poly_entry(&self.poly),
            "deviation": self.deviation,
            "iterations": self.iterations,
            "converged": self.converged,
        })
    }
}

/// Scaled basis: Chebyshev polynomials of `λ(x)` for real point sets,
/// monomials of `λ(x)` otherwise, with `λ` mapping the set into the unit disk.
struct Basis {
    lambda: LinearMap<Complex64>,
    chebyshev: bool,
    size: usize,
}

impl Basis {
    fn new(points: &[Complex64], size: usize) -> Result<Self> {
        let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let real = points.iter().all(|z| z.im.abs() <= 1e-14 * scale);
        let (center, radius) = if real {
            let lo = points.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            (Complex64::new((lo + hi) / 2.0, 0.0), (hi - lo) / 2.0)
        } else {
            let c = smallest_enclosing_circle(points)?;
            (c.center, c.radius)
        };
        let radius = if radius > 0.0 { radius } else { 1.0 };
        let lambda = LinearMap::new(Complex64::new(1.0 / radius, 0.0), -center / radius).expect("positive radius");
        Ok(Basis { lambda, chebyshev: real, size })
    }

    fn row(&self, z: Complex64) -> Vec<Complex64> {
        let x = self.lambda.apply_complex(z);
        let mut out = Vec::with_capacity(self.size);
        let one = Complex64::new(1.0, 0.0);
        for k in 0..self.size {
            let v = match k {
                0 => one,
                1 => x,
                _ if self.chebyshev => 2.0 * x * out[k - 1] - out[k - 2],
                _ => x * out[k - 1],
            };
            out.push(v);
        }
        out
    }

    fn matrix(&self, points: &[Complex64]) -> DMatrix<Complex64> {
        let rows: Vec<Vec<Complex64>> = points.iter().map(|&z| self.row(z)).collect();
        DMatrix::from_fn(points.len(), self.size, |i, j| rows[i][j])
    }

    fn to_poly(&self, c: &DVector<Complex64>) -> ApproxPoly {
        let mut acc = Poly::zero();
        for (k, ck) in c.iter().enumerate() {
            let b = if self.chebyshev { chebyshev::<Complex64>(k) } else { Poly::monomial(Complex64::new(1.0, 0.0), k) };
            acc = &acc + &b.scale(ck);
        }
        acc.compose_linear(&self.lambda)
    }
}

fn residuals(v: &DMatrix<Complex64>, f: &DVector<Complex64>, c: &DVector<Complex64>) -> Vec<f64> {
    (f - v * c).iter().map(|r| r.norm()).collect()
}

fn max_of(r: &[f64]) -> f64 {
    r.iter().copied().fold(0.0, f64::max)
}

fn lstsq_complex(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    a.clone()
        .svd(true, true)
        .solve(b, 1e-15)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))
}

/// Minimizes `Σ w_i |f_i − (Vc)_i|²` by the normal equations, falling back to
/// an SVD of the weighted system when they are numerically singular.
fn weighted_lstsq(v: &DMatrix<Complex64>, f: &DVector<Complex64>, w: &[f64]) -> Result<DVector<Complex64>> {
    let (n, m) = (v.nrows(), v.ncols());
    let mut gram = DMatrix::<Complex64>::zeros(m, m);
    let mut rhs = DVector::<Complex64>::zeros(m);
    for i in 0..n {
        for j in 0..m {
            let a = v[(i, j)].conj() * w[i];
            rhs[j] += a * f[i];
            for k in 0..m {
                gram[(j, k)] += a * v[(i, k)];
            }
        }
    }
    if let Some(ch) = gram.cholesky() {
        let c = ch.solve(&rhs);
        if c.iter().all(|x| x.is_finite()) {
            return Ok(c);
        }
    }
    let sw: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let a = DMatrix::from_fn(n, m, |i, j| v[(i, j)] * sw[i]);
    let b = DVector::from_fn(n, |i, _| f[i] * sw[i]);
    lstsq_complex(&a, &b)
}

fn count_distinct(points: &[Complex64]) -> usize {
    let mut p: Vec<Complex64> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup_by(|a, b| (*a - *b).norm() <= 1e-12 * (1.0 + b.norm()));
    p.len()
}

/// The polynomial of degree ≤ `m` minimizing `max |φ(x) − p(x)|` over the points.
pub fn least_deviation(points: &[Complex64], values: &[Complex64], m: usize) -> Result<MinimaxResult> {
    if points.len() != values.len() {
        return Err(Error::InvalidArgument(format!("{} points but {} values", points.len(), values.len())));
    }
    let distinct = count_distinct(points);
    if distinct < m + 1 {
        return Err(Error::Underdetermined { needed: m + 1, got: distinct });
    }
    let basis = Basis::new(points, m + 1)?;
    let v = basis.matrix(points);
    let f = DVector::from_column_slice(values);
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);

    let Lawson { c, w, iterations, certified } = lawson(&v, &f)?;
    let dev = max_of(&residuals(&v, &f, &c));
    let (c, converged) = if certified || dev <= 1e-13 * scale {
        (c, true)
    } else {
        refine(&v, &f, c, dev)
    };
    let poly = basis.to_poly(&c);
    let deviation = points.iter().zip(values).map(|(&z, &y)| (y - poly.eval_complex(z)).norm()).fold(0.0, f64::max);
    Ok(MinimaxResult { poly, deviation, weights: w, iterations, converged })
}

/// `z^n − p` with `p` the least-deviation approximation of `z^n` of degree `< n`.
pub fn monic_least_deviation(points: &[Complex64], n: usize) -> Result<MinimaxResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("monic degree must be positive".into()));
    }
    let zn: Vec<Complex64> = points.iter().map(|z| z.powu(n as u32)).collect();
    let mut res = least_deviation(points, &zn, n - 1)?;
    let one = Complex64::new(1.0, 0.0);
    res.poly = &Poly::monomial(one, n) - &res.poly;
    Ok(res)
}

struct Lawson {
    c: DVector<Complex64>,
    w: Vec<f64>,
    iterations: usize,
    /// The returned iterate is provably optimal.
    certified: bool,
}

/// Lawson iteration; returns the best iterate and the final weights.
fn lawson(v: &DMatrix<Complex64>, f: &DVector<Complex64>) -> Result<Lawson> {
    let n = v.nrows();
    let mut w = vec![1.0 / n as f64; n];
    let mut best: Option<(f64, DVector<Complex64>)> = None;
    let mut prev = f64::INFINITY;
    for it in 1..=LAWSON_MAX_ITER {
        let c = weighted_lstsq(v, f, &w)?;
        let r = residuals(v, f, &c);
        let dev = max_of(&r);
        if best.as_ref().is_none_or(|(d, _)| dev < *d) {
            best = Some((dev, c.clone()));
        }
        // the weighted normal equations already give Σ w_i conj(r_i) B(x_i) = 0, so
        // |r_i| = deviation on the support of w certifies optimality
        let wmax = w.iter().copied().fold(0.0, f64::max);
        if w.iter().zip(&r).all(|(wi, ri)| *wi <= 1e-9 * wmax || *ri >= dev * (1.0 - 1e-12)) {
            return Ok(Lawson { c, w, iterations: it, certified: true });
        }
        let stable = (prev - dev).abs() <= LAWSON_STABLE * dev.max(f64::MIN_POSITIVE);
        prev = dev;
        let total: f64 = w.iter().zip(&r).map(|(wi, ri)| wi * ri).sum();
        if total <= 0.0 || stable {
            let (_, c) = best.expect("at least one iterate");
            return Ok(Lawson { c, w, iterations: it, certified: false });
        }
        for (wi, ri) in w.iter_mut().zip(&r) {
            *wi = (*wi * ri / total).max(WEIGHT_FLOOR);
        }
    }
    let (_, c) = best.expect("at least one iterate");
    Ok(Lawson { c, w, iterations: LAWSON_MAX_ITER, certified: false })
}

/// Newton's method on the optimality system over the extremal set `E`:
/// `|r_e|² = δ²`, `Σ λ_e conj(r_e) B(x_e) = 0`, `Σ λ_e = 1`.
fn newton(v: &DMatrix<Complex64>, f: &DVector<Complex64>, mut c: DVector<Complex64>, e: &[usize], mut lam: Vec<f64>) -> (DVector<Complex64>, f64, Vec<f64>) {
    let m = v.ncols();
    let ne = e.len();
    let resid = |c: &DVector<Complex64>| -> Vec<Complex64> { e.iter().map(|&i| f[i] - (0..m).map(|j| v[(i, j)] * c[j]).sum::<Complex64>()).collect() };
    let mut delta = resid(&c).iter().map(|r| r.norm()).fold(0.0, f64::max);
    let nv = 2 * m + 1 + ne;
    let neq = ne + 2 * m + 1;
    let i_unit = Complex64::new(0.0, 1.0);
    for _ in 0..50 {
        let re = resid(&c);
        let mut fv = DVector::<f64>::zeros(neq);
        let mut jac = DMatrix::<f64>::zeros(neq, nv);
        for (k, &i) in e.iter().enumerate() {
            fv[k] = re[k].norm_sqr() - delta * delta;
            for j in 0..m {
                let p = v[(i, j)];
                jac[(k, j)] = 2.0 * (re[k].conj() * -p).re;
                jac[(k, m + j)] = 2.0 * (re[k].conj() * (-i_unit * p)).re;
            }
            jac[(k, 2 * m)] = -2.0 * delta;
        }
        for j in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            for (k, &i) in e.iter().enumerate() {
                s += v[(i, j)] * lam[k] * re[k].conj();
            }
            fv[ne + j] = s.re;
            fv[ne + m + j] = s.im;
            for l in 0..m {
                let (mut ca, mut cb) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for (k, &i) in e.iter().enumerate() {
                    ca += v[(i, j)] * lam[k] * (-v[(i, l)]).conj();
                    cb += v[(i, j)] * lam[k] * (-i_unit * v[(i, l)]).conj();
                }
                jac[(ne + j, l)] = ca.re;
                jac[(ne + m + j, l)] = ca.im;
                jac[(ne + j, m + l)] = cb.re;
                jac[(ne + m + j, m + l)] = cb.im;
            }
            for (k, &i) in e.iter().enumerate() {
                let dl = v[(i, j)] * re[k].conj();
                jac[(ne + j, 2 * m + 1 + k)] = dl.re;
                jac[(ne + m + j, 2 * m + 1 + k)] = dl.im;
            }
        }
        fv[neq - 1] = lam.iter().sum::<f64>() - 1.0;
        for k in 0..ne {
            jac[(neq - 1, 2 * m + 1 + k)] = 1.0;
        }
        let Ok(step) = jac.svd(true, true).solve(&(-fv), 1e-15) else { break };
        if step.iter().any(|s| !s.is_finite()) {
            break;
        }
        for j in 0..m {
            c[j] += Complex64::new(step[j], step[m + j]);
        }
        delta += step[2 * m];
        for k in 0..ne {
            lam[k] += step[2 * m + 1 + k];
        }
        if step.amax() < 1e-14 {
            break;
        }
    }
    (c, delta, lam)
}

/// Barrier refinement followed by the exchange polish. The flag reports a
/// certified optimum or a barrier gap below [`BARRIER_GAP`].
fn refine(v: &DMatrix<Complex64>, f: &DVector<Complex64>, c0: DVector<Complex64>, dev0: f64) -> (DVector<Complex64>, bool) {
    let Some(b) = barrier(v, f, &c0, dev0) else { return (c0, false) };
    let mut best = (max_of(&residuals(v, f, &b.c)), b.c.clone(), b.gap_reached);
    if dev0 < best.0 {
        best = (dev0, c0, false);
    }
    let top = b.lam.iter().copied().fold(0.0, f64::max);
    let e: Vec<usize> = (0..b.lam.len()).filter(|&i| b.lam[i] >= 1e-3 * top).collect();
    let lam: Vec<f64> = e.iter().map(|&i| b.lam[i]).collect();
    if let Some((c, certified)) = polish(v, f, b.c, e, lam) {
        let dev = max_of(&residuals(v, f, &c));
        if certified || dev < best.0 {
            best = (dev, c, certified || best.2);
        }
    }
    (best.1, best.2)
}

struct Central {
    c: DVector<Complex64>,
    /// Dual estimates `2t / (s·u_i)`; they sum to one at a central point.
    lam: Vec<f64>,
    gap_reached: bool,
}

/// Relative duality gap at which the barrier method stops.
const BARRIER_GAP: f64 = 1e-12;

/// Path-following on `s·t − Σ log(t² − |φ_i − (Vc)_i|²)` with Newton centering,
/// started strictly inside the cone from `c0`.
fn barrier(v: &DMatrix<Complex64>, f: &DVector<Complex64>, c0: &DVector<Complex64>, dev0: f64) -> Option<Central> {
    let (n, m) = (v.nrows(), v.ncols());
    let dim = 2 * m + 1;
    if dev0 <= 0.0 || !dev0.is_finite() {
        return None;
    }
    let unpack = |x: &DVector<f64>| DVector::from_fn(m, |j, _| Complex64::new(x[j], x[m + j]));
    let resid = |x: &DVector<f64>| -> DVector<Complex64> { f - v * unpack(x) };
    let potential = |x: &DVector<f64>, s: f64| -> Option<f64> {
        let t = x[2 * m];
        let mut acc = s * t;
        for r in resid(x).iter() {
            let u = t * t - r.norm_sqr();
            if u <= 0.0 {
                return None;
            }
            acc -= u.ln();
        }
        Some(acc)
    };
    let mut x = DVector::<f64>::zeros(dim);
    for j in 0..m {
        x[j] = c0[j].re;
        x[m + j] = c0[j].im;
    }
    x[2 * m] = dev0 * 1.01;
    let mut s = 2.0 * n as f64 / (0.01 * dev0);
    let mut gap_reached = false;
    'outer: loop {
        for _ in 0..200 {
            let r = resid(&x);
            let t = x[2 * m];
            let mut grad = DVector::<f64>::zeros(dim);
            let mut hess = DMatrix::<f64>::zeros(dim, dim);
            grad[2 * m] = s;
            let mut gi = DVector::<f64>::zeros(dim);
            for i in 0..n {
                let u = t * t - r[i].norm_sqr();
                for j in 0..m {
                    let z = r[i].conj() * v[(i, j)];
                    gi[j] = 2.0 * z.re;
                    gi[m + j] = -2.0 * z.im;
                }
                gi[2 * m] = 2.0 * t;
                grad.axpy(-1.0 / u, &gi, 1.0);
                hess.ger(1.0 / (u * u), &gi, &gi, 1.0);
                for j in 0..m {
                    for k in 0..m {
                        let z = v[(i, j)].conj() * v[(i, k)] * (2.0 / u);
                        hess[(j, k)] += z.re;
                        hess[(m + j, m + k)] += z.re;
                        hess[(j, m + k)] -= z.im;
                        hess[(m + j, k)] += z.im;
                    }
                }
                hess[(2 * m, 2 * m)] -= 2.0 / u;
            }
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => match hess.svd(true, true).solve(&(-&grad), 1e-15) {
                    Ok(d) => d,
                    Err(_) => break 'outer,
                },
            };
            let decrement = -grad.dot(&step);
            if !decrement.is_finite() || decrement <= 0.0 {
                break;
            }
            if decrement / 2.0 <= 1e-10 {
                break;
            }
            let Some(phi0) = potential(&x, s) else { break 'outer };
            let mut a = 1.0;
            let accepted = loop {
                let trial = &x + &step * a;
                if let Some(phi) = potential(&trial, s) {
                    if phi <= phi0 - 0.25 * a * decrement {
                        break Some(trial);
                    }
                }
                a *= 0.5;
                if a < 1e-12 {
                    break None;
                }
            };
            match accepted {
                Some(trial) => x = trial,
                None => break,
            }
        }
        if 2.0 * n as f64 / s <= BARRIER_GAP * x[2 * m] {
            gap_reached = true;
            break;
        }
        s *= 10.0;
        if !s.is_finite() {
            break;
        }
    }
    let t = x[2 * m];
    let lam = resid(&x).iter().map(|r| 2.0 * t / (s * (t * t - r.norm_sqr()))).collect();
    Some(Central { c: unpack(&x), lam, gap_reached })
}

/// Exchange rounds around [`newton`] starting from the extremal set `e` with
/// weights `lam`; the flag reports a certified optimum.
fn polish(v: &DMatrix<Complex64>, f: &DVector<Complex64>, mut c: DVector<Complex64>, mut e: Vec<usize>, mut lam: Vec<f64>) -> Option<(DVector<Complex64>, bool)> {
    if e.is_empty() {
        return None;
    }
    let mut best: Option<(f64, DVector<Complex64>)> = None;
    for _ in 0..EXCHANGE_ROUNDS {
        let (c2, delta, lam2) = newton(v, f, c.clone(), &e, lam.clone());
        let r = residuals(v, f, &c2);
        let dev = max_of(&r);
        if !dev.is_finite() {
            break;
        }
        if best.as_ref().is_none_or(|(d, _)| dev < *d) {
            best = Some((dev, c2.clone()));
        }
        // λ ≥ 0 on E, |r| = δ on E and |r| ≤ δ everywhere is the optimality certificate
        let lam_ok = lam2.iter().all(|&l| l > -1e-10);
        if delta > 0.0 && dev <= delta * (1.0 + 1e-12) && lam_ok {
            return Some((c2, true));
        }
        let keep: Vec<usize> = (0..e.len()).filter(|&k| lam2[k] > 1e-12).collect();
        e = keep.iter().map(|&k| e[k]).collect();
        lam = keep.iter().map(|&k| lam2[k]).collect();
        let worst = (0..r.len()).max_by(|&a, &b| r[a].total_cmp(&r[b])).expect("nonempty");
        if !e.contains(&worst) {
            let fill = if lam.is_empty() { 1.0 } else { lam.iter().sum::<f64>() / lam.len() as f64 };
            e.push(worst);
            lam.push(fill);
        }
        let s: f64 = lam.iter().sum();
        lam.iter_mut().for_each(|l| *l /= s);
        c = c2;
    }
    best.map(|(_, c)| (c, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(n: usize) -> Vec<Complex64> {
        (0..n).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn affine_fit_to_x4() {
        let x = lobatto_nodes(129);
        let vals: Vec<Complex64> = x.iter().map(|z| z.powu(4)).collect();
        let r = least_deviation(&x, &vals, 1).unwrap();
        assert!((r.deviation - 0.5).abs() < 1e-9, "{}", r.deviation);
        assert!((r.poly.coeff(0) - c(0.5, 0.0)).norm() < 1e-9);
        assert!(r.poly.coeff(1).norm() < 1e-9);
    }

    #[test]
    fn symmetric_pair() {
        let x = vec![c(1.0, 0.0), c(-1.0, 0.0)];
        let r = least_deviation(&x, &x, 0).unwrap();
        assert!(r.poly.coeff(0).norm() < 1e-12);
        assert!((r.deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_kills_lower_terms() {
        let x = circle(128);
        let v: Vec<Complex64> = x.iter().map(|z| z.powu(5)).collect();
        let r = least_deviation(&x, &v, 4).unwrap();
        assert!(r.poly.max_abs_coeff() < 1e-12);
        assert!((r.deviation - 1.0).abs() < 1e-12);
        let r = monic_least_deviation(&x, 3).unwrap();
        assert!(r.poly.residual(&Poly::monomial(c(1.0, 0.0), 3)) < 1e-10);
        assert!((r.deviation - 1.0).abs() < 1e-8);
    }

    #[test]
    fn monic_midpoint() {
        let r = monic_least_deviation(&[c(0.0, 0.0), c(1.0, 0.0)], 1).unwrap();
        assert!((r.poly.coeff(0) + c(0.5, 0.0)).norm() < 1e-12);
        assert!((r.deviation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uniqueness_gate() {
        let x = vec![c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(least_deviation(&x, &x, 2), Err(Error::Underdetermined { needed: 3, got: 2 })));
    }

    #[test]
    fn equioscillation_on_nodes() {
        let x = lobatto_nodes(101);
        let vals: Vec<Complex64> = x.iter().map(|z| (z * 3.0).exp()).collect();
        let m = 3;
        let r = least_deviation(&x, &vals, m).unwrap();
        let signed: Vec<f64> = x.iter().zip(&vals).map(|(z, y)| (y - r.poly.eval_complex(*z)).re).collect();
        let mut alternations = 0;
        let mut last: Option<f64> = None;
        let mut sorted: Vec<(f64, f64)> = x.iter().map(|z| z.re).zip(signed).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, s) in sorted {
            if (s.abs() - r.deviation).abs() <= 1e-6 && last != Some(s.signum()) {
                alternations += 1;
                last = Some(s.signum());
            }
        }
        assert!(alternations >= m + 2, "{alternations}");
    }
}
