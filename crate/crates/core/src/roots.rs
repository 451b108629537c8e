//! Simultaneous (Aberth–Ehrlich) root finding with multiplicity recovery.
//!
//! Exact inputs are split into squarefree factors first (Yun), so every
//! factor has simple roots and multiplicities are read off the factor index.
//! Approximate inputs are solved directly and the roots are clustered.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{ApproxPoly, ExactPoly, Poly};
use crate::scalar::{Field, GaussRat, APPROX_ZERO_TOL};

const MAX_ITER: usize = 1000;
/// Backward-error acceptance level, relative to the absolute-coefficient bound.
const BACKWARD_TOL: f64 = 1e-10;
/// Widest spread a cluster of a multiple root may have.
const MERGE_RADIUS: f64 = 1e-3;

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Relative distance under which two computed roots are the same root.
    pub cluster_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { cluster_tol: APPROX_ZERO_TOL }
    }
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub z: Complex64,
    pub mult: usize,
}

/// All complex roots of `f`, multiplicities summing to `deg f`, sorted by
/// real then imaginary part.
pub fn roots<F: Field>(f: &Poly<F>) -> Result<Vec<Root>> {
    roots_with(f, RootOptions::default())
}

pub fn roots_with<F: Field>(f: &Poly<F>, opts: RootOptions) -> Result<Vec<Root>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::Degree("roots needs deg f >= 1".into()));
    }
    let mut out = if F::EXACT {
        let exact = ExactPoly::new(f.coeffs().iter().map(|c| c.as_gauss().expect("exact flavor")).collect());
        exact_roots(&exact)?
    } else {
        approx_roots(&f.to_approx(), opts)?
    };
    out.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    debug_assert_eq!(out.iter().map(|r| r.mult).sum::<usize>(), n);
    Ok(out)
}

/// Roots without multiplicities, each listed `mult` times.
pub fn root_list<F: Field>(f: &Poly<F>) -> Result<Vec<Complex64>> {
    Ok(roots(f)?.into_iter().flat_map(|r| std::iter::repeat_n(r.z, r.mult)).collect())
}

/// Roots of an approximate polynomial, one entry per root with multiplicity,
/// without clustering. Intended for polynomials known to be squarefree.
pub fn raw_roots(f: &ApproxPoly) -> Result<Vec<Complex64>> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::Degree("roots needs deg f >= 1".into()));
    }
    aberth(f)
}

/// Yun's squarefree decomposition: `f = lead · Π a_i^i` with each `a_i`
/// monic, squarefree and pairwise coprime. Entry `k` holds `a_{k+1}`.
pub fn squarefree_decomposition(f: &ExactPoly) -> Vec<ExactPoly> {
    let fp = f.derivative();
    let a0 = Poly::gcd(f, &fp);
    let mut b = f.div_rem(&a0).0.monic();
    let mut c = fp.div_rem(&a0).0.scale(&(GaussRat::one() / f.lead()));
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    while b.degree().unwrap_or(0) > 0 {
        let a = Poly::gcd(&b, &d);
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        out.push(a);
    }
    out
}

fn exact_roots(f: &ExactPoly) -> Result<Vec<Root>> {
    let mut out = Vec::new();
    for (i, factor) in squarefree_decomposition(f).iter().enumerate() {
        if factor.degree().unwrap_or(0) == 0 {
            continue;
        }
        for z in simple_roots(&factor.to_approx())? {
            out.push(Root { z, mult: i + 1 });
        }
    }
    Ok(out)
}

fn approx_roots(f: &ApproxPoly, opts: RootOptions) -> Result<Vec<Root>> {
    let zs = aberth(f)?;
    Ok(cluster(f, &zs, opts.cluster_tol))
}

/// Roots of a polynomial assumed squarefree, polished by Newton steps.
fn simple_roots(f: &ApproxPoly) -> Result<Vec<Complex64>> {
    let mut zs = aberth(f)?;
    let df = f.derivative();
    for z in zs.iter_mut() {
        for _ in 0..2 {
            let d = df.eval_complex(*z);
            if d.norm() == 0.0 {
                break;
            }
            let step = f.eval_complex(*z) / d;
            if !step.is_finite() {
                break;
            }
            *z -= step;
        }
    }
    Ok(zs)
}

/// `|f(z)| / Σ|a_i||z|^i`.
pub fn backward_error(f: &ApproxPoly, z: Complex64) -> f64 {
    let r = z.norm();
    let mut bound = 0.0;
    for c in f.coeffs().iter().rev() {
        bound = bound * r + c.norm();
    }
    if bound == 0.0 {
        return 0.0;
    }
    f.eval_complex(z).norm() / bound
}

fn aberth(f: &ApproxPoly) -> Result<Vec<Complex64>> {
    let n = f.deg();
    let lead = f.lead();
    let p = f.scale(&(Complex64::new(1.0, 0.0) / lead));
    if !p.is_finite() {
        return Err(Error::Overflow("root finding".into()));
    }
    if n == 1 {
        return Ok(vec![-p.coeff(0)]);
    }
    let dp = p.derivative();
    let mut zs = initial_guesses(&p);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let z = zs[k];
            let pz = p.eval_complex(z);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / dp.eval_complex(z);
            let mut s = Complex64::new(0.0, 0.0);
            for (j, w) in zs.iter().enumerate() {
                if j != k {
                    s += Complex64::new(1.0, 0.0) / (z - w);
                }
            }
            let mut step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !step.is_finite() {
                step = if ratio.is_finite() { ratio } else { Complex64::new(1e-8, 1e-8) };
            }
            zs[k] = z - step;
            max_step = max_step.max(step.norm() / (1.0 + z.norm()));
        }
        if max_step <= 4.0 * f64::EPSILON {
            converged = true;
            break;
        }
    }
    let worst = zs.iter().map(|&z| backward_error(&p, z)).fold(0.0, f64::max);
    if !converged && worst > BACKWARD_TOL || !worst.is_finite() {
        return Err(Error::NonConvergence { iterations: MAX_ITER, residual: worst });
    }
    Ok(zs)
}

/// Points on a circle around the root centroid, radius from the geometric
/// mean root distance, rotated off the axes to avoid symmetric stalls.
fn initial_guesses(p: &ApproxPoly) -> Vec<Complex64> {
    let n = p.deg();
    let centroid = -p.coeff(n - 1) / n as f64;
    let shifted_const = p.eval_complex(centroid).norm();
    let mut radius = shifted_const.powf(1.0 / n as f64);
    if !(radius.is_finite() && radius > 0.0) {
        radius = fujiwara_bound(p).max(1e-3);
    }
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            centroid + Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Fujiwara's upper bound on root moduli of a monic polynomial.
pub fn fujiwara_bound(p: &ApproxPoly) -> f64 {
    let n = p.deg();
    let lead = p.lead().norm();
    let mut best: f64 = 0.0;
    for i in 0..n {
        let k = (n - i) as f64;
        let mut v = (p.coeff(i).norm() / lead).powf(1.0 / k);
        if i == 0 {
            v = (v.powf(k) / 2.0).powf(1.0 / k);
        }
        best = best.max(v);
    }
    2.0 * best
}

/// Groups computed roots: loose groups whose spread is within the rounding
/// noise of a `k`-fold root become one root (polished on `f^{(k-1)}`), the
/// rest are split at the strict relative tolerance.
fn cluster(f: &ApproxPoly, zs: &[Complex64], tol: f64) -> Vec<Root> {
    let loose = link(zs, |a, b| (a - b).norm() <= MERGE_RADIUS * a.norm().max(b.norm()).max(1.0));
    let mut out = Vec::new();
    for group in loose {
        let pts: Vec<Complex64> = group.iter().map(|&i| zs[i]).collect();
        let k = pts.len();
        let c = pts.iter().sum::<Complex64>() / k as f64;
        if k > 1 {
            let spread = pts.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
            if spread <= noise_radius(f, c, k) {
                out.push(Root { z: polish_multiple(f, c, k), mult: k });
                continue;
            }
        }
        for sub in link(&pts, |a, b| (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)) {
            let c = sub.iter().map(|&i| pts[i]).sum::<Complex64>() / sub.len() as f64;
            out.push(Root { z: c, mult: sub.len() });
        }
    }
    out
}

/// How far double-precision evaluation noise can scatter the roots of a
/// `k`-fold root at `c`: `(ε·B / |f^{(k)}(c)/k!|)^{1/k}` with a safety factor,
/// `B` the absolute-coefficient bound at `|c|`.
fn noise_radius(f: &ApproxPoly, c: Complex64, k: usize) -> f64 {
    let mut bound = 0.0;
    for a in f.coeffs().iter().rev() {
        bound = bound * c.norm() + a.norm();
    }
    let mut d = f.clone();
    let mut fact = 1.0;
    for j in 1..=k {
        d = d.derivative();
        fact *= j as f64;
    }
    let tk = d.eval_complex(c).norm() / fact;
    if tk == 0.0 {
        return MERGE_RADIUS;
    }
    (100.0 * (16.0 * f64::EPSILON * bound / tk).powf(1.0 / k as f64)).min(MERGE_RADIUS)
}

/// Newton on `f^{(k-1)}`, which has a simple root where `f` has a `k`-fold one.
fn polish_multiple(f: &ApproxPoly, c: Complex64, k: usize) -> Complex64 {
    let mut g = f.clone();
    for _ in 1..k {
        g = g.derivative();
    }
    let dg = g.derivative();
    let mut z = c;
    for _ in 0..4 {
        let d = dg.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = g.eval_complex(z) / d;
        if !step.is_finite() || step.norm() > MERGE_RADIUS {
            break;
        }
        z -= step;
    }
    z
}

/// Single-linkage components under `close`.
fn link(zs: &[Complex64], close: impl Fn(Complex64, Complex64) -> bool) -> Vec<Vec<usize>> {
    let n = zs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if close(zs[i], zs[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    groups
}
