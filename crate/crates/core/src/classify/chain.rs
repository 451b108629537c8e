//! Iterating the shared-preimage step: `A_{r+1} = P_r ∘ A_r`, `B_{r+1} = Q_r ∘ B_r`.

use serde_json::{json, Value};

use super::witness::{classify_shared_preimage, SharedPreimageWitness, WitnessCase};
use super::{check_degree_cap, validations_json, Validation};
use crate::error::{Error, Result};
use crate::json::poly_entry;
use crate::poly::Poly;
use crate::scalar::Field;
use crate::sets::{image, preimage, CompactSet};

#[derive(Clone, Debug, PartialEq)]
pub struct ChainEntry<F: Field> {
    pub level: usize,
    pub a: Poly<F>,
    pub b: Poly<F>,
    pub l: CompactSet,
    pub validations: Vec<Validation>,
}

impl<F: Field> ChainEntry<F> {
    pub fn passed(&self) -> bool {
        self.validations.iter().all(|v| v.passed)
    }

    pub fn residual(&self) -> f64 {
        self.validations.iter().map(|v| v.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "deg_a": self.a.deg(),
            "deg_b": self.b.deg(),
            "A": poly_entry(&self.a),
            "B": poly_entry(&self.b),
            "L": self.l.to_json(),
            "validations": validations_json(&self.validations),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport<F: Field> {
    pub witness: SharedPreimageWitness<F>,
    /// `W(K) = f̃1⁻¹(K1)`, the set every level must reproduce.
    pub base: CompactSet,
    pub levels: Vec<ChainEntry<F>>,
}

impl<F: Field> ChainReport<F> {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(ChainEntry::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "witness": self.witness.to_json(),
            "base": self.base.to_json(),
            "levels": self.levels.iter().map(ChainEntry::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Level 1 is `(f̃1, f̃2, K1)`. Level `r + 1` composes `P_r` onto `A_r` and
/// `Q_r` onto `B_r`, where `(P_1, Q_1) = (g2, g1)` and `(P_{r+1}, Q_{r+1})`
/// come from the witness of `(P_r, Q_r)`; `L_{r+1} = Q_r(L_r)`. Every level
/// must satisfy `A_r⁻¹(L_r) = B_r⁻¹(L_r) = W(K)`, which for `r ≥ 2` requires
/// `K1 = K2`.
pub fn build_chain<F: Field>(f1: &Poly<F>, f2: &Poly<F>, k1: &CompactSet, k2: &CompactSet, depth: usize, tol: f64) -> Result<ChainReport<F>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be positive".into()));
    }
    let w = classify_shared_preimage(f1, f2)?
        .witness()
        .ok_or_else(|| Error::Hypothesis { what: "g1∘f1 = g2∘f2 solvable".into(), gap: f64::INFINITY })?;
    if w.case == WitnessCase::Composite {
        return Err(Error::InvalidArgument("the chain needs a power or Chebyshev witness".into()));
    }
    let (k1, k2) = if w.swapped { (k2, k1) } else { (k1, k2) };

    let (mut a, mut b, mut l) = (w.f1_tilde.clone(), w.f2_tilde.clone(), k1.clone());
    let base = preimage(&a, &l)?;
    let level1 = vec![Validation::sets("B1⁻¹(K2) = W(K)", &preimage(&b, k2)?, &base, tol)];
    let mut levels = vec![ChainEntry { level: 1, a: a.clone(), b: b.clone(), l: l.clone(), validations: level1 }];
    level_ok(&levels[0])?;

    let (mut p, mut q) = (w.g2.clone(), w.g1.clone());
    for level in 2..=depth {
        check_degree_cap(p.composed_degree(&a).max(q.composed_degree(&b)))?;
        a = p.compose(&a);
        b = q.compose(&b);
        l = image(&q, &l)?;
        let entry = ChainEntry {
            level,
            a: a.clone(),
            b: b.clone(),
            validations: vec![
                Validation::sets(format!("A{level}⁻¹(L{level}) = W(K)"), &preimage(&a, &l)?, &base, tol),
                Validation::sets(format!("B{level}⁻¹(L{level}) = W(K)"), &preimage(&b, &l)?, &base, tol),
            ],
            l: l.clone(),
        };
        levels.push(entry);
        level_ok(levels.last().expect("pushed"))?;
        if level < depth {
            let next = classify_shared_preimage(&p, &q)?
                .witness()
                .ok_or_else(|| Error::Validation { name: format!("witness for level {}", level + 1), residual: f64::INFINITY })?;
            (p, q) = if next.swapped { (next.g1, next.g2) } else { (next.g2, next.g1) };
        }
    }
    Ok(ChainReport { witness: w, base, levels })
}

fn level_ok<F: Field>(e: &ChainEntry<F>) -> Result<()> {
    match e.validations.iter().find(|v| !v.passed) {
        Some(v) => Err(Error::Validation { name: format!("level {}: {}", e.level, v.name), residual: v.residual }),
        None => Ok(()),
    }
}
