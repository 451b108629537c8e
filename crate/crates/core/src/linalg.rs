//! Dense Gauss–Jordan elimination over a [`Field`].

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    /// Consistent with free variables; the particular solution sets them to zero.
    Underdetermined { particular: Vec<F>, rank: usize },
    /// No solution; `residual` is the largest inconsistent right-hand side after elimination.
    Inconsistent { residual: f64 },
}

/// Solves `A x = b` for an `m × n` matrix given by rows. Exact flavors pivot on
/// the first nonzero entry; approximate flavors use partial pivoting and treat
/// entries below `1e-9` of the matrix scale as zero.
pub fn solve<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Solution<F> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let scale = a.iter().flatten().map(Field::abs).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let rhs_scale = b.iter().map(Field::abs).fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let pick = if F::EXACT {
            (row..m).find(|&r| !a[r][col].is_zero())
        } else {
            (row..m)
                .filter(|&r| !a[r][col].is_negligible(scale))
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
        };
        let Some(p) = pick else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = F::one() / a[row][col].clone();
        for v in a[row].iter_mut().skip(col) {
            *v = v.clone() * inv.clone();
        }
        b[row] = b[row].clone() * inv;
        for r in 0..m {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                let t = a[row][c].clone() * factor.clone();
                a[r][c] = a[r][c].clone() - t;
            }
            b[r] = b[r].clone() - b[row].clone() * factor;
        }
        pivots.push(col);
        row += 1;
    }
    let rank = row;
    let residual = b[rank..].iter().map(Field::abs).fold(0.0, f64::max);
    let inconsistent = if F::EXACT {
        b[rank..].iter().any(|v| !v.is_zero())
    } else {
        residual > 1e-9 * (1.0 + rhs_scale)
    };
    if inconsistent {
        return Solution::Inconsistent { residual };
    }
    let mut x = vec![F::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    if rank == n {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined { particular: x, rank }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;
    use num_complex::Complex64;

    fn q(n: i64) -> GaussRat {
        GaussRat::from_i64(n)
    }

    #[test]
    fn unique_exact() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let b = vec![q(3), q(5)];
        assert_eq!(solve(a, b), Solution::Unique(vec![GaussRat::from_ratio(4, 5), GaussRat::from_ratio(7, 5)]));
    }

    #[test]
    fn overdetermined_consistent_and_not() {
        let a = vec![vec![q(1)], vec![q(2)], vec![q(3)]];
        assert_eq!(solve(a.clone(), vec![q(1), q(2), q(3)]), Solution::Unique(vec![q(1)]));
        assert!(matches!(solve(a, vec![q(1), q(2), q(4)]), Solution::Inconsistent { .. }));
    }

    #[test]
    fn rank_deficient() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(matches!(solve(a, vec![q(1), q(2)]), Solution::Underdetermined { rank: 1, .. }));
    }

    #[test]
    fn approx_partial_pivoting() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let a = vec![vec![c(1e-20), c(1.0)], vec![c(1.0), c(1.0)]];
        match solve(a, vec![c(1.0), c(2.0)]) {
            Solution::Unique(x) => {
                assert!((x[0] - c(1.0)).norm() < 1e-12 && (x[1] - c(1.0)).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
