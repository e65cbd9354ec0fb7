//! Exact dense linear algebra over Q(q,t): Gaussian elimination with
//! full reduction, used by the interpolation solves and by every
//! change-of-basis oracle.

use crate::multipoly::{Monomial, SparsePolynomial};
use crate::qtfield::QtRational;
use crate::Error;
use std::collections::BTreeMap;

/// Solve A x = b for square A; `None` when A is singular.
pub fn solve_square(mut a: Vec<Vec<QtRational>>, mut b: Vec<QtRational>) -> Option<Vec<QtRational>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), n);
    let mut row_of_col = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for col in 0..n {
        // pick the structurally simplest pivot to slow coefficient growth
        let pivot = (0..n)
            .filter(|&r| !used[r] && !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].numerator().num_terms() + a[r][col].denominator().num_terms())?;
        used[pivot] = true;
        row_of_col[col] = pivot;
        let inv = a[pivot][col].inverse().ok()?;
        for c in col..n {
            a[pivot][c] = a[pivot][c].mul(&inv);
        }
        b[pivot] = b[pivot].mul(&inv);
        for r in 0..n {
            if r != pivot && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..n {
                    let delta = factor.mul(&a[pivot][c]);
                    a[r][c] = a[r][c].sub(&delta);
                }
                let delta = factor.mul(&b[pivot]);
                b[r] = b[r].sub(&delta);
            }
        }
    }
    let mut x = vec![QtRational::zero(); n];
    for col in 0..n {
        x[col] = b[row_of_col[col]].clone();
    }
    Some(x)
}

/// Express `target` as an exact linear combination of `family`, by
/// eliminating in the common monomial space. The family must be linearly
/// independent with `target` in its span; anything else is an error.
pub fn expand_in_family(
    target: &SparsePolynomial,
    family: &[SparsePolynomial],
) -> Result<Vec<QtRational>, Error> {
    let m = family.len();
    if m == 0 {
        return if target.is_zero() {
            Ok(vec![])
        } else {
            Err(Error::TheoryViolation("nonzero target, empty family".into()))
        };
    }
    let n = family[0].nvars();
    let mut monomials: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in family.iter().chain(std::iter::once(target)) {
        if p.nvars() != n {
            return Err(Error::Input("family arity mismatch".into()));
        }
        for (mono, _) in p.terms() {
            let next = monomials.len();
            monomials.entry(mono.clone()).or_insert(next);
        }
    }
    let rows = monomials.len();
    let mut a = vec![vec![QtRational::zero(); m]; rows];
    let mut b = vec![QtRational::zero(); rows];
    for (j, p) in family.iter().enumerate() {
        for (mono, c) in p.terms() {
            a[monomials[mono]][j] = c.clone();
        }
    }
    for (mono, c) in target.terms() {
        b[monomials[mono]] = c.clone();
    }

    // Forward elimination over the (tall) system.
    let mut pivot_row_of_col = vec![usize::MAX; m];
    let mut used = vec![false; rows];
    for col in 0..m {
        let pivot = (0..rows)
            .filter(|&r| !used[r] && !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].numerator().num_terms() + a[r][col].denominator().num_terms())
            .ok_or_else(|| Error::TheoryViolation("linearly dependent family".into()))?;
        used[pivot] = true;
        pivot_row_of_col[col] = pivot;
        let inv = a[pivot][col].inverse().map_err(Error::Field)?;
        for c in 0..m {
            a[pivot][c] = a[pivot][c].mul(&inv);
        }
        b[pivot] = b[pivot].mul(&inv);
        for r in 0..rows {
            if r != pivot && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..m {
                    let delta = factor.mul(&a[pivot][c]);
                    a[r][c] = a[r][c].sub(&delta);
                }
                let delta = factor.mul(&b[pivot]);
                b[r] = b[r].sub(&delta);
            }
        }
    }
    // Consistency: all non-pivot rows must have vanished.
    for r in 0..rows {
        if !used[r] && !b[r].is_zero() {
            return Err(Error::TheoryViolation("target outside the family span".into()));
        }
    }
    let mut x = vec![QtRational::zero(); m];
    for col in 0..m {
        // After full reduction the pivot row reads x_col = b.
        x[col] = b[pivot_row_of_col[col]].clone();
    }
    // Paranoia: reconstruct exactly.
    let mut recon = SparsePolynomial::zero(n);
    for (j, c) in x.iter().enumerate() {
        recon = recon.add(&family[j].scalar_mul(c));
    }
    if recon != *target {
        return Err(Error::TheoryViolation("expansion failed to reconstruct target".into()));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt(s: &str) -> QtRational {
        s.parse().unwrap()
    }

    #[test]
    fn solves_small_system() {
        // [[1, t], [q, 1]] x = [1+t, q+1] has solution (1, 1)
        let a = vec![
            vec![qt("1"), qt("t")],
            vec![qt("q"), qt("1")],
        ];
        let b = vec![qt("1 + t"), qt("q + 1")];
        let x = solve_square(a, b).unwrap();
        assert_eq!(x, vec![qt("1"), qt("1")]);
    }

    #[test]
    fn detects_singular() {
        let a = vec![
            vec![qt("1"), qt("t")],
            vec![qt("q"), qt("q*t")],
        ];
        let b = vec![qt("1"), qt("0")];
        assert!(solve_square(a, b).is_none());
    }

    #[test]
    fn expansion_round_trip() {
        let x1 = SparsePolynomial::var(2, 1);
        let x2 = SparsePolynomial::var(2, 2);
        let fam = vec![x1.add(&x2), x1.sub(&x2)];
        let target = x1.scalar_mul(&qt("2")).add(&x2.scalar_mul(&qt("2*t")));
        let coeffs = expand_in_family(&target, &fam).unwrap();
        assert_eq!(coeffs[0], qt("1 + t"));
        assert_eq!(coeffs[1], qt("1 - t"));
    }
}
