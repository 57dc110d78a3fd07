//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::error::PolytopeError;
use crate::rational::Rational;

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place, dropping zero rows. Returns the pivot column of each kept row.
pub fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solution set of `C x = d` written as `x = origin + Σ z_j · directions[j]`.
#[derive(Debug, Clone)]
pub struct AffineParam {
    pub origin: Vec<Rational>,
    pub directions: Vec<Vec<Rational>>,
}

impl AffineParam {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn lift(&self, z: &[Rational]) -> Vec<Rational> {
        let mut x = self.origin.clone();
        for (zj, dir) in z.iter().zip(&self.directions) {
            if zj.is_zero() {
                continue;
            }
            for (xi, di) in x.iter_mut().zip(dir) {
                *xi += zj * di;
            }
        }
        x
    }
}

/// Parametrizes the affine space `{x ∈ Q^n : C x = d}`; free variables of the
/// echelon form become the coordinates `z`.
pub fn affine_parametrization(
    c: &[Vec<Rational>],
    d: &[Rational],
    n: usize,
) -> Result<AffineParam, PolytopeError> {
    let mut aug: Vec<Vec<Rational>> = c
        .iter()
        .zip(d)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Err(PolytopeError::Infeasible);
    }
    let mut origin = vec![Rational::zero(); n];
    for (row, &p) in aug.iter().zip(&pivots) {
        origin[p] = row[n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|col| !pivots.contains(col)).collect();
    let directions = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &p) in aug.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    Ok(AffineParam { origin, directions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, frac, int};

    #[test]
    fn parametrization_satisfies_equalities() {
        let c = vec![vec![int(1), int(1), int(1)], vec![int(1), int(-1), int(0)]];
        let d = vec![int(1), int(0)];
        let p = affine_parametrization(&c, &d, 3).unwrap();
        assert_eq!(p.dim(), 1);
        for z in [int(0), frac(1, 3), int(-2)] {
            let x = p.lift(&[z]);
            assert_eq!(dot(&c[0], &x), int(1));
            assert_eq!(dot(&c[1], &x), int(0));
        }
    }

    #[test]
    fn inconsistent_system_is_infeasible() {
        let c = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        let d = vec![int(1), int(3)];
        assert_eq!(
            affine_parametrization(&c, &d, 2).unwrap_err(),
            PolytopeError::Infeasible
        );
    }

    #[test]
    fn nullspace_and_rank() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        assert_eq!(rank(&rows, 3), 1);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot(&rows[0], &v).is_zero());
        }
    }
}
