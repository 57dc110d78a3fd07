//! Double-description vertex enumeration.
//!
//! Constraints are inserted one at a time in the order given; with inputs
//! built in lexicographic ticket order this makes the output deterministic.
//! All arithmetic is on primitive integer vectors.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::PolytopeError;
use crate::hrep::{HPolytope, VPolytope};
use crate::linalg::{affine_parametrization, rref};
use crate::rational::{dot, normalize_integer, primitive_integer, Rational};

#[derive(Debug, Clone, Copy, Default)]
pub struct DdOptions {
    /// Abort with `BudgetExceeded` once this much wall time has elapsed.
    pub budget: Option<Duration>,
}

#[derive(Clone)]
struct Ray {
    coords: Vec<BigInt>,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x * y
        }
    })
}

fn to_rational_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

/// Extreme rays of the pointed cone `{y : R y ≥ 0}` in `Z^dim`.
///
/// Returns `Unbounded` if the cone contains a line (the rows have rank
/// below `dim`). Rays are primitive integer vectors in insertion-dependent
/// but deterministic order.
pub fn extreme_rays(
    rows: &[Vec<BigInt>],
    dim: usize,
    opts: DdOptions,
) -> Result<Vec<Vec<BigInt>>, PolytopeError> {
    let start = Instant::now();
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| normalize_integer(r.clone())).collect();
    if let Some(r) = rows.iter().find(|r| r.len() != dim) {
        return Err(PolytopeError::DimensionMismatch {
            expected: dim,
            got: r.len(),
        });
    }

    // Greedily pick `dim` independent rows for the initial simplicial cone.
    let mut basis_idx: Vec<usize> = Vec::with_capacity(dim);
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if basis_idx.len() == dim {
            break;
        }
        let mut trial = echelon.clone();
        trial.extend(to_rational_rows(std::slice::from_ref(r)));
        if rref(&mut trial, dim).len() > echelon.len() {
            echelon = trial;
            basis_idx.push(i);
        }
    }
    if basis_idx.len() < dim {
        return Err(PolytopeError::Unbounded);
    }

    // Columns of the inverse of the chosen rows span the initial cone.
    let words = rows.len().div_ceil(64);
    let mut aug: Vec<Vec<Rational>> = to_rational_rows(
        &basis_idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(),
    );
    for (i, row) in aug.iter_mut().enumerate() {
        row.extend((0..dim).map(|j| {
            if i == j {
                Rational::from_integer(BigInt::from(1))
            } else {
                Rational::zero()
            }
        }));
    }
    rref(&mut aug, 2 * dim);
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<Rational> = aug.iter().map(|row| row[dim + j].clone()).collect();
            let mut zeros = vec![0u64; words];
            for (k, &bi) in basis_idx.iter().enumerate() {
                if k != j {
                    bit_set(&mut zeros, bi);
                }
            }
            Ray {
                coords: primitive_integer(&col),
                zeros,
            }
        })
        .collect();

    let in_basis = |i: usize| basis_idx.contains(&i);
    for (i, row) in rows.iter().enumerate() {
        if in_basis(i) {
            continue;
        }
        if let Some(b) = opts.budget {
            if start.elapsed() > b {
                return Err(PolytopeError::BudgetExceeded(b));
            }
        }
        let slacks: Vec<BigInt> = rays.iter().map(|r| int_dot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| slacks[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| slacks[j].is_negative()).collect();
        if neg.is_empty() {
            for (r, s) in rays.iter_mut().zip(&slacks) {
                if s.is_zero() {
                    bit_set(&mut r.zeros, i);
                }
            }
            continue;
        }

        let mut fresh: Vec<Ray> = Vec::new();
        let mut meet = vec![0u64; words];
        for &p in &pos {
            if let Some(b) = opts.budget {
                if start.elapsed() > b {
                    return Err(PolytopeError::BudgetExceeded(b));
                }
            }
            for &n in &neg {
                let mut count = 0;
                for (w, (a, b)) in meet.iter_mut().zip(rays[p].zeros.iter().zip(&rays[n].zeros)) {
                    *w = a & b;
                    count += w.count_ones() as usize;
                }
                if count + 2 < dim {
                    continue;
                }
                let dominated = rays.iter().enumerate().any(|(q, r)| {
                    q != p
                        && q != n
                        && meet.iter().zip(&r.zeros).all(|(m, z)| m & !z == 0)
                });
                if dominated {
                    continue;
                }
                let sp = &slacks[p];
                let sn = &slacks[n];
                let coords: Vec<BigInt> = rays[n]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(xn, xp)| sp * xn - sn * xp)
                    .collect();
                let mut zeros = meet.clone();
                bit_set(&mut zeros, i);
                fresh.push(Ray {
                    coords: normalize_integer(coords),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() - neg.len() + fresh.len());
        for (mut r, s) in rays.into_iter().zip(&slacks) {
            if s.is_negative() {
                continue;
            }
            if s.is_zero() {
                bit_set(&mut r.zeros, i);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }
    Ok(rays.into_iter().map(|r| r.coords).collect())
}

/// Complete vertex list of a bounded polyhedron, sorted and duplicate-free.
pub fn vertex_enumerate(h: &HPolytope) -> Result<VPolytope, PolytopeError> {
    vertex_enumerate_with(h, DdOptions::default())
}

pub fn vertex_enumerate_with(h: &HPolytope, opts: DdOptions) -> Result<VPolytope, PolytopeError> {
    let n = h.dim();
    let (c_rows, d_rhs) = h.eq_parts();
    let param = affine_parametrization(c_rows, d_rhs, n)?;
    let k = param.dim();
    let (a_rows, b_rhs) = h.ineq_parts();

    if k == 0 {
        let x = param.origin.clone();
        return if h.contains(&x) {
            Ok(VPolytope::from_points(n, vec![x]))
        } else {
            Err(PolytopeError::Infeasible)
        };
    }

    // a·(o + D z) ≤ b  ⇔  (b − a·o)·t − (a D)·z ≥ 0 with t ≥ 0.
    let mut cone: Vec<Vec<BigInt>> = Vec::with_capacity(a_rows.len() + 1);
    let mut t_row = vec![Rational::zero(); k + 1];
    t_row[0] = Rational::from_integer(BigInt::from(1));
    cone.push(primitive_integer(&t_row));
    for (row, bi) in a_rows.iter().zip(b_rhs) {
        let mut hom = Vec::with_capacity(k + 1);
        hom.push(bi - dot(row, &param.origin));
        hom.extend(param.directions.iter().map(|dir| -dot(row, dir)));
        if hom.iter().all(Zero::is_zero) {
            continue;
        }
        cone.push(primitive_integer(&hom));
    }

    let rays = extreme_rays(&cone, k + 1, opts)?;
    if rays.is_empty() {
        return Err(PolytopeError::Infeasible);
    }
    let mut vertices = Vec::with_capacity(rays.len());
    for r in rays {
        if r[0].is_zero() {
            return Err(PolytopeError::Unbounded);
        }
        let t = Rational::from_integer(r[0].clone());
        let z: Vec<Rational> = r[1..]
            .iter()
            .map(|x| Rational::from_integer(x.clone()) / &t)
            .collect();
        vertices.push(param.lift(&z));
    }
    Ok(VPolytope::from_points(n, vertices))
}
