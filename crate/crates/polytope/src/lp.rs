//! Exact two-phase simplex over the rationals.
//!
//! The solver works on the standard form `min cᵀx  s.t. A x = b, x ≥ 0` with a
//! dense tableau and Bland's anti-cycling rule. [`lp_minimize`] reduces a
//! general [`HPolytope`] to that form and returns a vertex optimum.

use num_traits::{One, Signed, Zero};

use crate::error::PolytopeError;
use crate::hrep::HPolytope;
use crate::linalg::{affine_parametrization, nullspace, rank};
use crate::rational::{dot, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub witness: Vec<Rational>,
}

/// A vector `y` with `Aᵀy ≤ 0` and `bᵀy > 0`, proving `{x ≥ 0 : A x = b}`
/// is empty: any such `x` would give `0 < bᵀy = xᵀAᵀy ≤ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    pub y: Vec<Rational>,
}

impl FarkasCertificate {
    pub fn verify(&self, a: &[Vec<Rational>], b: &[Rational]) -> bool {
        if self.y.len() != a.len() || b.len() != a.len() {
            return false;
        }
        let n = a.first().map_or(0, Vec::len);
        let columns_ok = (0..n).all(|j| {
            let s = a
                .iter()
                .zip(&self.y)
                .fold(Rational::zero(), |acc, (row, yi)| acc + &row[j] * yi);
            !s.is_positive()
        });
        columns_ok && dot(b, &self.y).is_positive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut [Rational]| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.basis[r] = c;
    }

    /// Reduced-cost row for cost vector `c`; the last entry holds `−z`.
    fn objective_row(&self, c: &[Rational]) -> Vec<Rational> {
        let mut obj: Vec<Rational> = c.to_vec();
        obj.push(Rational::zero());
        for (row, &bi) in self.rows.iter().zip(&self.basis) {
            let cb = &c[bi];
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= cb * x;
                }
            }
        }
        obj
    }

    /// Runs Bland's rule to optimality. `Err` means the objective is unbounded.
    fn optimize(&mut self, obj: &mut [Rational]) -> Result<(), PolytopeError> {
        loop {
            let Some(enter) = (0..self.ncols).find(|&j| obj[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[enter];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((leave, _)) = best else {
                return Err(PolytopeError::Unbounded);
            };
            self.pivot(leave, enter, obj);
        }
    }

    fn point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ncols];
        for (row, &bi) in self.rows.iter().zip(&self.basis) {
            x[bi] = row[self.ncols].clone();
        }
        x
    }
}

fn check_shape(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Result<(), PolytopeError> {
    if a.len() != b.len() {
        return Err(PolytopeError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(PolytopeError::DimensionMismatch {
            expected: n,
            got: row.len(),
        });
    }
    Ok(())
}

/// Phase one. On success the tableau holds a feasible basis over the `n`
/// structural columns only.
fn phase_one(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Result<Tableau, FarkasCertificate> {
    let m = a.len();
    let mut signs = Vec::with_capacity(m);
    let rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let neg = bi.is_negative();
            signs.push(neg);
            let mut r: Vec<Rational> = row.iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
            r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            r.push(if neg { -bi.clone() } else { bi.clone() });
            r
        })
        .collect();
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        ncols: n + m,
    };
    let mut cost = vec![Rational::zero(); n];
    cost.extend(std::iter::repeat_n(Rational::one(), m));
    let mut obj = t.objective_row(&cost);
    t.optimize(&mut obj)
        .expect("phase-one objective is bounded below by zero");
    let infeasibility = -obj[n + m].clone();
    if infeasibility.is_positive() {
        let y = (0..m)
            .map(|i| {
                let yi = Rational::one() - &obj[n + i];
                if signs[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        return Err(FarkasCertificate { y });
    }
    // Drive zero-level artificials out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] < n {
            i += 1;
            continue;
        }
        match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
            Some(j) => {
                t.pivot(i, j, &mut obj);
                i += 1;
            }
            None => {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        }
    }
    for row in t.rows.iter_mut() {
        let rhs = row.pop().unwrap();
        row.truncate(n);
        row.push(rhs);
    }
    t.ncols = n;
    Ok(t)
}

/// Finds a point of `{x ≥ 0 : A x = b}` or a Farkas certificate of emptiness.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Result<Feasibility, PolytopeError> {
    check_shape(a, b, n)?;
    Ok(match phase_one(a, b, n) {
        Ok(t) => Feasibility::Feasible(t.point()),
        Err(cert) => Feasibility::Infeasible(cert),
    })
}

/// `min cᵀx  s.t. A x = b, x ≥ 0`; the witness is a basic feasible solution.
pub fn minimize_standard(
    c: &[Rational],
    a: &[Vec<Rational>],
    b: &[Rational],
) -> Result<LpSolution, PolytopeError> {
    let n = c.len();
    check_shape(a, b, n)?;
    let mut t = phase_one(a, b, n).map_err(|_| PolytopeError::Infeasible)?;
    let mut obj = t.objective_row(c);
    t.optimize(&mut obj)?;
    let witness = t.point();
    Ok(LpSolution {
        value: dot(c, &witness),
        witness,
    })
}

/// Moves an optimal point `z` of `{G z ≤ h}` along directions that keep the
/// objective constant until the active rows have full rank.
fn purify(
    g: &[Vec<Rational>],
    h: &[Rational],
    mut z: Vec<Rational>,
) -> Result<Vec<Rational>, PolytopeError> {
    let k = z.len();
    loop {
        let slack: Vec<Rational> = g.iter().zip(h).map(|(row, hi)| hi - dot(row, &z)).collect();
        let active: Vec<Vec<Rational>> = g
            .iter()
            .zip(&slack)
            .filter(|(_, s)| s.is_zero())
            .map(|(row, _)| row.clone())
            .collect();
        if rank(&active, k) == k {
            return Ok(z);
        }
        let mut d = nullspace(&active, k).swap_remove(0);
        let step = |d: &[Rational]| {
            g.iter()
                .zip(&slack)
                .filter_map(|(row, s)| {
                    let rate = dot(row, d);
                    rate.is_positive().then(|| s / rate)
                })
                .min()
        };
        let t = match step(&d) {
            Some(t) => t,
            None => {
                d.iter_mut().for_each(|x| *x = -x.clone());
                step(&d).ok_or(PolytopeError::Unbounded)?
            }
        };
        for (zi, di) in z.iter_mut().zip(&d) {
            *zi += &t * di;
        }
    }
}

/// Exact minimum of `objective · x` over `h`, witnessed by a vertex of `h`.
///
/// Equalities are eliminated first; the remaining free coordinates are split
/// into positive and negative parts and every inequality gets a slack.
/// Returns `Unbounded` when the objective is unbounded below or when the
/// optimal face contains a line (so no vertex witness exists).
pub fn lp_minimize(objective: &[Rational], h: &HPolytope) -> Result<LpSolution, PolytopeError> {
    let n = h.dim();
    if objective.len() != n {
        return Err(PolytopeError::DimensionMismatch {
            expected: n,
            got: objective.len(),
        });
    }
    let (c_rows, d_rhs) = h.eq_parts();
    let param = affine_parametrization(c_rows, d_rhs, n)?;
    let k = param.dim();
    let (a_rows, b_rhs) = h.ineq_parts();
    let g: Vec<Vec<Rational>> = a_rows
        .iter()
        .map(|row| param.directions.iter().map(|dir| dot(row, dir)).collect())
        .collect();
    let rhs: Vec<Rational> = a_rows
        .iter()
        .zip(b_rhs)
        .map(|(row, bi)| bi - dot(row, &param.origin))
        .collect();
    let cz: Vec<Rational> = param.directions.iter().map(|dir| dot(objective, dir)).collect();

    let m = g.len();
    let width = 2 * k + m;
    let std_a: Vec<Vec<Rational>> = g
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = Vec::with_capacity(width);
            r.extend(row.iter().cloned());
            r.extend(row.iter().map(|x| -x.clone()));
            r.extend((0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let mut std_c = cz.clone();
    std_c.extend(cz.iter().map(|x| -x.clone()));
    std_c.extend(std::iter::repeat_n(Rational::zero(), m));

    let sol = minimize_standard(&std_c, &std_a, &rhs)?;
    let z: Vec<Rational> = (0..k).map(|j| &sol.witness[j] - &sol.witness[k + j]).collect();
    let z = purify(&g, &rhs, z)?;
    let witness = param.lift(&z);
    Ok(LpSolution {
        value: dot(objective, &witness),
        witness,
    })
}
