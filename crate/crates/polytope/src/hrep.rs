//! Half-space and vertex representations with exact rational coordinates.

use num_traits::{Signed, Zero};

use crate::error::PolytopeError;
use crate::rational::{dot, int, Rational};

/// `{x : A x ≤ b, C x = d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    ineq_rows: Vec<Vec<Rational>>,
    ineq_rhs: Vec<Rational>,
    eq_rows: Vec<Vec<Rational>>,
    eq_rhs: Vec<Rational>,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        HPolytope {
            dim,
            ineq_rows: Vec::new(),
            ineq_rhs: Vec::new(),
            eq_rows: Vec::new(),
            eq_rhs: Vec::new(),
        }
    }

    /// Standard simplex `{x ≥ 0, Σ x = 1}`.
    pub fn simplex(dim: usize) -> Self {
        let mut h = HPolytope::new(dim);
        h.add_nonnegativity();
        h.add_equality(vec![int(1); dim], int(1)).unwrap();
        h
    }

    /// Axis-aligned box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: Rational, hi: Rational) -> Self {
        let mut h = HPolytope::new(dim);
        for i in 0..dim {
            let mut up = vec![int(0); dim];
            up[i] = int(1);
            h.add_inequality(up, hi.clone()).unwrap();
            let mut down = vec![int(0); dim];
            down[i] = int(-1);
            h.add_inequality(down, -lo.clone()).unwrap();
        }
        h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_len(&self, row: &[Rational]) -> Result<(), PolytopeError> {
        if row.len() != self.dim {
            return Err(PolytopeError::DimensionMismatch {
                expected: self.dim,
                got: row.len(),
            });
        }
        Ok(())
    }

    /// Adds `row · x ≤ rhs`.
    pub fn add_inequality(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<(), PolytopeError> {
        self.check_len(&row)?;
        self.ineq_rows.push(row);
        self.ineq_rhs.push(rhs);
        Ok(())
    }

    /// Adds `row · x = rhs`. Identically-zero rows with zero right-hand side
    /// carry no information and are dropped.
    pub fn add_equality(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<(), PolytopeError> {
        self.check_len(&row)?;
        if row.iter().all(Zero::is_zero) && rhs.is_zero() {
            return Ok(());
        }
        self.eq_rows.push(row);
        self.eq_rhs.push(rhs);
        Ok(())
    }

    /// Adds `x_i ≥ 0` for every coordinate.
    pub fn add_nonnegativity(&mut self) {
        for i in 0..self.dim {
            let mut row = vec![int(0); self.dim];
            row[i] = int(-1);
            self.ineq_rows.push(row);
            self.ineq_rhs.push(int(0));
        }
    }

    pub fn inequalities(&self) -> impl Iterator<Item = (&[Rational], &Rational)> {
        self.ineq_rows.iter().map(Vec::as_slice).zip(&self.ineq_rhs)
    }

    pub fn equalities(&self) -> impl Iterator<Item = (&[Rational], &Rational)> {
        self.eq_rows.iter().map(Vec::as_slice).zip(&self.eq_rhs)
    }

    pub fn n_inequalities(&self) -> usize {
        self.ineq_rows.len()
    }

    pub fn n_equalities(&self) -> usize {
        self.eq_rows.len()
    }

    pub(crate) fn eq_parts(&self) -> (&[Vec<Rational>], &[Rational]) {
        (&self.eq_rows, &self.eq_rhs)
    }

    pub(crate) fn ineq_parts(&self) -> (&[Vec<Rational>], &[Rational]) {
        (&self.ineq_rows, &self.ineq_rhs)
    }

    /// Smallest inequality slack `b_i − A_i x`, or `None` without inequalities.
    pub fn min_slack(&self, x: &[Rational]) -> Option<Rational> {
        self.inequalities().map(|(a, b)| b - dot(a, x)).min()
    }

    pub fn satisfies_equalities(&self, x: &[Rational]) -> bool {
        self.equalities().all(|(c, d)| &dot(c, x) == d)
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.satisfies_equalities(x)
            && self.min_slack(x).is_none_or(|s| !s.is_negative())
    }
}

/// Supporting half-space `normal · x ≤ offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Facet {
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.offset - dot(&self.normal, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<Rational>>,
    pub facets: Option<Vec<Facet>>,
}

impl VPolytope {
    /// Sorts lexicographically and removes duplicate vertices.
    pub fn from_points(dim: usize, mut vertices: Vec<Vec<Rational>>) -> Self {
        vertices.sort();
        vertices.dedup();
        VPolytope {
            dim,
            vertices,
            facets: None,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices_f64(&self) -> Vec<Vec<f64>> {
        self.vertices
            .iter()
            .map(|v| v.iter().map(crate::rational::to_f64).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn contains_checks_both_kinds_of_rows() {
        let s = HPolytope::simplex(3);
        assert!(s.contains(&[frac(1, 2), frac(1, 4), frac(1, 4)]));
        assert!(!s.contains(&[frac(1, 2), frac(1, 4), frac(1, 2)]));
        assert!(!s.contains(&[frac(3, 2), frac(-1, 4), frac(-1, 4)]));
        assert!(!s.contains(&[int(1), int(0)]));
    }

    #[test]
    fn zero_equalities_are_dropped_and_lengths_checked() {
        let mut h = HPolytope::new(2);
        h.add_equality(vec![int(0), int(0)], int(0)).unwrap();
        assert_eq!(h.n_equalities(), 0);
        assert!(h.add_inequality(vec![int(1)], int(0)).is_err());
    }
}
