//! Exact convex hulls in three dimensions.
//!
//! Facets are the extreme rays of the cone of valid inequalities
//! `{(a, b) : a·p ≤ b for every input p}`, found with the same
//! double-description routine used for vertex enumeration.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dd::{extreme_rays, DdOptions};
use crate::error::PolytopeError;
use crate::hrep::{Facet, VPolytope};
use crate::linalg::rank;
use crate::rational::{dot, int, primitive_integer, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Hull3 {
    /// Extreme points, sorted.
    pub vertices: Vec<Vec<Rational>>,
    /// Facets `normal · x ≤ offset` with primitive integer data, sorted.
    pub facets: Vec<Facet>,
    /// Set when the input spans fewer than three dimensions.
    pub degenerate: bool,
}

impl Hull3 {
    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.degenerate && self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    /// Vertices lying on `facet`, in cyclic order around it.
    pub fn facet_cycle(&self, facet: &Facet) -> Vec<Vec<Rational>> {
        let on: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .filter(|v| facet.slack(v).is_zero())
            .cloned()
            .collect();
        order_cyclically(on, &facet.normal)
    }

    /// Exact volume by fan decomposition from the vertex centroid.
    pub fn volume(&self) -> Rational {
        if self.degenerate || self.vertices.is_empty() {
            return Rational::zero();
        }
        let centroid = mean(&self.vertices);
        let mut total = Rational::zero();
        for f in &self.facets {
            let cycle = self.facet_cycle(f);
            let mut six_vol = Rational::zero();
            for w in 1..cycle.len().saturating_sub(1) {
                six_vol += det3(
                    &sub(&cycle[0], &centroid),
                    &sub(&cycle[w], &centroid),
                    &sub(&cycle[w + 1], &centroid),
                );
            }
            total += six_vol.abs();
        }
        total / int(6)
    }

    pub fn to_vpolytope(&self) -> VPolytope {
        VPolytope {
            dim: 3,
            vertices: self.vertices.clone(),
            facets: Some(self.facets.clone()),
        }
    }
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mean(points: &[Vec<Rational>]) -> Vec<Rational> {
    let n = int(points.len() as i64);
    (0..3)
        .map(|i| points.iter().fold(Rational::zero(), |acc, p| acc + &p[i]) / &n)
        .collect()
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Sorts coplanar points by angle around their centroid, after dropping the
/// coordinate along which the plane normal is largest.
fn order_cyclically(points: Vec<Vec<Rational>>, normal: &[Rational]) -> Vec<Vec<Rational>> {
    if points.len() < 3 {
        return points;
    }
    let drop = (0..3)
        .max_by(|&i, &j| normal[i].abs().cmp(&normal[j].abs()))
        .unwrap();
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let c = mean(&points);
    let rel = |p: &Vec<Rational>| (&p[keep[0]] - &c[keep[0]], &p[keep[1]] - &c[keep[1]]);
    let half = |x: &Rational, y: &Rational| {
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    let mut pts = points;
    pts.sort_by(|p, q| {
        let (px, py) = rel(p);
        let (qx, qy) = rel(q);
        half(&px, &py).cmp(&half(&qx, &qy)).then_with(|| {
            let cross = &px * &qy - &py * &qx;
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    pts
}

/// Exact hull of a finite point set in `Q^3`.
pub fn convex_hull_3d(points: &[Vec<Rational>]) -> Result<Hull3, PolytopeError> {
    if let Some(p) = points.iter().find(|p| p.len() != 3) {
        return Err(PolytopeError::DimensionMismatch {
            expected: 3,
            got: p.len(),
        });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let diffs: Vec<Vec<Rational>> = pts.iter().skip(1).map(|p| sub(p, &pts[0])).collect();
    if pts.len() < 4 || rank(&diffs, 3) < 3 {
        return Ok(Hull3 {
            vertices: pts,
            facets: Vec::new(),
            degenerate: true,
        });
    }

    let rows: Vec<Vec<BigInt>> = pts
        .iter()
        .map(|p| {
            let mut r: Vec<Rational> = p.iter().map(|x| -x.clone()).collect();
            r.push(int(1));
            primitive_integer(&r)
        })
        .collect();
    let rays = extreme_rays(&rows, 4, DdOptions::default())?;
    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|r| Facet {
            normal: r[..3].iter().map(|x| Rational::from_integer(x.clone())).collect(),
            offset: Rational::from_integer(r[3].clone()),
        })
        .collect();
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));

    let vertices: Vec<Vec<Rational>> = pts
        .into_iter()
        .filter(|p| facets.iter().filter(|f| dot(&f.normal, p) == f.offset).count() >= 3)
        .collect();
    Ok(Hull3 {
        vertices,
        facets,
        degenerate: false,
    })
}

/// Volume of a 3D V-polytope; zero for lower-dimensional input.
pub fn polyhedron_volume(v: &VPolytope) -> Result<Rational, PolytopeError> {
    Ok(convex_hull_3d(&v.vertices)?.volume())
}
