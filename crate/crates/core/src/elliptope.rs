//! The elliptope and the classical tetrahedron in `(χ_ab, χ_ac, χ_bc)` space.

use std::f64::consts::PI;

use corrgeo_polytope::rational::{frac, Rational};
use nalgebra::{DMatrix, SymmetricEigen, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{check_unit_interval, ChiTriple};
use crate::error::{Error, Result};

/// Eigenvalues above `−PSD_TOL` count as non-negative.
pub const PSD_TOL: f64 = 1e-10;
/// Distance from zero within which `elliptope_value` counts as the surface.
pub const SURFACE_TOL: f64 = 1e-8;

/// Symmetric unit-diagonal matrix of anti-correlation coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    m: DMatrix<f64>,
}

impl ChiMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.ncols(),
            });
        }
        for i in 0..n {
            if (m[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!("diagonal entry {i} is {}", m[(i, i)])));
            }
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 {
                    return Err(Error::InvalidConfig(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
                check_unit_interval("chi", m[(i, j)])?;
            }
        }
        Ok(ChiMatrix { m })
    }

    pub(crate) fn from_unchecked(m: DMatrix<f64>) -> Self {
        ChiMatrix { m }
    }

    pub fn from_triple(chi: &ChiTriple) -> Self {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, chi.ab, chi.ac, chi.ab, 1.0, chi.bc, chi.ac, chi.bc, 1.0]);
        ChiMatrix { m }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.m.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }
}

/// `1 − χ_ab² − χ_ac² − χ_bc² + 2 χ_ab χ_ac χ_bc`, the determinant of the
/// 3×3 anti-correlation matrix.
pub fn elliptope_value(chi: &ChiTriple) -> f64 {
    let (x, y, z) = (chi.ab, chi.ac, chi.bc);
    1.0 - x * x - y * y - z * z + 2.0 * x * y * z
}

/// Same polynomial evaluated exactly.
pub fn elliptope_value_exact(x: &Rational, y: &Rational, z: &Rational) -> Rational {
    frac(1, 1) - x * x - y * y - z * z + frac(2, 1) * x * y * z
}

pub fn elliptope_contains(chi: &ChiTriple, tol: f64) -> bool {
    elliptope_value(chi) >= -tol
}

/// Sign patterns with an even number of minus signs: the tetrahedron is
/// `{χ : ε·χ ≥ −1 for each ε}` inside the cube.
pub const TETRAHEDRON_SIGNS: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

pub fn tetrahedron_contains(chi: &ChiTriple) -> bool {
    let v = chi.to_array();
    TETRAHEDRON_SIGNS.iter().all(|e| {
        let s: f64 = e.iter().zip(&v).map(|(a, b)| a * b).sum();
        (-1.0 - 1e-12..=3.0 + 1e-12).contains(&s)
    })
}

/// Factor `χ = LᵀL` with unit-norm columns.
///
/// `L` has `max(3, rank)` rows, so for three settings it is 3×3 and its
/// columns are the measurement directions. Eigenvalues in `[−1e-10, 0)` are
/// clipped to zero; anything more negative is a PSD failure.
pub fn gram_decompose(chi: &ChiMatrix) -> Result<DMatrix<f64>> {
    let n = chi.dim();
    let eig = SymmetricEigen::new(chi.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let lowest = eig.eigenvalues[order[n - 1]];
    if lowest < -PSD_TOL {
        return Err(Error::NotPsd(lowest));
    }
    let rank = order.iter().filter(|&&k| eig.eigenvalues[k] > PSD_TOL).count();
    let rows = rank.max(3);
    let mut l = DMatrix::<f64>::zeros(rows, n);
    for (r, &k) in order.iter().take(rows.min(n)).enumerate() {
        let lam = eig.eigenvalues[k].max(0.0).sqrt();
        for c in 0..n {
            l[(r, c)] = lam * eig.eigenvectors[(c, k)];
        }
    }
    for c in 0..n {
        let norm = l.column(c).norm();
        if norm > 0.0 {
            l.column_mut(c).scale_mut(1.0 / norm);
        }
    }
    Ok(l)
}

/// Three measurement directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVectorTriple {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub c: Vector3<f64>,
}

impl UnitVectorTriple {
    pub fn new(a: Vector3<f64>, b: Vector3<f64>, c: Vector3<f64>) -> Result<Self> {
        for v in [a, b, c] {
            check_unit(&v)?;
        }
        Ok(UnitVectorTriple { a, b, c })
    }
}

pub(crate) fn check_unit(v: &Vector3<f64>) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector(n));
    }
    Ok(())
}

pub fn chi_from_directions(dirs: &UnitVectorTriple) -> ChiTriple {
    let c = |u: &Vector3<f64>, v: &Vector3<f64>| u.dot(v).clamp(-1.0, 1.0);
    ChiTriple {
        ab: c(&dirs.a, &dirs.b),
        ac: c(&dirs.a, &dirs.c),
        bc: c(&dirs.b, &dirs.c),
    }
}

/// `(φ_ab, φ_ac, φ_bc)` with `χ = cos φ`.
pub fn angles_from_chi(chi: &ChiTriple) -> [f64; 3] {
    chi.to_array().map(|x| x.clamp(-1.0, 1.0).acos())
}

/// Whether three angles can be realized by unit vectors in 3-space: their sum
/// is at most 2π and each is at most the sum of the other two. Equivalent to
/// a non-negative determinant of the matrix of cosines.
pub fn angle_inequality_check(angles: [f64; 3]) -> bool {
    const EPS: f64 = 1e-12;
    let [x, y, z] = angles;
    x + y + z <= 2.0 * PI + EPS && x <= y + z + EPS && y <= x + z + EPS && z <= x + y + EPS
}

/// Weights `λ` with `λ_a e_a + λ_b e_b + λ_c e_c = 0` for a surface point:
/// the null eigenvector of the anti-correlation matrix, scaled so that its
/// largest entry is `+1`.
pub fn null_combination(chi: &ChiTriple) -> Result<[f64; 3]> {
    let v = elliptope_value(chi);
    if v.abs() > SURFACE_TOL {
        return Err(Error::NotOnSurface(v));
    }
    if chi.to_array().iter().any(|x| x.abs() >= 1.0 - 1e-12) {
        return Err(Error::Collinear);
    }
    let eig = SymmetricEigen::new(ChiMatrix::from_triple(chi).m);
    let k = (0..3).min_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j])).unwrap();
    let mut lam = [eig.eigenvectors[(0, k)], eig.eigenvectors[(1, k)], eig.eigenvectors[(2, k)]];
    let big = (0..3).max_by(|&i, &j| lam[i].abs().total_cmp(&lam[j].abs())).unwrap();
    let scale = lam[big];
    for x in lam.iter_mut() {
        *x /= scale;
    }
    Ok(lam)
}

/// Volume of the tetrahedron spanned by the four ticket vertices.
pub fn tetrahedron_volume() -> Rational {
    frac(8, 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloVolume {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
}

/// Points per independent random stream.
const SHARD: u64 = 1 << 18;

/// Rejection-sampling estimate of the elliptope volume in the cube `[−1,1]³`.
///
/// Shard `k` draws from stream `k` of a ChaCha generator keyed by `seed`, so
/// the hit count does not depend on how shards are scheduled.
pub fn elliptope_volume_mc(n_samples: u64, seed: u64) -> MonteCarloVolume {
    let shards = n_samples.div_ceil(SHARD);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let count = SHARD.min(n_samples - k * SHARD);
            let mut h = 0;
            for _ in 0..count {
                let x: f64 = rng.random_range(-1.0..1.0);
                let y: f64 = rng.random_range(-1.0..1.0);
                let z: f64 = rng.random_range(-1.0..1.0);
                if 1.0 - x * x - y * y - z * z + 2.0 * x * y * z >= 0.0 {
                    h += 1;
                }
            }
            h
        })
        .sum();
    let p = hits as f64 / n_samples as f64;
    MonteCarloVolume {
        samples: n_samples,
        hits,
        estimate: 8.0 * p,
        stderr: 8.0 * (p * (1.0 - p) / n_samples as f64).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub tetrahedron: String,
    pub tetrahedron_f64: f64,
    pub elliptope: MonteCarloVolume,
    pub exact_elliptope: f64,
    pub ratio: f64,
}

pub fn volumes(n_samples: u64, seed: u64) -> Result<VolumeReport> {
    if n_samples < 100_000 {
        return Err(Error::InvalidConfig(format!(
            "need at least 100000 samples, got {n_samples}"
        )));
    }
    let tet = tetrahedron_volume();
    let tet_f = corrgeo_polytope::rational::to_f64(&tet);
    let ell = elliptope_volume_mc(n_samples, seed);
    Ok(VolumeReport {
        tetrahedron: corrgeo_polytope::rational::format(&tet),
        tetrahedron_f64: tet_f,
        elliptope: ell,
        exact_elliptope: PI * PI / 2.0,
        ratio: tet_f / ell.estimate,
    })
}

/// Boundary curves of the slice `χ_bc = const` in the `(χ_ab, χ_ac)` plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub chi_bc: f64,
    pub cube: Vec<[f64; 2]>,
    pub tetrahedron: Vec<[f64; 2]>,
    /// Closed polyline: upper branch left to right, then lower branch back.
    pub elliptope: Vec<[f64; 2]>,
}

impl CrossSection {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["curve", "chi_ab", "chi_ac"])?;
        for (name, pts) in [("cube", &self.cube), ("tetrahedron", &self.tetrahedron), ("elliptope", &self.elliptope)] {
            for p in pts {
                out.write_record([name.to_string(), p[0].to_string(), p[1].to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Clips a convex polygon to `{p : n·p ≥ c}`.
fn clip(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let f = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] - c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(&p), f(&q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    let same = |p: &[f64; 2], q: &[f64; 2]| (p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12;
    out.dedup_by(|q, p| same(p, q));
    while out.len() > 1 && same(&out[0], &out[out.len() - 1]) {
        out.pop();
    }
    out
}

pub fn cross_section(chi_bc: f64, resolution: usize) -> Result<CrossSection> {
    let c = check_unit_interval("chi_bc", chi_bc)?;
    if resolution < 2 {
        return Err(Error::InvalidConfig("resolution must be at least 2".into()));
    }
    let cube = vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
    let mut tet = cube.clone();
    for e in TETRAHEDRON_SIGNS {
        // e0 x + e1 y + e2 c ≥ −1
        tet = clip(&tet, [e[0], e[1]], -1.0 - e[2] * c);
    }
    let xs: Vec<f64> = (0..resolution)
        .map(|i| -1.0 + 2.0 * i as f64 / (resolution - 1) as f64)
        .collect();
    let root = |x: f64| ((1.0 - x * x) * (1.0 - c * c)).max(0.0).sqrt();
    let mut ell: Vec<[f64; 2]> = xs.iter().map(|&x| [x, x * c + root(x)]).collect();
    ell.extend(xs.iter().rev().map(|&x| [x, x * c - root(x)]));
    Ok(CrossSection {
        chi_bc: c,
        cube,
        tetrahedron: tet,
        elliptope: ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn t(x: f64, y: f64, z: f64) -> ChiTriple {
        ChiTriple::new(x, y, z).unwrap()
    }

    #[test]
    fn value_examples() {
        assert_abs_diff_eq!(elliptope_value(&t(-0.5, -0.5, -0.5)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(elliptope_value(&t(1.0, 1.0, 1.0)), 0.0);
        assert_abs_diff_eq!(elliptope_value(&t(-1.0, -1.0, -1.0)), -4.0);
    }

    #[test]
    fn membership_examples() {
        let m = t(-0.5, -0.5, -0.5);
        assert!(elliptope_contains(&m, 1e-12));
        assert!(!tetrahedron_contains(&m));
        assert!(tetrahedron_contains(&t(0.0, 0.0, 0.0)));
        for v in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
            let p = t(v.0, v.1, v.2);
            assert!(tetrahedron_contains(&p) && elliptope_contains(&p, 1e-12));
        }
    }

    #[test]
    fn gram_of_mermin_matrix_is_planar_at_120_degrees() {
        let l = gram_decompose(&ChiMatrix::from_triple(&t(-0.5, -0.5, -0.5))).unwrap();
        let g = l.transpose() * &l;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { -0.5 };
                assert_abs_diff_eq!(g[(i, j)], want, epsilon = 1e-10);
            }
        }
        let sum = l.column(0) + l.column(1) + l.column(2);
        assert!(sum.norm() < 1e-8);
    }

    #[test]
    fn gram_rejects_indefinite() {
        assert!(matches!(
            gram_decompose(&ChiMatrix::from_triple(&t(-1.0, -1.0, -1.0))),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn directions_and_angles() {
        let up = Vector3::new(0.0, 0.0, 1.0);
        let dirs = UnitVectorTriple::new(up, up, -up).unwrap();
        assert_eq!(chi_from_directions(&dirs), t(1.0, -1.0, -1.0));
        assert!(UnitVectorTriple::new(up * 2.0, up, up).is_err());
        let a = angles_from_chi(&t(-0.5, 1.0, 0.0));
        assert_abs_diff_eq!(a[0], 2.0 * PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[1], 0.0);
        assert_abs_diff_eq!(a[2], PI / 2.0);
    }

    #[test]
    fn angle_inequality_examples() {
        let d = PI / 180.0;
        assert!(angle_inequality_check([120.0 * d, 120.0 * d, 120.0 * d]));
        assert!(!angle_inequality_check([180.0 * d, 10.0 * d, 10.0 * d]));
        let bad = t((180.0 * d).cos(), (10.0 * d).cos(), (10.0 * d).cos());
        assert!(elliptope_value(&bad) < 0.0);
        assert!(angle_inequality_check([0.0, 0.0, 0.0]));
    }

    #[test]
    fn null_combination_examples() {
        let lam = null_combination(&t(-0.5, -0.5, -0.5)).unwrap();
        for x in lam {
            assert_abs_diff_eq!(x, 1.0, epsilon = 1e-12);
        }
        assert!(matches!(null_combination(&t(1.0, 1.0, 1.0)), Err(Error::Collinear)));
        assert!(matches!(null_combination(&t(0.0, 0.0, 0.0)), Err(Error::NotOnSurface(_))));
    }

    #[test]
    fn slices() {
        let s = cross_section(0.0, 101).unwrap();
        for p in &s.elliptope {
            assert_abs_diff_eq!(p[0] * p[0] + p[1] * p[1], 1.0, epsilon = 1e-12);
        }
        for p in &s.tetrahedron {
            assert_abs_diff_eq!(p[0].abs() + p[1].abs(), 1.0, epsilon = 1e-12);
        }
        assert_eq!(s.tetrahedron.len(), 4);
        let s = cross_section(1.0, 11).unwrap();
        for p in &s.elliptope {
            assert_abs_diff_eq!(p[0], p[1], epsilon = 1e-12);
        }
        let s = cross_section(-1.0, 11).unwrap();
        for p in &s.elliptope {
            assert_abs_diff_eq!(p[0], -p[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn volume_mc_is_deterministic() {
        let a = elliptope_volume_mc(300_000, 7);
        let b = elliptope_volume_mc(300_000, 7);
        assert_eq!(a, b);
        assert!((a.estimate - PI * PI / 2.0).abs() < 5.0 * a.stderr);
        assert!(volumes(10, 1).is_err());
    }
}
