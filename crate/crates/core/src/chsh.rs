//! Four-setting CHSH setup: Alice chooses `a` or `b`, Bob `a'` or `b'`.
//!
//! Coordinates are `(χ_aa', χ_ab', χ_ba', χ_bb')`. The local polytope is the
//! hyperoctahedron spanned by eight ticket rows; the quantum set is the
//! shadow of the 4×4 elliptope over `(a, b, a', b')`.

use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::correlation::check_unit_interval;
use crate::elliptope::{check_unit, ChiMatrix, PSD_TOL};
use crate::error::{Error, Result};
use crate::raffle::{enumerate_tickets, Ticket};
use crate::spin::Spin;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiQuadruple {
    pub aa: f64,
    pub ab: f64,
    pub ba: f64,
    pub bb: f64,
}

impl ChiQuadruple {
    pub fn new(aa: f64, ab: f64, ba: f64, bb: f64) -> Result<Self> {
        Ok(ChiQuadruple {
            aa: check_unit_interval("chi_aa'", aa)?,
            ab: check_unit_interval("chi_ab'", ab)?,
            ba: check_unit_interval("chi_ba'", ba)?,
            bb: check_unit_interval("chi_bb'", bb)?,
        })
    }

    /// Unvalidated constructor for points that may leave the box.
    pub fn raw(aa: f64, ab: f64, ba: f64, bb: f64) -> Self {
        ChiQuadruple { aa, ab, ba, bb }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.aa, self.ab, self.ba, self.bb]
    }
}

/// `χ_aa' + χ_ab' + χ_ba' − χ_bb'`.
pub fn chsh_value(q: &ChiQuadruple) -> f64 {
    q.aa + q.ab + q.ba - q.bb
}

/// The four CHSH expressions, each with the minus sign on a different term.
pub fn chsh_variants(q: &ChiQuadruple) -> [f64; 4] {
    let s = q.aa + q.ab + q.ba + q.bb;
    [s - 2.0 * q.bb, s - 2.0 * q.ba, s - 2.0 * q.ab, s - 2.0 * q.aa]
}

/// Inside the local polytope: all four CHSH expressions in `[−2, 2]` and
/// every coordinate in `[−1, 1]`.
pub fn hyperoctahedron_contains(q: &ChiQuadruple) -> bool {
    let eps = 1e-12;
    chsh_variants(q).iter().all(|v| v.abs() <= 2.0 + eps) && q.to_array().iter().all(|x| x.abs() <= 1.0 + eps)
}

#[derive(Debug, Clone)]
pub struct ChshTicket {
    pub ticket: Ticket,
    /// Exact `±1` row `(χ_aa', χ_ab', χ_ba', χ_bb')`.
    pub chi: [i32; 4],
    pub chsh: i32,
}

/// Setting order used for four-setting tickets.
pub const CHSH_SETTINGS: [&str; 4] = ["a", "b", "a'", "b'"];

/// The eight canonical spin-1/2 tickets over `(a, b, a', b')`.
pub fn enumerate_chsh_tickets() -> Vec<ChshTicket> {
    enumerate_tickets(4, Spin::HALF)
        .into_iter()
        .map(|t| {
            let l = t.left_twice();
            // For spin 1/2 doubled outcomes are ±1 and χ_xy = t_x t_y.
            let chi = [l[0] * l[2], l[0] * l[3], l[1] * l[2], l[1] * l[3]];
            ChshTicket {
                chsh: chi[0] + chi[1] + chi[2] - chi[3],
                chi,
                ticket: t,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `|χ_aa' χ_ba' − χ_ab' χ_bb'| ≤ √(1−χ_aa'²)√(1−χ_ba'²) + √(1−χ_ab'²)√(1−χ_bb'²)`.
pub fn landau_check(q: &ChiQuadruple) -> LandauReport {
    let r = |x: f64| (1.0 - x * x).max(0.0).sqrt();
    let lhs = (q.aa * q.ba - q.ab * q.bb).abs();
    let rhs = r(q.aa) * r(q.ba) + r(q.ab) * r(q.bb);
    LandauReport {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    }
}

/// Full matrix over `(a, b, a', b')` given the two unprobed coefficients.
pub fn chi4_matrix(q: &ChiQuadruple, chi_ab: f64, chi_apbp: f64) -> ChiMatrix {
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        1.0,     chi_ab, q.aa,     q.ab,
        chi_ab,  1.0,    q.ba,     q.bb,
        q.aa,    q.ba,   1.0,      chi_apbp,
        q.ab,    q.bb,   chi_apbp, 1.0,
    ]);
    ChiMatrix::from_unchecked(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub feasible: bool,
    /// `(χ_ab, χ_a'b')` making the 4×4 matrix positive semi-definite.
    pub witness: Option<(f64, f64)>,
    pub min_eigenvalue: f64,
}

/// Grid spacing for the `χ_ab` search.
const GRID_STEP: f64 = 1.0 / 400.0;
const REFINE_TOL: f64 = 1e-6;

/// Score of `x = χ_ab`: with `y = χ_a'b'` chosen optimally, the matrix is PSD
/// iff the score is non-negative. Returns `(score, best y)`.
fn completion_score(q: &ChiQuadruple, x: f64) -> (f64, f64) {
    let (p, qq, r, s) = (q.aa, q.ab, q.ba, q.bb);
    if (x.abs() - 1.0).abs() < 1e-15 {
        // Rows a and b coincide up to sign; the blocks must agree.
        let sign = x.signum();
        let mismatch = (r - sign * p).abs().max((s - sign * qq).abs());
        let score = if mismatch > 1e-12 { -mismatch } else { 0.0 };
        return (score, p * qq);
    }
    // Schur complement C − Bᵀ A⁻¹ B with A = [[1,x],[x,1]], B = [[p,q],[r,s]].
    let det_a = 1.0 - x * x;
    let quad = |u: f64, v: f64, w: f64, z: f64| (u * w - x * (u * z + v * w) + v * z) / det_a;
    let u11 = quad(p, r, p, r);
    let u22 = quad(qq, s, qq, s);
    let u12 = quad(p, r, qq, s);
    ((1.0 - u11).min(1.0 - u22), u12.clamp(-1.0, 1.0))
}

/// Searches `(χ_ab, χ_a'b') ∈ [−1,1]²` completing `q` to a positive
/// semi-definite 4×4 matrix. The score is concave in `χ_ab`, so a grid at
/// spacing 1/400 followed by golden-section refinement finds its maximum; the
/// verdict is an eigenvalue test on the best completion.
pub fn elliptope4_completion(q: &ChiQuadruple) -> Completion {
    let n = (2.0 / GRID_STEP).round() as i64;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let x = -1.0 + i as f64 * GRID_STEP;
        let (score, _) = completion_score(q, x);
        if score > best {
            best = score;
            best_i = i;
        }
    }
    let mut best_x = -1.0 + best_i as f64 * GRID_STEP;
    // Golden-section search on the bracket around the best grid point.
    let (mut lo, mut hi) = ((best_x - GRID_STEP).max(-1.0), (best_x + GRID_STEP).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = completion_score(q, x1).0;
    let mut f2 = completion_score(q, x2).0;
    while hi - lo > REFINE_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = completion_score(q, x2).0;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = completion_score(q, x1).0;
        }
    }
    let mid = (lo + hi) / 2.0;
    if completion_score(q, mid).0 > best {
        best_x = mid;
    }
    let (_, y) = completion_score(q, best_x);
    let lam = chi4_matrix(q, best_x, y).min_eigenvalue();
    let feasible = lam >= -PSD_TOL;
    Completion {
        feasible,
        witness: feasible.then_some((best_x, y)),
        min_eigenvalue: lam,
    }
}

/// Anti-correlation matrix of four measurement directions.
pub fn quantum_chi4_from_directions(
    a: &Vector3<f64>,
    b: &Vector3<f64>,
    ap: &Vector3<f64>,
    bp: &Vector3<f64>,
) -> Result<ChiMatrix> {
    let dirs = [a, b, ap, bp];
    for v in dirs {
        check_unit(v)?;
    }
    let m = DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else { dirs[i].dot(dirs[j]).clamp(-1.0, 1.0) });
    ChiMatrix::new(m)
}

/// Reads `(χ_aa', χ_ab', χ_ba', χ_bb')` off a 4×4 matrix in `(a, b, a', b')` order.
pub fn quadruple_of(m: &ChiMatrix) -> ChiQuadruple {
    let x = m.matrix();
    ChiQuadruple::raw(x[(0, 2)], x[(0, 3)], x[(1, 2)], x[(1, 3)])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TFamilyPoint {
    pub t: f64,
    pub quadruple: ChiQuadruple,
    pub chsh_value: f64,
    pub classical: bool,
    pub quantum: bool,
}

/// The point `(−t, −t, −t, t)`; `t = 1` is the PR box.
pub fn t_family(t: f64) -> Result<TFamilyPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let q = ChiQuadruple::new(-t, -t, -t, t)?;
    Ok(TFamilyPoint {
        t,
        quadruple: q,
        chsh_value: chsh_value(&q),
        classical: hyperoctahedron_contains(&q),
        quantum: landau_check(&q).holds && elliptope4_completion(&q).feasible,
    })
}

/// Largest `t` for which `pred(t)` holds, found by bisection on `[0, 1]`.
/// `pred` must be true at 0 and false at 1.
pub fn bisect_threshold(pred: impl Fn(f64) -> bool, tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = (lo + hi) / 2.0;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

/// `(classical, quantum)` boundaries of the t-family.
pub fn t_family_thresholds(tol: f64) -> (f64, f64) {
    let classical = bisect_threshold(|t| t_family(t).map(|p| p.classical).unwrap_or(false), tol);
    let quantum = bisect_threshold(|t| t_family(t).map(|p| p.quantum).unwrap_or(false), tol);
    (classical, quantum)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    pub quadruple: ChiQuadruple,
    pub chsh_value: f64,
    pub in_local: bool,
    pub landau: LandauReport,
    pub in_shadow: bool,
    pub witness: Option<(f64, f64)>,
}

pub fn chsh_report(q: &ChiQuadruple) -> ChshReport {
    let c = elliptope4_completion(q);
    ChshReport {
        quadruple: *q,
        chsh_value: chsh_value(q),
        in_local: hyperoctahedron_contains(q),
        landau: landau_check(q),
        in_shadow: c.feasible,
        witness: c.witness,
    }
}
