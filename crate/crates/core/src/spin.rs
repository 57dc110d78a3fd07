//! Spin-s angular momentum, Wigner small-d matrices and the two-particle
//! singlet state.
//!
//! Basis vectors are ordered by descending magnetic quantum number: index 0
//! is `m = +s`, index `2s` is `m = −s`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use corrgeo_polytope::rational::{self, Rational};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlation::{Cell, CorrelationArray};
use crate::error::{Error, Result};

/// Tolerance used when checking that an angle lies in `[0, π]`.
const ANGLE_SLACK: f64 = 1e-12;

/// A spin quantum number, stored as the integer `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const HALF: Spin = Spin { twice: 1 };
    pub const ONE: Spin = Spin { twice: 2 };
    pub const THREE_HALVES: Spin = Spin { twice: 3 };

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin("0".into()));
        }
        Ok(Spin { twice })
    }

    pub fn new(s: f64) -> Result<Self> {
        let t = 2.0 * s;
        if !t.is_finite() || t < 0.5 || (t - t.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(s.to_string()));
        }
        Spin::from_twice(t.round() as u32)
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Number of outcomes `2s + 1`.
    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.twice % 2 == 1
    }

    /// Outcomes `s, s−1, …, −s`.
    pub fn outcomes(self) -> Vec<f64> {
        self.twice_outcomes().into_iter().map(|t| t as f64 / 2.0).collect()
    }

    /// Outcomes doubled to integers: `2s, 2s−2, …, −2s`.
    pub fn twice_outcomes(self) -> Vec<i32> {
        let t = self.twice as i32;
        (0..=t).map(|i| t - 2 * i).collect()
    }

    /// Basis index of the doubled outcome `twice_m`.
    pub fn index_of_twice(self, twice_m: i32) -> Result<usize> {
        let t = self.twice as i32;
        if twice_m.abs() > t || (t - twice_m) % 2 != 0 {
            return Err(Error::OutcomeNotInList {
                m: twice_m as f64 / 2.0,
                spin: self.to_string(),
            });
        }
        Ok(((t - twice_m) / 2) as usize)
    }

    pub fn index_of(self, m: f64) -> Result<usize> {
        let tm = 2.0 * m;
        if (tm - tm.round()).abs() > 1e-9 {
            return Err(Error::OutcomeNotInList {
                m,
                spin: self.to_string(),
            });
        }
        self.index_of_twice(tm.round() as i32)
    }

    /// Variance `s(s+1)/3` of an outcome uniformly distributed over the
    /// `2s + 1` values.
    pub fn uniform_variance(self) -> f64 {
        let s = self.value();
        s * (s + 1.0) / 3.0
    }

    pub fn uniform_variance_exact(self) -> Rational {
        let t = self.twice as i64;
        rational::frac(t * (t + 2), 12)
    }

    pub fn as_rational(self) -> Rational {
        rational::frac(self.twice as i64, 2)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Accepts `"3/2"`, `"1"` or `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpin(s.to_string());
        let r = rational::parse(s).map_err(|_| bad())?;
        let twice = r * rational::int(2);
        if !twice.is_integer() {
            return Err(bad());
        }
        let t: i64 = twice.to_integer().try_into().map_err(|_| bad())?;
        if t <= 0 {
            return Err(bad());
        }
        Spin::from_twice(t as u32)
    }
}

impl TryFrom<String> for Spin {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Spin> for String {
    fn from(s: Spin) -> String {
        s.to_string()
    }
}

/// `(S_x, S_y, S_z)` in the descending `S_z` eigenbasis, with ħ = 1.
pub fn spin_matrices(s: Spin) -> (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
    let d = s.dim();
    let sv = s.value();
    let mut plus = DMatrix::<Complex64>::zeros(d, d);
    let mut sz = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..d {
        let m = sv - i as f64;
        sz[(i, i)] = Complex64::new(m, 0.0);
        if i > 0 {
            // S+ |m⟩ = √(s(s+1) − m(m+1)) |m+1⟩
            plus[(i - 1, i)] = Complex64::new((sv * (sv + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let minus = plus.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let sx = (&plus + &minus) * half;
    let sy = (&plus - &minus) * Complex64::new(0.0, -0.5);
    (sx, sy, sz)
}

fn factorials(n: usize) -> Vec<f64> {
    let mut exact: Vec<u128> = vec![1; n + 1];
    for k in 1..=n {
        exact[k] = exact[k - 1].saturating_mul(k as u128);
    }
    exact.into_iter().map(|x| x as f64).collect()
}

fn small_d_twice(twice_j: i32, tmp: i32, tm: i32, beta: f64, fact: &[f64]) -> f64 {
    // Half-integers enter only through these integer combinations.
    let jpmp = ((twice_j + tmp) / 2) as usize;
    let jmmp = ((twice_j - tmp) / 2) as usize;
    let jpm = ((twice_j + tm) / 2) as usize;
    let jmm = ((twice_j - tm) / 2) as usize;
    let m_minus_mp = (tm - tmp) / 2;
    let prefactor = (fact[jpmp] * fact[jmmp] * fact[jpm] * fact[jmm]).sqrt();
    let (sh, ch) = (beta / 2.0).sin_cos();
    let k_lo = m_minus_mp.max(0);
    let k_hi = (jpm as i32).min(jmmp as i32);
    let mut sum = 0.0;
    for k in k_lo..=k_hi {
        let sign = if (k - m_minus_mp) % 2 == 0 { 1.0 } else { -1.0 };
        let denom = fact[(jpm as i32 - k) as usize]
            * fact[k as usize]
            * fact[(jmmp as i32 - k) as usize]
            * fact[(k - m_minus_mp) as usize];
        let cos_pow = twice_j - 2 * k + m_minus_mp;
        let sin_pow = 2 * k - m_minus_mp;
        sum += sign * ch.powi(cos_pow) * sh.powi(sin_pow) / denom;
    }
    prefactor * sum
}

/// Matrix element `d^s_{m_row, m_col}(β) = ⟨m_row| exp(−iβ S_y) |m_col⟩`.
///
/// The sum formula is valid for every real `β`; angles outside `[0, π]` are
/// not wrapped. The element has period 4π and picks up the factor `(−1)^{2s}`
/// under `β → β + 2π`.
pub fn wigner_small_d(s: Spin, m_row: f64, m_col: f64, beta: f64) -> Result<f64> {
    let r = s.index_of(m_row)?;
    let c = s.index_of(m_col)?;
    let tw = s.twice() as i32;
    let fact = factorials(s.twice() as usize);
    Ok(small_d_twice(tw, tw - 2 * r as i32, tw - 2 * c as i32, beta, &fact))
}

/// The full `(2s+1) × (2s+1)` small-d matrix, rows and columns descending.
pub fn wigner_d_matrix(s: Spin, beta: f64) -> DMatrix<f64> {
    let d = s.dim();
    let tw = s.twice() as i32;
    let fact = factorials(s.twice() as usize);
    DMatrix::from_fn(d, d, |r, c| {
        small_d_twice(tw, tw - 2 * r as i32, tw - 2 * c as i32, beta, &fact)
    })
}

/// Singlet state in the product basis `|m_A⟩ ⊗ |m_B⟩`, component index
/// `i·(2s+1) + j`. Coefficient `(−1)^(s−m)/√(2s+1)` on `|m⟩|−m⟩`.
pub fn singlet_state(s: Spin) -> DVector<Complex64> {
    let d = s.dim();
    let norm = 1.0 / (d as f64).sqrt();
    let mut v = DVector::<Complex64>::zeros(d * d);
    for i in 0..d {
        // m = s − i, so s − m = i and −m has index d − 1 − i.
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        v[i * d + (d - 1 - i)] = Complex64::new(sign * norm, 0.0);
    }
    v
}

pub(crate) fn check_angle(phi: f64) -> Result<f64> {
    if !phi.is_finite() || !(-ANGLE_SLACK..=std::f64::consts::PI + ANGLE_SLACK).contains(&phi) {
        return Err(Error::AngleOutOfRange(phi));
    }
    Ok(phi.clamp(0.0, std::f64::consts::PI))
}

/// Born-rule joint distribution for measurements on the singlet along two
/// directions separated by `phi`: `Pr(m1, m2) = |d^s_{m2,−m1}(φ)|² / (2s+1)`.
pub fn singlet_cell(s: Spin, phi: f64) -> Result<Cell> {
    let phi = check_angle(phi)?;
    let d = s.dim();
    let dm = wigner_d_matrix(s, phi);
    let mut probs = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            // −m1 has index d − 1 − i.
            let x = dm[(j, d - 1 - i)];
            probs.push(x * x / d as f64);
        }
    }
    Cell::new(d, probs)
}

/// Angles between measurement directions for every unordered pair of
/// settings. Diagonal angles are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAngles {
    settings: Vec<String>,
    angles: BTreeMap<(String, String), f64>,
}

impl PairAngles {
    pub fn new(settings: Vec<String>) -> Self {
        PairAngles {
            settings,
            angles: BTreeMap::new(),
        }
    }

    /// Three settings `a, b, c` with the given angles in radians.
    pub fn mermin(ab: f64, ac: f64, bc: f64) -> Self {
        let mut p = PairAngles::new(vec!["a".into(), "b".into(), "c".into()]);
        p.set("a", "b", ab);
        p.set("a", "c", ac);
        p.set("b", "c", bc);
        p
    }

    pub fn set(&mut self, x: &str, y: &str, phi: f64) {
        let key = if x <= y { (x.to_string(), y.to_string()) } else { (y.to_string(), x.to_string()) };
        self.angles.insert(key, phi);
    }

    pub fn get(&self, x: &str, y: &str) -> Result<f64> {
        if x == y {
            return Ok(0.0);
        }
        let key = if x <= y { (x.to_string(), y.to_string()) } else { (y.to_string(), x.to_string()) };
        self.angles
            .get(&key)
            .copied()
            .ok_or_else(|| Error::MissingAngle(x.to_string(), y.to_string()))
    }

    pub fn settings(&self) -> &[String] {
        &self.settings
    }
}

/// Correlation array of the singlet with cell `(x, y) = singlet_cell(s, φ_xy)`.
pub fn quantum_correlation_array(s: Spin, angles: &PairAngles) -> Result<CorrelationArray> {
    let labels = angles.settings().to_vec();
    let mut cells = Vec::with_capacity(labels.len() * labels.len());
    for x in &labels {
        for y in &labels {
            cells.push(singlet_cell(s, angles.get(x, y)?)?);
        }
    }
    CorrelationArray::square(labels, s, cells)
}
