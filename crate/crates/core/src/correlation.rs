//! Correlation arrays: grids of joint-probability cells indexed by Alice's and
//! Bob's settings, and the statistics read off them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::Spin;

/// Tolerance for normalization and symmetry checks on probabilities.
pub const PROB_TOL: f64 = 1e-12;

/// Joint distribution for one setting pair. Row index is Alice's outcome and
/// column index Bob's, both descending from `+s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    d: usize,
    probs: Vec<f64>,
}

impl Cell {
    /// Row-major `d × d` probabilities; entries must be non-negative and sum
    /// to one within [`PROB_TOL`].
    pub fn new(d: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -PROB_TOL) {
            return Err(Error::NotNormalized(format!("entry {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL * (d * d) as f64 {
            return Err(Error::NotNormalized(format!("entries sum to {sum}")));
        }
        Ok(Cell { d, probs })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: r.len(),
            });
        }
        Cell::new(d, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.d + j]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.probs.chunks(self.d).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Cell {
        let d = self.d;
        let probs = (0..d * d).map(|k| self.get(k % d, k / d)).collect();
        Cell { d, probs }
    }

    /// Alice's marginal (row sums).
    pub fn row_marginal(&self) -> Vec<f64> {
        self.probs.chunks(self.d).map(|r| r.iter().sum()).collect()
    }

    /// Bob's marginal (column sums).
    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.d).map(|j| (0..self.d).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn max_abs_diff(&self, other: &Cell) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn check_spin(&self, spin: Spin) -> Result<()> {
        if self.d != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                got: self.d,
            });
        }
        Ok(())
    }
}

/// `Σ m1·m2·Pr(m1, m2)`.
pub fn cell_expectation(cell: &Cell, spin: Spin) -> Result<f64> {
    cell.check_spin(spin)?;
    let m = spin.outcomes();
    let mut e = 0.0;
    for (i, mi) in m.iter().enumerate() {
        for (j, mj) in m.iter().enumerate() {
            e += mi * mj * cell.get(i, j);
        }
    }
    Ok(e)
}

/// Anti-correlation coefficient: minus the Pearson correlation of the two
/// outcomes, with standard deviations taken from the cell's own marginals.
///
/// For cells with uniform marginals the means vanish and both variances are
/// `s(s+1)/3`, so this is `−⟨m1 m2⟩ / (s(s+1)/3)`.
pub fn chi_of_cell(cell: &Cell, spin: Spin) -> Result<f64> {
    cell.check_spin(spin)?;
    let m = spin.outcomes();
    let (ra, cb) = (cell.row_marginal(), cell.col_marginal());
    let mean = |p: &[f64]| p.iter().zip(&m).map(|(pi, mi)| pi * mi).sum::<f64>();
    let (mu_a, mu_b) = (mean(&ra), mean(&cb));
    let var = |p: &[f64], mu: f64| p.iter().zip(&m).map(|(pi, mi)| pi * (mi - mu).powi(2)).sum::<f64>();
    let (va, vb) = (var(&ra, mu_a), var(&cb, mu_b));
    if va <= PROB_TOL || vb <= PROB_TOL {
        return Err(Error::DegenerateCell);
    }
    let cov = cell_expectation(cell, spin)? - mu_a * mu_b;
    Ok((-cov / (va * vb).sqrt()).clamp(-1.0, 1.0))
}

/// Two-outcome cell with the given anti-correlation: diagonal `(1−χ)/4`,
/// off-diagonal `(1+χ)/4`.
pub fn cell_from_chi(chi: f64) -> Result<Cell> {
    check_unit_interval("chi", chi)?;
    let on = (1.0 - chi) / 4.0;
    let off = (1.0 + chi) / 4.0;
    Cell::new(2, vec![on, off, off, on])
}

pub(crate) fn check_unit_interval(what: &'static str, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + PROB_TOL {
        return Err(Error::OutOfRange {
            what,
            value: x,
            lo: -1.0,
            hi: 1.0,
        });
    }
    Ok(x.clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSymmetries {
    pub centrosymmetric: bool,
    pub symmetric: bool,
    pub persymmetric: bool,
}

pub fn cell_symmetries(cell: &Cell) -> CellSymmetries {
    let d = cell.dim();
    let all = |f: &dyn Fn(usize, usize) -> f64| {
        (0..d).all(|i| (0..d).all(|j| (cell.get(i, j) - f(i, j)).abs() <= PROB_TOL))
    };
    let flags = CellSymmetries {
        centrosymmetric: all(&|i, j| cell.get(d - 1 - i, d - 1 - j)),
        symmetric: all(&|i, j| cell.get(j, i)),
        persymmetric: all(&|i, j| cell.get(d - 1 - j, d - 1 - i)),
    };
    let count = [flags.centrosymmetric, flags.symmetric, flags.persymmetric]
        .iter()
        .filter(|b| **b)
        .count();
    debug_assert!(count != 2, "two matrix symmetries always imply the third");
    flags
}

/// The three anti-correlation coefficients of a three-setting array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiTriple {
    pub ab: f64,
    pub ac: f64,
    pub bc: f64,
}

impl ChiTriple {
    pub fn new(ab: f64, ac: f64, bc: f64) -> Result<Self> {
        Ok(ChiTriple {
            ab: check_unit_interval("chi_ab", ab)?,
            ac: check_unit_interval("chi_ac", ac)?,
            bc: check_unit_interval("chi_bc", bc)?,
        })
    }

    pub fn uniform(x: f64) -> Result<Self> {
        ChiTriple::new(x, x, x)
    }

    pub fn sum(&self) -> f64 {
        self.ab + self.ac + self.bc
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.ab, self.ac, self.bc]
    }
}

/// Probability that Alice and Bob find opposite outcomes when each of the
/// nine setting pairs is equally likely (two-outcome case).
pub fn pr_opposite(chi: &ChiTriple) -> f64 {
    2.0 / 3.0 + chi.sum() / 9.0
}

/// Grid of cells over Alice's settings × Bob's settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationArray {
    alice_settings: Vec<String>,
    bob_settings: Vec<String>,
    spin: Spin,
    cells: Vec<Cell>,
}

impl CorrelationArray {
    /// `cells` is row-major over `alice_settings × bob_settings`.
    pub fn new(
        alice_settings: Vec<String>,
        bob_settings: Vec<String>,
        spin: Spin,
        cells: Vec<Cell>,
    ) -> Result<Self> {
        let want = alice_settings.len() * bob_settings.len();
        if cells.len() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                got: cells.len(),
            });
        }
        if let Some(c) = cells.iter().find(|c| c.dim() != spin.dim()) {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                got: c.dim(),
            });
        }
        Ok(CorrelationArray {
            alice_settings,
            bob_settings,
            spin,
            cells,
        })
    }

    /// Both parties choose from the same settings.
    pub fn square(settings: Vec<String>, spin: Spin, cells: Vec<Cell>) -> Result<Self> {
        CorrelationArray::new(settings.clone(), settings, spin, cells)
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn alice_settings(&self) -> &[String] {
        &self.alice_settings
    }

    pub fn bob_settings(&self) -> &[String] {
        &self.bob_settings
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.bob_settings.len() + j]
    }

    pub fn cell_by_label(&self, x: &str, y: &str) -> Result<&Cell> {
        let i = self
            .alice_settings
            .iter()
            .position(|s| s == x)
            .ok_or_else(|| Error::UnknownSetting(x.into()))?;
        let j = self
            .bob_settings
            .iter()
            .position(|s| s == y)
            .ok_or_else(|| Error::UnknownSetting(y.into()))?;
        Ok(self.cell(i, j))
    }

    pub fn is_square(&self) -> bool {
        self.alice_settings == self.bob_settings
    }

    /// `cell(x, y) = cell(y, x)ᵀ` for every pair (square arrays only).
    pub fn is_grid_symmetric(&self, tol: f64) -> bool {
        let n = self.alice_settings.len();
        self.is_square()
            && (0..n).all(|i| (0..n).all(|j| self.cell(i, j).max_abs_diff(&self.cell(j, i).transpose()) <= tol))
    }

    /// Anti-correlation coefficient of every cell, row-major.
    pub fn chi_grid(&self) -> Result<Vec<f64>> {
        self.cells.iter().map(|c| chi_of_cell(c, self.spin)).collect()
    }

    /// `(χ_ab, χ_ac, χ_bc)` of a square three-setting array.
    pub fn chi_triple(&self) -> Result<ChiTriple> {
        if !self.is_square() || self.alice_settings.len() != 3 {
            return Err(Error::InvalidConfig("chi triple needs a square 3-setting array".into()));
        }
        let chi = |i, j| chi_of_cell(self.cell(i, j), self.spin);
        ChiTriple::new(chi(0, 1)?, chi(0, 2)?, chi(1, 2)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ArrayJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<ArrayJson>(s)?.try_into()
    }

    /// One line per cell entry: `alice,bob,m_alice,m_bob,probability`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["alice_setting", "bob_setting", "m_alice", "m_bob", "probability"])?;
        let m = self.spin.outcomes();
        for (i, x) in self.alice_settings.iter().enumerate() {
            for (j, y) in self.bob_settings.iter().enumerate() {
                let c = self.cell(i, j);
                for (a, ma) in m.iter().enumerate() {
                    for (b, mb) in m.iter().enumerate() {
                        out.write_record([
                            x.clone(),
                            y.clone(),
                            ma.to_string(),
                            mb.to_string(),
                            format!("{:.17}", c.get(a, b)),
                        ])?;
                    }
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ArrayJson {
    settings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bob_settings: Option<Vec<String>>,
    spin: Spin,
    cells: BTreeMap<String, Vec<Vec<f64>>>,
}

impl From<&CorrelationArray> for ArrayJson {
    fn from(a: &CorrelationArray) -> Self {
        let mut cells = BTreeMap::new();
        for (i, x) in a.alice_settings.iter().enumerate() {
            for (j, y) in a.bob_settings.iter().enumerate() {
                cells.insert(format!("{x},{y}"), a.cell(i, j).rows());
            }
        }
        ArrayJson {
            settings: a.alice_settings.clone(),
            bob_settings: (!a.is_square()).then(|| a.bob_settings.clone()),
            spin: a.spin,
            cells,
        }
    }
}

impl TryFrom<ArrayJson> for CorrelationArray {
    type Error = Error;
    fn try_from(j: ArrayJson) -> Result<Self> {
        let bob = j.bob_settings.unwrap_or_else(|| j.settings.clone());
        let mut cells = Vec::with_capacity(j.settings.len() * bob.len());
        for x in &j.settings {
            for y in &bob {
                let key = format!("{x},{y}");
                let rows = j
                    .cells
                    .get(&key)
                    .ok_or_else(|| Error::InvalidConfig(format!("missing cell {key:?}")))?;
                cells.push(Cell::from_rows(rows)?);
            }
        }
        CorrelationArray::new(j.settings, bob, j.spin, cells)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMarginals {
    pub alice_setting: String,
    pub bob_setting: String,
    pub alice: Vec<f64>,
    pub bob: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonSignalingReport {
    pub uniform_marginals: bool,
    pub nonsignaling: bool,
    pub marginals: Vec<CellMarginals>,
}

/// Checks uniform marginals and the weaker non-signaling condition: each
/// party's marginal for its own setting does not depend on the other's.
pub fn nonsignaling_report(array: &CorrelationArray) -> NonSignalingReport {
    let (na, nb) = (array.alice_settings.len(), array.bob_settings.len());
    let d = array.spin.dim();
    let uniform = 1.0 / d as f64;
    let mut marginals = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            let c = array.cell(i, j);
            marginals.push(CellMarginals {
                alice_setting: array.alice_settings[i].clone(),
                bob_setting: array.bob_settings[j].clone(),
                alice: c.row_marginal(),
                bob: c.col_marginal(),
            });
        }
    }
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= PROB_TOL);
    let uniform_marginals = marginals
        .iter()
        .all(|m| m.alice.iter().chain(&m.bob).all(|p| (p - uniform).abs() <= PROB_TOL));
    let alice_ok = (0..na).all(|i| (1..nb).all(|j| close(&marginals[i * nb].alice, &marginals[i * nb + j].alice)));
    let bob_ok = (0..nb).all(|j| (1..na).all(|i| close(&marginals[j].bob, &marginals[i * nb + j].bob)));
    NonSignalingReport {
        uniform_marginals,
        nonsignaling: alice_ok && bob_ok,
        marginals,
    }
}
