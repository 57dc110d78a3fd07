//! Local hidden-variable models as raffles.
//!
//! A ticket lists an outcome for every setting on one side and the opposite
//! outcomes on the other; each run, one side goes to Alice and the other to
//! Bob at random. Outcomes are stored doubled so half-integer spins stay
//! integral.

use std::collections::BTreeMap;

use corrgeo_polytope::lp::{feasible_point, FarkasCertificate, Feasibility};
use corrgeo_polytope::rational::{self, frac, int, Rational};
use corrgeo_polytope::HPolytope;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::correlation::{Cell, ChiTriple, CorrelationArray};
use crate::error::{Error, Result};
use crate::spin::Spin;

/// Canonical ticket: the lexicographically larger of its two sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ticket {
    left: Vec<i32>,
}

impl Ticket {
    /// Builds a ticket from one side's doubled outcomes, canonicalizing.
    pub fn from_twice(spin: Spin, side: Vec<i32>) -> Result<Self> {
        for &t in &side {
            spin.index_of_twice(t)?;
        }
        let neg: Vec<i32> = side.iter().map(|t| -t).collect();
        Ok(Ticket {
            left: if side >= neg { side } else { neg },
        })
    }

    /// Builds a ticket from outcome values such as `[0.5, -0.5, 0.5]`.
    pub fn from_values(spin: Spin, side: &[f64]) -> Result<Self> {
        let twice = side
            .iter()
            .map(|m| {
                let t = spin.twice() as i32 - 2 * spin.index_of(*m)? as i32;
                Ok(t)
            })
            .collect::<Result<Vec<i32>>>()?;
        Ticket::from_twice(spin, twice)
    }

    pub fn left_twice(&self) -> &[i32] {
        &self.left
    }

    pub fn right_twice(&self) -> Vec<i32> {
        self.left.iter().map(|t| -t).collect()
    }

    pub fn left(&self) -> Vec<f64> {
        self.left.iter().map(|&t| t as f64 / 2.0).collect()
    }

    pub fn right(&self) -> Vec<f64> {
        self.left.iter().map(|&t| -t as f64 / 2.0).collect()
    }

    pub fn n_settings(&self) -> usize {
        self.left.len()
    }

    /// Exact `χ_xy = t_x t_y / σ²` with `σ² = s(s+1)/3`: Alice holds `t_x`
    /// and Bob `−t_y`, whichever side each receives.
    pub fn chi(&self, spin: Spin, x: usize, y: usize) -> Rational {
        let tw = spin.twice() as i64;
        frac(3 * self.left[x] as i64 * self.left[y] as i64, tw * (tw + 2))
    }
}

/// All canonical tickets for `n_settings` settings, in descending
/// lexicographic order of their stored side.
pub fn enumerate_tickets(n_settings: usize, spin: Spin) -> Vec<Ticket> {
    let outs = spin.twice_outcomes();
    let d = outs.len();
    let total = d.pow(n_settings as u32);
    let mut tickets = Vec::with_capacity(total / 2 + 1);
    for code in 0..total {
        let mut side = vec![0i32; n_settings];
        let mut c = code;
        for k in (0..n_settings).rev() {
            side[k] = outs[c % d];
            c /= d;
        }
        let neg: Vec<i32> = side.iter().map(|t| -t).collect();
        if side >= neg {
            tickets.push(Ticket { left: side });
        }
    }
    tickets
}

/// Expected number of canonical tickets: `dⁿ/2` for even `d`, `(dⁿ+1)/2`
/// for odd `d`.
pub fn ticket_count(n_settings: usize, spin: Spin) -> usize {
    let total = spin.dim().pow(n_settings as u32);
    if spin.dim().is_multiple_of(2) {
        total / 2
    } else {
        total.div_ceil(2)
    }
}

/// Default setting labels: `a, b, c` for three settings, `a, b, a', b'` for
/// four, `s1, s2, …` otherwise.
pub fn default_labels(n: usize) -> Vec<String> {
    match n {
        3 => vec!["a".into(), "b".into(), "c".into()],
        4 => vec!["a".into(), "b".into(), "a'".into(), "b'".into()],
        _ => (1..=n).map(|k| format!("s{k}")).collect(),
    }
}

/// Probability mixture of tickets with exact weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Raffle {
    spin: Spin,
    settings: Vec<String>,
    entries: BTreeMap<Ticket, Rational>,
}

impl Raffle {
    /// Duplicate tickets are merged; zero weights are dropped. Weights must be
    /// non-negative and sum to one exactly.
    pub fn new(spin: Spin, settings: Vec<String>, entries: Vec<(Ticket, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Ticket, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for (t, w) in entries {
            if t.n_settings() != settings.len() {
                return Err(Error::DimensionMismatch {
                    expected: settings.len(),
                    got: t.n_settings(),
                });
            }
            if w.is_negative() {
                return Err(Error::InvalidWeights(format!("negative weight {}", rational::format(&w))));
            }
            total += &w;
            if !w.is_zero() {
                *map.entry(t).or_insert_with(Rational::zero) += w;
            }
        }
        if total != int(1) {
            return Err(Error::InvalidWeights(format!("weights sum to {}", rational::format(&total))));
        }
        Ok(Raffle {
            spin,
            settings,
            entries: map,
        })
    }

    pub fn single(spin: Spin, settings: Vec<String>, ticket: Ticket) -> Result<Self> {
        Raffle::new(spin, settings, vec![(ticket, int(1))])
    }

    /// Uniform mixture of the given tickets.
    pub fn uniform(spin: Spin, settings: Vec<String>, tickets: &[Ticket]) -> Result<Self> {
        let n = tickets.len() as i64;
        Raffle::new(spin, settings, tickets.iter().map(|t| (t.clone(), frac(1, n))).collect())
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn settings(&self) -> &[String] {
        &self.settings
    }

    pub fn n_settings(&self) -> usize {
        self.settings.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Ticket, &Rational)> {
        self.entries.iter()
    }

    pub fn weight(&self, t: &Ticket) -> Rational {
        self.entries.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    /// Weights over `tickets` (zero for tickets not in the raffle).
    pub fn weight_vector(&self, tickets: &[Ticket]) -> Vec<Rational> {
        tickets.iter().map(|t| self.weight(t)).collect()
    }

    /// Exact `χ_xy` of the raffle: the weighted average of ticket values.
    pub fn chi_exact(&self, x: usize, y: usize) -> Rational {
        self.entries
            .iter()
            .fold(Rational::zero(), |acc, (t, w)| acc + w * t.chi(self.spin, x, y))
    }

    /// `χ_xy` for every pair `x < y`, in lexicographic pair order.
    pub fn chi_pairs(&self) -> Vec<((usize, usize), Rational)> {
        let n = self.n_settings();
        let mut out = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                out.push(((x, y), self.chi_exact(x, y)));
            }
        }
        out
    }

    /// Same-wing covariance `⟨X_x^A X_y^A⟩ = Σ w t_x t_y` (outcome units).
    pub fn same_wing_covariance(&self, x: usize, y: usize) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, (t, w)| {
            acc + w * frac(t.left[x] as i64 * t.left[y] as i64, 4)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&RaffleJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<RaffleJson>(s)?.try_into()
    }
}

/// `(χ_ab, χ_ac, χ_bc)` of a three-setting raffle.
pub fn raffle_chi(r: &Raffle) -> Result<ChiTriple> {
    if r.n_settings() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: r.n_settings(),
        });
    }
    let f = |x, y| rational::to_f64(&r.chi_exact(x, y));
    ChiTriple::new(f(0, 1), f(0, 2), f(1, 2))
}

#[derive(Serialize, Deserialize)]
struct TicketWeight {
    ticket: Vec<f64>,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct RaffleJson {
    spin: Spin,
    #[serde(default)]
    settings: Option<Vec<String>>,
    tickets: Vec<TicketWeight>,
}

impl From<&Raffle> for RaffleJson {
    fn from(r: &Raffle) -> Self {
        RaffleJson {
            spin: r.spin,
            settings: Some(r.settings.clone()),
            tickets: r
                .entries
                .iter()
                .map(|(t, w)| TicketWeight {
                    ticket: t.left(),
                    weight: rational::format(w),
                })
                .collect(),
        }
    }
}

impl TryFrom<RaffleJson> for Raffle {
    type Error = Error;
    fn try_from(j: RaffleJson) -> Result<Self> {
        let n = j.tickets.first().map_or(0, |t| t.ticket.len());
        let settings = j.settings.unwrap_or_else(|| default_labels(n));
        let entries = j
            .tickets
            .iter()
            .map(|tw| {
                let w = rational::parse(&tw.weight).map_err(|e| Error::InvalidWeights(e.to_string()))?;
                Ok((Ticket::from_values(j.spin, &tw.ticket)?, w))
            })
            .collect::<Result<Vec<_>>>()?;
        Raffle::new(j.spin, settings, entries)
    }
}

/// Coefficient of a ticket's weight in entry `(i, j)` of cell `(x, y)`:
/// half for each side assignment producing Alice outcome `i`, Bob outcome `j`.
fn ticket_cell_coefficient(t: &Ticket, spin: Spin, x: usize, y: usize, i: usize, j: usize) -> Rational {
    let tw = spin.twice() as i32;
    let mi = tw - 2 * i as i32;
    let mj = tw - 2 * j as i32;
    let (tx, ty) = (t.left[x], t.left[y]);
    let hits = (tx == mi && -ty == mj) as i64 + (-tx == mi && ty == mj) as i64;
    frac(hits, 2)
}

/// Correlation array generated by the raffle over its own settings.
pub fn raffle_correlation_array(r: &Raffle) -> Result<CorrelationArray> {
    let n = r.n_settings();
    let d = r.spin.dim();
    let mut cells = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut probs = vec![Rational::zero(); d * d];
            for (t, w) in &r.entries {
                let (tx, ty) = (t.left[x], t.left[y]);
                for (a, b) in [(tx, -ty), (-tx, ty)] {
                    let i = r.spin.index_of_twice(a)?;
                    let j = r.spin.index_of_twice(b)?;
                    probs[i * d + j] += w / int(2);
                }
            }
            cells.push(Cell::new(d, probs.iter().map(rational::to_f64).collect())?);
        }
    }
    CorrelationArray::square(r.settings.clone(), r.spin, cells)
}

/// Linear constraints on ticket weights defining admissible raffles.
#[derive(Debug, Clone)]
pub struct AdmissibilitySystem {
    pub spin: Spin,
    pub n_settings: usize,
    pub tickets: Vec<Ticket>,
    pub polytope: HPolytope,
}

impl AdmissibilitySystem {
    pub fn is_admissible(&self, r: &Raffle) -> bool {
        r.spin == self.spin
            && r.n_settings() == self.n_settings
            && r.entries.keys().all(|t| self.tickets.binary_search_by(|u| t.cmp(u)).is_ok())
            && self.polytope.contains(&r.weight_vector(&self.tickets))
    }

    /// Objective vector of `Σ_{x<y} χ_xy` over ticket weights.
    pub fn chi_sum_objective(&self) -> Vec<Rational> {
        self.tickets
            .iter()
            .map(|t| {
                let mut s = Rational::zero();
                for x in 0..self.n_settings {
                    for y in x + 1..self.n_settings {
                        s += t.chi(self.spin, x, y);
                    }
                }
                s
            })
            .collect()
    }

    /// Linear map taking weights to `χ_xy` for one pair.
    pub fn chi_map(&self, x: usize, y: usize) -> Vec<Rational> {
        self.tickets.iter().map(|t| t.chi(self.spin, x, y)).collect()
    }

    pub fn raffle_from_weights(&self, w: &[Rational]) -> Result<Raffle> {
        Raffle::new(
            self.spin,
            default_labels(self.n_settings),
            self.tickets.iter().cloned().zip(w.iter().cloned()).collect(),
        )
    }
}

/// `w ≥ 0`, `Σ w = 1`, uniform marginals at every setting and symmetric
/// off-diagonal cells.
///
/// Marginals are automatically symmetric under `m → −m`, so one equality per
/// non-negative outcome suffices. Centrosymmetry is built into every raffle,
/// so symmetric cells are persymmetric too.
pub fn admissibility_system(spin: Spin, n_settings: usize) -> AdmissibilitySystem {
    let tickets = enumerate_tickets(n_settings, spin);
    let k = tickets.len();
    let d = spin.dim();
    let mut h = HPolytope::simplex(k);
    let outs = spin.twice_outcomes();
    for x in 0..n_settings {
        for &m in outs.iter().filter(|&&m| m >= 0) {
            let row = tickets
                .iter()
                .map(|t| {
                    let hits = (t.left[x] == m) as i64 + (-t.left[x] == m) as i64;
                    frac(hits, 2)
                })
                .collect();
            h.add_equality(row, frac(1, d as i64)).expect("row length matches ticket count");
        }
    }
    for x in 0..n_settings {
        for y in x + 1..n_settings {
            for i in 0..d {
                for j in i + 1..d {
                    let row = tickets
                        .iter()
                        .map(|t| {
                            ticket_cell_coefficient(t, spin, x, y, i, j) - ticket_cell_coefficient(t, spin, x, y, j, i)
                        })
                        .collect();
                    h.add_equality(row, int(0)).expect("row length matches ticket count");
                }
            }
        }
    }
    AdmissibilitySystem {
        spin,
        n_settings,
        tickets,
        polytope: h,
    }
}

/// Outcome of fitting a raffle to a target array.
#[derive(Debug, Clone, PartialEq)]
pub enum RaffleFit {
    Feasible(Raffle),
    /// `certificate.y` has one entry per constraint row: first `Σ w = 1`,
    /// then every cell entry in row-major order over the target grid.
    Infeasible(FarkasCertificate),
}

impl RaffleFit {
    pub fn is_feasible(&self) -> bool {
        matches!(self, RaffleFit::Feasible(_))
    }
}

/// Exact feasibility problem "ticket weights reproduce every cell entry".
///
/// Tickets cover the union of both parties' settings (Alice's first, then
/// any of Bob's not already present). Float targets are rationalized to the
/// simplest fraction within 1e-12.
pub fn fit_raffle_to_array(target: &CorrelationArray) -> Result<RaffleFit> {
    let spin = target.spin();
    let mut labels: Vec<String> = target.alice_settings().to_vec();
    for b in target.bob_settings() {
        if !labels.contains(b) {
            labels.push(b.clone());
        }
    }
    let pos = |l: &String| labels.iter().position(|x| x == l).unwrap();
    let tickets = enumerate_tickets(labels.len(), spin);
    let d = spin.dim();
    let mut a: Vec<Vec<Rational>> = vec![vec![int(1); tickets.len()]];
    let mut b: Vec<Rational> = vec![int(1)];
    for (ia, xa) in target.alice_settings().iter().enumerate() {
        for (ib, yb) in target.bob_settings().iter().enumerate() {
            let (x, y) = (pos(xa), pos(yb));
            let cell = target.cell(ia, ib);
            for i in 0..d {
                for j in 0..d {
                    a.push(tickets.iter().map(|t| ticket_cell_coefficient(t, spin, x, y, i, j)).collect());
                    b.push(rational::from_f64_approx(cell.get(i, j), 1e-12));
                }
            }
        }
    }
    match feasible_point(&a, &b, tickets.len())? {
        Feasibility::Feasible(w) => Ok(RaffleFit::Feasible(Raffle::new(
            spin,
            labels,
            tickets.into_iter().zip(w).collect(),
        )?)),
        Feasibility::Infeasible(cert) => Ok(RaffleFit::Infeasible(cert)),
    }
}
