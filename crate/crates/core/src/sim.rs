//! Seeded simulation of the two-wing protocol and estimation from run logs.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::{chi_of_cell, Cell, CorrelationArray};
use crate::error::{Error, Result};
use crate::raffle::{default_labels, Raffle};
use crate::spin::{quantum_correlation_array, PairAngles, Spin};
use corrgeo_polytope::rational;

/// Where the outcomes come from.
#[derive(Debug, Clone)]
pub enum Source {
    /// Singlet measured along the given directions; cells are precomputed.
    Quantum(CorrelationArray),
    Raffle(Raffle),
    /// Three-setting nonlocal box: opposite outcomes for equal settings,
    /// equal outcomes otherwise.
    PrBox,
}

impl Source {
    pub fn quantum(spin: Spin, angles: &PairAngles) -> Result<Self> {
        let array = quantum_correlation_array(spin, angles)?;
        Ok(Source::Quantum(array))
    }

    pub fn spin(&self) -> Spin {
        match self {
            Source::Quantum(a) => a.spin(),
            Source::Raffle(r) => r.spin(),
            Source::PrBox => Spin::HALF,
        }
    }

    pub fn settings(&self) -> Vec<String> {
        match self {
            Source::Quantum(a) => a.alice_settings().to_vec(),
            Source::Raffle(r) => r.settings().to_vec(),
            Source::PrBox => default_labels(3),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Source::Quantum(_) => "quantum",
            Source::Raffle(_) => "raffle",
            Source::PrBox => "prbox",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingPolicy {
    Uniform,
    /// Always measure Alice's `x` against Bob's `y` (setting indices).
    FixedPair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub run: u64,
    pub set_a: usize,
    pub set_b: usize,
    /// Doubled outcomes, so spin-1/2 results are `±1`.
    pub out_a_twice: i32,
    pub out_b_twice: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub seed: u64,
    pub spin: Spin,
    pub settings: Vec<String>,
    pub records: Vec<RunRecord>,
}

impl RunLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Columns `run, setA, setB, outA, outB` with outcomes as decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["run", "setA", "setB", "outA", "outB"])?;
        for r in &self.records {
            w.write_record([
                r.run.to_string(),
                self.settings[r.set_a].clone(),
                self.settings[r.set_b].clone(),
                (r.out_a_twice as f64 / 2.0).to_string(),
                (r.out_b_twice as f64 / 2.0).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Cumulative distributions over the `d²` joint outcomes, one per cell.
fn cumulative(array: &CorrelationArray) -> Vec<Vec<f64>> {
    array
        .cells()
        .iter()
        .map(|c| {
            c.probs()
                .iter()
                .scan(0.0, |acc, p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect()
        })
        .collect()
}

fn pick(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

struct Sampler<'a> {
    source: &'a Source,
    spin: Spin,
    n: usize,
    cdfs: Vec<Vec<f64>>,
    tickets: Vec<(&'a [i32], f64)>,
}

impl<'a> Sampler<'a> {
    fn new(source: &'a Source) -> Self {
        let cdfs = match source {
            Source::Quantum(a) => cumulative(a),
            _ => Vec::new(),
        };
        let tickets = match source {
            Source::Raffle(r) => {
                let mut acc = 0.0;
                r.entries()
                    .map(|(t, w)| {
                        acc += rational::to_f64(w);
                        (t.left_twice(), acc)
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        Sampler {
            source,
            spin: source.spin(),
            n: source.settings().len(),
            cdfs,
            tickets,
        }
    }

    fn outcomes(&self, rng: &mut ChaCha8Rng, x: usize, y: usize) -> (i32, i32) {
        match self.source {
            Source::Quantum(_) => {
                let d = self.spin.dim();
                let k = pick(&self.cdfs[x * self.n + y], rng.random::<f64>());
                let tw = self.spin.twice() as i32;
                (tw - 2 * (k / d) as i32, tw - 2 * (k % d) as i32)
            }
            Source::Raffle(_) => {
                let u = rng.random::<f64>();
                let i = self.tickets.iter().position(|(_, c)| u < *c).unwrap_or(self.tickets.len() - 1);
                let side = self.tickets[i].0;
                let flip = if rng.random::<bool>() { 1 } else { -1 };
                (flip * side[x], -flip * side[y])
            }
            Source::PrBox => {
                let a = if rng.random::<bool>() { 1 } else { -1 };
                (a, if x == y { -a } else { a })
            }
        }
    }
}

/// Runs the protocol `n_runs` times. Run `i` draws from a generator keyed by
/// `(seed, i)`, so logs do not depend on thread scheduling.
pub fn simulate(source: &Source, n_runs: u64, seed: u64, policy: SettingPolicy) -> Result<RunLog> {
    if n_runs == 0 {
        return Err(Error::InvalidConfig("need at least one run".into()));
    }
    let settings = source.settings();
    let n = settings.len();
    if let SettingPolicy::FixedPair(x, y) = policy {
        if x >= n || y >= n {
            return Err(Error::InvalidConfig(format!(
                "fixed pair ({x}, {y}) out of range for {n} settings"
            )));
        }
    }
    let sampler = Sampler::new(source);
    let records = (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(run);
            let (x, y) = match policy {
                SettingPolicy::Uniform => (rng.random_range(0..n), rng.random_range(0..n)),
                SettingPolicy::FixedPair(x, y) => (x, y),
            };
            let (a, b) = sampler.outcomes(&mut rng, x, y);
            RunRecord {
                run,
                set_a: x,
                set_b: y,
                out_a_twice: a,
                out_b_twice: b,
            }
        })
        .collect();
    Ok(RunLog {
        seed,
        spin: source.spin(),
        settings,
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairChi {
    pub x: String,
    pub y: String,
    /// `None` when no run measured this pair or a marginal is constant.
    pub chi: Option<Estimate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Respects,
    Saturates,
    Violates,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub bound: &'static str,
    pub limit: f64,
    pub estimate: f64,
    /// `None` when the standard error vanishes.
    pub z: Option<f64>,
    pub status: Status,
}

/// Lower bound `limit` compared with an estimate at 3σ.
fn verdict(bound: &'static str, limit: f64, e: &Estimate) -> Verdict {
    let z = (e.stderr > 0.0).then(|| (e.value - limit) / e.stderr);
    let status = match z {
        Some(z) if z < -3.0 => Status::Violates,
        Some(z) if z <= 3.0 => Status::Saturates,
        Some(_) => Status::Respects,
        None if e.value < limit - 1e-12 => Status::Violates,
        None if e.value <= limit + 1e-12 => Status::Saturates,
        None => Status::Respects,
    };
    Verdict {
        bound,
        limit,
        estimate: e.value,
        z,
        status,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub runs: u64,
    /// Runs per cell, row-major over settings.
    pub counts: Vec<u64>,
    /// Relative frequencies; `None` for unvisited cells.
    pub cells: Vec<Option<Cell>>,
    pub chi: Vec<PairChi>,
    pub chi_sum: Option<Estimate>,
    pub pr_opposite: Estimate,
    pub verdicts: Vec<Verdict>,
}

impl EstimateReport {
    /// Empirical array when every cell was visited.
    pub fn array(&self, log: &RunLog) -> Option<CorrelationArray> {
        let cells: Option<Vec<Cell>> = self.cells.iter().cloned().collect();
        CorrelationArray::square(log.settings.clone(), log.spin, cells?).ok()
    }

    pub fn chi_between(&self, x: &str, y: &str) -> Option<Estimate> {
        self.chi
            .iter()
            .find(|p| (p.x == x && p.y == y) || (p.x == y && p.y == x))
            .and_then(|p| p.chi)
    }

    pub fn to_json(&self, log: &RunLog) -> Result<String> {
        let cells: serde_json::Map<String, serde_json::Value> = self
            .cells
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let n = log.settings.len();
                let key = format!("{},{}", log.settings[k / n], log.settings[k % n]);
                let v = match c {
                    Some(c) => serde_json::to_value(c.rows()),
                    None => Ok(serde_json::Value::Null),
                };
                v.map(|v| (key, v))
            })
            .collect::<std::result::Result<_, _>>()?;
        let v = serde_json::json!({
            "runs": self.runs,
            "seed": log.seed,
            "spin": log.spin.to_string(),
            "settings": log.settings,
            "counts": self.counts,
            "cells": cells,
            "chi": self.chi,
            "chi_sum": self.chi_sum,
            "pr_opposite": self.pr_opposite,
            "verdicts": self.verdicts,
        });
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// Pools runs of `(x, y)` and `(y, x)` into one χ estimate. The standard
/// error treats the marginal spreads as known.
fn pooled_chi(log: &RunLog, x: usize, y: usize) -> Option<Estimate> {
    let d = log.spin.dim();
    let tw = log.spin.twice() as i32;
    let idx = |t: i32| ((tw - t) / 2) as usize;
    let mut counts = vec![0u64; d * d];
    let mut n = 0u64;
    for r in &log.records {
        let (a, b) = if (r.set_a, r.set_b) == (x, y) {
            (r.out_a_twice, r.out_b_twice)
        } else if (r.set_a, r.set_b) == (y, x) {
            (r.out_b_twice, r.out_a_twice)
        } else {
            continue;
        };
        counts[idx(a) * d + idx(b)] += 1;
        n += 1;
    }
    if n == 0 {
        return None;
    }
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let cell = Cell::new(d, probs).ok()?;
    let chi = chi_of_cell(&cell, log.spin).ok()?;
    let m = log.spin.outcomes();
    let (ra, cb) = (cell.row_marginal(), cell.col_marginal());
    let sd = |p: &[f64]| {
        let mu: f64 = p.iter().zip(&m).map(|(pi, mi)| pi * mi).sum();
        p.iter().zip(&m).map(|(pi, mi)| pi * (mi - mu).powi(2)).sum::<f64>().sqrt()
    };
    let (mut e1, mut e2) = (0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            let v = m[i] * m[j];
            e1 += cell.get(i, j) * v;
            e2 += cell.get(i, j) * v * v;
        }
    }
    let sd_prod = (e2 - e1 * e1).max(0.0).sqrt();
    Some(Estimate {
        value: chi,
        stderr: sd_prod / (sd(&ra) * sd(&cb) * (n as f64).sqrt()),
        n,
    })
}

pub fn estimate(log: &RunLog) -> Result<EstimateReport> {
    if log.is_empty() {
        return Err(Error::InvalidConfig("run log is empty".into()));
    }
    let n = log.settings.len();
    let d = log.spin.dim();
    let tw = log.spin.twice() as i32;
    let mut counts = vec![0u64; n * n];
    let mut joint = vec![vec![0u64; d * d]; n * n];
    let mut opposite = 0u64;
    for r in &log.records {
        let k = r.set_a * n + r.set_b;
        counts[k] += 1;
        joint[k][((tw - r.out_a_twice) / 2) as usize * d + ((tw - r.out_b_twice) / 2) as usize] += 1;
        if r.out_b_twice == -r.out_a_twice {
            opposite += 1;
        }
    }
    let cells = joint
        .iter()
        .zip(&counts)
        .map(|(j, &c)| (c > 0).then(|| Cell::new(d, j.iter().map(|&v| v as f64 / c as f64).collect())).transpose())
        .collect::<Result<Vec<_>>>()?;
    let mut chi = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            chi.push(PairChi {
                x: log.settings[x].clone(),
                y: log.settings[y].clone(),
                chi: pooled_chi(log, x, y),
            });
        }
    }
    let runs = log.len() as u64;
    let p = opposite as f64 / runs as f64;
    let pr_opposite = Estimate {
        value: p,
        stderr: (p * (1.0 - p) / runs as f64).sqrt(),
        n: runs,
    };
    let chi_sum = if n == 3 {
        chi.iter()
            .map(|c| c.chi)
            .collect::<Option<Vec<_>>>()
            .map(|es| Estimate {
                value: es.iter().map(|e| e.value).sum(),
                stderr: es.iter().map(|e| e.stderr * e.stderr).sum::<f64>().sqrt(),
                n: es.iter().map(|e| e.n).sum(),
            })
    } else {
        None
    };
    let mut verdicts = Vec::new();
    if let Some(s) = &chi_sum {
        verdicts.push(verdict("bell", -1.0, s));
        verdicts.push(verdict("tsirelson", -1.5, s));
    }
    if n == 3 && log.spin == Spin::HALF && counts.iter().all(|&c| c > 0) {
        verdicts.push(verdict("mermin", 5.0 / 9.0, &pr_opposite));
    }
    Ok(EstimateReport {
        runs,
        counts,
        cells,
        chi,
        chi_sum,
        pr_opposite,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raffle::Ticket;
    use std::f64::consts::PI;

    fn mermin() -> Source {
        let t = 2.0 * PI / 3.0;
        Source::quantum(Spin::HALF, &PairAngles::mermin(t, t, t)).unwrap()
    }

    #[test]
    fn deterministic() {
        let a = simulate(&mermin(), 5000, 11, SettingPolicy::Uniform).unwrap();
        let b = simulate(&mermin(), 5000, 11, SettingPolicy::Uniform).unwrap();
        assert_eq!(a, b);
        let c = simulate(&mermin(), 5000, 12, SettingPolicy::Uniform).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn same_setting_is_opposite() {
        let t = Ticket::from_values(Spin::HALF, &[0.5, 0.5, -0.5]).unwrap();
        let r = Raffle::single(Spin::HALF, default_labels(3), t).unwrap();
        for src in [mermin(), Source::Raffle(r), Source::PrBox] {
            for x in 0..3 {
                let log = simulate(&src, 500, 1, SettingPolicy::FixedPair(x, x)).unwrap();
                assert!(log.records.iter().all(|r| r.out_a_twice == -r.out_b_twice));
            }
        }
    }

    #[test]
    fn pr_box_sum() {
        let log = simulate(&Source::PrBox, 20_000, 5, SettingPolicy::Uniform).unwrap();
        let rep = estimate(&log).unwrap();
        let s = rep.chi_sum.unwrap();
        assert!((s.value + 3.0).abs() < 1e-12);
        assert_eq!(s.stderr, 0.0);
        assert!(rep.verdicts.iter().all(|v| v.status == Status::Violates));
        assert!(rep.verdicts[..2].iter().all(|v| v.z.is_none()));
        assert!((rep.pr_opposite.value - 1.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn policy_and_empty_cells() {
        assert!(simulate(&Source::PrBox, 10, 0, SettingPolicy::FixedPair(3, 0)).is_err());
        assert!(simulate(&Source::PrBox, 0, 0, SettingPolicy::Uniform).is_err());
        let log = simulate(&Source::PrBox, 100, 0, SettingPolicy::FixedPair(0, 1)).unwrap();
        let rep = estimate(&log).unwrap();
        assert!(rep.cells[2].is_none());
        assert!(rep.chi_between("a", "c").is_none());
        assert!(rep.chi_sum.is_none());
        assert!(rep.array(&log).is_none());
        assert!(rep.to_json(&log).unwrap().contains("null"));
    }

    #[test]
    fn csv_shape() {
        let log = simulate(&mermin(), 3, 2, SettingPolicy::Uniform).unwrap();
        let mut buf = Vec::new();
        log.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("run,setA,setB,outA,outB\n0,"));
        assert_eq!(s.lines().count(), 4);
    }
}
