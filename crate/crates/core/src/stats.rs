//! Correlations of ordinary random variables: balanced samples, partial
//! correlation, angle bounds and a three-mass balance beam generator.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correlation::ChiTriple;
use crate::elliptope::{elliptope_value, ChiMatrix};
use crate::error::{Error, Result};

/// Values of one variable across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancedSample {
    values: Vec<f64>,
}

impl BalancedSample {
    /// Wraps values as they are; use [`mirror_samples`] to force balance.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConfig("sample is empty".into()));
        }
        Ok(BalancedSample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.values.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / self.len() as f64
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Appends the negated values: `[x1..xm] → [x1..xm, −x1..−xm]`.
pub fn mirror_samples(raw: &[f64]) -> Result<BalancedSample> {
    if raw.is_empty() {
        return Err(Error::InvalidConfig("cannot mirror an empty sample".into()));
    }
    let mut v = raw.to_vec();
    v.extend(raw.iter().map(|x| -x));
    Ok(BalancedSample { values: v })
}

/// Pearson correlation with population normalization. For balanced samples
/// the means vanish and this is `⟨xy⟩/(σ_x σ_y)`, the cosine of the angle
/// between the sample vectors.
pub fn pearson_chi(x: &BalancedSample, y: &BalancedSample) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidConfig("need at least two values".into()));
    }
    let (mx, my) = (x.mean(), y.mean());
    let n = x.len() as f64;
    let cov = x.values.iter().zip(&y.values).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
    let (sx, sy) = (x.std_dev(), y.std_dev());
    if sx <= 1e-300 || sy <= 1e-300 {
        return Err(Error::ZeroVariance);
    }
    Ok((cov / (sx * sy)).clamp(-1.0, 1.0))
}

/// Correlation matrix of any number of equally long samples.
pub fn correlation_matrix(samples: &[&BalancedSample]) -> Result<ChiMatrix> {
    let n = samples.len();
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..i {
            let r = pearson_chi(samples[i], samples[j])?;
            m[(i, j)] = r;
            m[(j, i)] = r;
        }
    }
    ChiMatrix::new(m)
}

/// Correlations `(r_ab, r_ac, r_bc)` of three samples.
pub fn chi_triple_of_samples(a: &BalancedSample, b: &BalancedSample, c: &BalancedSample) -> Result<ChiTriple> {
    ChiTriple::new(pearson_chi(a, b)?, pearson_chi(a, c)?, pearson_chi(b, c)?)
}

/// Correlation of `a` and `b` with `c` held fixed.
pub fn partial_correlation(chi: &ChiTriple) -> Result<f64> {
    let den = ((1.0 - chi.ac * chi.ac) * (1.0 - chi.bc * chi.bc)).sqrt();
    if den <= 1e-15 {
        return Err(Error::Collinear);
    }
    Ok((chi.ab - chi.ac * chi.bc) / den)
}

/// `(χ_ab − χ_ac χ_bc)² ≤ (1 − χ_ac²)(1 − χ_bc²)`.
pub fn yule_holds(chi: &ChiTriple) -> bool {
    let lhs = (chi.ab - chi.ac * chi.bc).powi(2);
    let rhs = (1.0 - chi.ac * chi.ac) * (1.0 - chi.bc * chi.bc);
    lhs <= rhs
}

/// Allowed range for the angle between `x` and `y` given their angles to `z`.
pub fn definetti_angle_bounds(alpha_xz: f64, alpha_yz: f64) -> Result<(f64, f64)> {
    for a in [alpha_xz, alpha_yz] {
        if !(0.0..=PI).contains(&a) {
            return Err(Error::AngleOutOfRange(a));
        }
    }
    let lo = (alpha_xz - alpha_yz).abs();
    let hi = (alpha_xz + alpha_yz).min(2.0 * PI - alpha_xz - alpha_yz);
    Ok((lo, hi))
}

fn centered(x: &BalancedSample) -> Vec<f64> {
    let mu = x.mean();
    x.values.iter().map(|v| v - mu).collect()
}

/// `cos θ_ab − (cos θ_ac cos θ_bc + sin θ_ac sin θ_bc cos θ⊥)`, where `θ⊥` is
/// the angle between the parts of `a` and `b` orthogonal to `c`. Vanishes up
/// to rounding for any three non-degenerate samples.
pub fn law_of_cosines_residual(a: &BalancedSample, b: &BalancedSample, c: &BalancedSample) -> Result<f64> {
    let chi = chi_triple_of_samples(a, b, c)?;
    let (va, vb, vc) = (centered(a), centered(b), centered(c));
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let cc = dot(&vc, &vc);
    let perp = |u: &[f64]| {
        let k = dot(u, &vc) / cc;
        u.iter().zip(&vc).map(|(x, z)| x - k * z).collect::<Vec<_>>()
    };
    let (pa, pb) = (perp(&va), perp(&vb));
    let (na, nb) = (dot(&pa, &pa).sqrt(), dot(&pb, &pb).sqrt());
    if na <= 1e-300 || nb <= 1e-300 {
        return Err(Error::Collinear);
    }
    let cos_perp = dot(&pa, &pb) / (na * nb);
    let sin = |x: f64| (1.0 - x * x).max(0.0).sqrt();
    Ok(chi.ab - (chi.ac * chi.bc + sin(chi.ac) * sin(chi.bc) * cos_perp))
}

/// Three masses on a balance beam, each displaced within `[−δ, δ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pub masses: [f64; 3],
    pub half_widths: [f64; 3],
    /// Net torque; zero for a balanced beam.
    #[serde(default)]
    pub torque: f64,
}

impl BeamConfig {
    pub fn equal(mass: f64, delta: f64) -> Self {
        BeamConfig {
            masses: [mass; 3],
            half_widths: [delta; 3],
            torque: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.masses.iter().chain(&self.half_widths).any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidConfig("masses and half-widths must be positive".into()));
        }
        let reach: f64 = self.masses.iter().zip(&self.half_widths).map(|(m, d)| m * d).sum();
        if !self.torque.is_finite() || self.torque.abs() >= reach {
            return Err(Error::InvalidConfig(format!(
                "torque {} leaves no room on the beam (limit {reach})",
                self.torque
            )));
        }
        Ok(())
    }

    /// Standard deviation of a uniform displacement on `[−δ, δ]`.
    pub fn uniform_std_dev(&self) -> [f64; 3] {
        self.half_widths.map(|d| d / 3f64.sqrt())
    }
}

/// Draws `(X_a, X_b)` uniformly, solves the balance condition for `X_c` and
/// rejects out-of-range values. For a balanced beam each accepted triple is
/// negated with probability 1/2.
pub fn beam_sample(cfg: &BeamConfig, n: usize, seed: u64) -> Result<Vec<[f64; 3]>> {
    cfg.validate()?;
    let [ma, mb, mc] = cfg.masses;
    let [da, db, dc] = cfg.half_widths;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let max_tries = 10_000usize.max(n.saturating_mul(10_000));
    let mut tries = 0usize;
    while out.len() < n {
        tries += 1;
        if tries > max_tries {
            return Err(Error::InvalidConfig("beam acceptance rate too low".into()));
        }
        let xa = rng.random_range(-da..=da);
        let xb = rng.random_range(-db..=db);
        let xc = (cfg.torque - ma * xa - mb * xb) / mc;
        if xc.abs() > dc {
            continue;
        }
        let t = if cfg.torque == 0.0 && rng.random::<bool>() {
            [-xa, -xb, -xc]
        } else {
            [xa, xb, xc]
        };
        out.push(t);
    }
    Ok(out)
}

/// Two-value beam: every displacement is `±δ/2`. The balance condition then
/// has no exact solution, so each run picks uniformly among the sign patterns
/// with the smallest net torque.
pub fn beam_sample_discrete(cfg: &BeamConfig, n: usize, seed: u64) -> Result<Vec<[f64; 3]>> {
    cfg.validate()?;
    let half = cfg.half_widths.map(|d| d / 2.0);
    let torque = |s: [f64; 3]| (0..3).map(|i| cfg.masses[i] * s[i] * half[i]).sum::<f64>() - cfg.torque;
    let patterns: Vec<[f64; 3]> = (0..8)
        .map(|k| [0, 1, 2].map(|i| if k >> i & 1 == 1 { -1.0 } else { 1.0 }))
        .collect();
    let best = patterns.iter().map(|p| torque(*p).abs()).fold(f64::INFINITY, f64::min);
    let keep: Vec<[f64; 3]> = patterns
        .into_iter()
        .filter(|p| torque(*p).abs() <= best + 1e-12 * (1.0 + best))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let p = keep[rng.random_range(0..keep.len())];
            [0, 1, 2].map(|i| p[i] * half[i])
        })
        .collect())
}

/// Splits triples into three columns.
pub fn columns(triples: &[[f64; 3]]) -> Result<[BalancedSample; 3]> {
    let col = |i: usize| BalancedSample::new(triples.iter().map(|t| t[i]).collect());
    Ok([col(0)?, col(1)?, col(2)?])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamReport {
    pub samples: usize,
    pub chi: ChiTriple,
    pub elliptope_value: f64,
    pub std_devs: [f64; 3],
}

pub fn beam_report(triples: &[[f64; 3]]) -> Result<BeamReport> {
    let [a, b, c] = columns(triples)?;
    let chi = chi_triple_of_samples(&a, &b, &c)?;
    Ok(BeamReport {
        samples: triples.len(),
        elliptope_value: elliptope_value(&chi),
        std_devs: [a.std_dev(), b.std_dev(), c.std_dev()],
        chi,
    })
}

pub fn write_triples_csv<W: Write>(triples: &[[f64; 3]], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x_a", "x_b", "x_c"])?;
    for t in triples {
        w.write_record(t.iter().map(|x| format!("{x:e}")))?;
    }
    w.flush()?;
    Ok(())
}
