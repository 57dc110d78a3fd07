//! From the admissible-raffle polytope to the anti-correlation polyhedron:
//! vertex enumeration over ticket weights, projection to `(χ_ab, χ_ac, χ_bc)`
//! and an exact 3D hull.

use std::time::Duration;

use corrgeo_polytope::dd::{vertex_enumerate_with, DdOptions};
use corrgeo_polytope::lp::lp_minimize;
use corrgeo_polytope::rational::{self, dot, Rational};
use corrgeo_polytope::{convex_hull_3d, Hull3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::raffle::{admissibility_system, Raffle};
use crate::spin::Spin;

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    /// Allow spins above 3/2.
    pub deep: bool,
    /// Wall-time budget for vertex enumeration.
    pub budget: Option<Duration>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            deep: false,
            budget: Some(Duration::from_secs(600)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AntiCorrelationPolyhedron {
    pub spin: Spin,
    pub n_tickets: usize,
    /// Number of vertices of the admissible-raffle polytope.
    pub n_weight_vertices: usize,
    pub hull: Hull3,
}

impl AntiCorrelationPolyhedron {
    pub fn volume(&self) -> Rational {
        self.hull.volume()
    }

    pub fn summary(&self) -> PolyhedronSummary {
        PolyhedronSummary {
            spin: self.spin.to_string(),
            tickets: self.n_tickets,
            weight_vertices: self.n_weight_vertices,
            vertices: self.hull.vertices.len(),
            facets: self.hull.facets.len(),
            volume: rational::format(&self.volume()),
            volume_f64: rational::to_f64(&self.volume()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyhedronSummary {
    pub spin: String,
    pub tickets: usize,
    pub weight_vertices: usize,
    pub vertices: usize,
    pub facets: usize,
    pub volume: String,
    pub volume_f64: f64,
}

fn check_gate(spin: Spin, opts: &PipelineOptions) -> Result<()> {
    if spin.twice() > 3 && !opts.deep {
        return Err(Error::DeepRequired(spin.to_string()));
    }
    Ok(())
}

/// Admissible raffles → vertices → `χ` projection → hull.
pub fn anticorrelation_polyhedron(spin: Spin, opts: PipelineOptions) -> Result<AntiCorrelationPolyhedron> {
    check_gate(spin, &opts)?;
    let sys = admissibility_system(spin, 3);
    let v = vertex_enumerate_with(&sys.polytope, DdOptions { budget: opts.budget })?;
    let maps = [sys.chi_map(0, 1), sys.chi_map(0, 2), sys.chi_map(1, 2)];
    let points: Vec<Vec<Rational>> = v
        .vertices
        .iter()
        .map(|w| maps.iter().map(|m| dot(m, w)).collect())
        .collect();
    let hull = convex_hull_3d(&points)?;
    Ok(AntiCorrelationPolyhedron {
        spin,
        n_tickets: sys.tickets.len(),
        n_weight_vertices: v.len(),
        hull,
    })
}

#[derive(Debug, Clone)]
pub struct MinChiSum {
    pub value: Rational,
    /// Vertex of the admissible polytope attaining the minimum.
    pub raffle: Raffle,
}

/// Exact minimum of `χ_ab + χ_ac + χ_bc` over admissible raffles.
pub fn min_chi_sum(spin: Spin, opts: PipelineOptions) -> Result<MinChiSum> {
    check_gate(spin, &opts)?;
    let sys = admissibility_system(spin, 3);
    let sol = lp_minimize(&sys.chi_sum_objective(), &sys.polytope)?;
    Ok(MinChiSum {
        value: sol.value,
        raffle: sys.raffle_from_weights(&sol.witness)?,
    })
}

/// Closed-form lower bound on the χ sum over admissible raffles: `−1` for
/// spin 1/2, `−3/2` for integer spin and `1/(8σ²) − 3/2` for half-integer
/// spin, where `σ² = s(s+1)/3`.
pub fn chi_sum_bound(spin: Spin) -> Rational {
    if spin == Spin::HALF {
        return rational::int(-1);
    }
    if spin.is_half_integer() {
        rational::frac(1, 8) / spin.uniform_variance_exact() - rational::frac(3, 2)
    } else {
        rational::frac(-3, 2)
    }
}
