//! Command-line front end. [`run`] parses arguments, writes the payload to
//! `out` and returns the process exit code: 0 on success, 2 on invalid input,
//! 3 when a requested check fails (point outside a body, infeasible fit).

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use corrgeo_polytope::rational::{self, Rational};
use serde_json::{json, Value};

use crate::chsh::{
    chsh_value, elliptope4_completion, enumerate_chsh_tickets, landau_check, t_family, t_family_thresholds,
    ChiQuadruple,
};
use crate::correlation::{pr_opposite, ChiTriple, CorrelationArray};
use crate::elliptope::{cross_section, elliptope_value, tetrahedron_contains, volumes, SURFACE_TOL};
use crate::error::{Error, Result};
use crate::polyhedron::{anticorrelation_polyhedron, min_chi_sum, PipelineOptions};
use crate::raffle::{admissibility_system, fit_raffle_to_array, raffle_correlation_array, Raffle, RaffleFit};
use crate::sim::{estimate, simulate, SettingPolicy, Source};
use crate::spin::{PairAngles, Spin};

/// Environment variable that takes precedence over `--seed`.
pub const SEED_ENV: &str = "CORRGEO_SEED";

const EXIT_OK: i32 = 0;
const EXIT_INVALID: i32 = 2;
const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "corrgeo", version, about = "Correlation arrays, elliptopes and raffle polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singlet correlation array for three settings.
    QuantumArray {
        #[arg(long)]
        spin: Spin,
        /// Angles φ_ab,φ_ac,φ_bc in degrees.
        #[arg(long, value_parser = parse_triple)]
        angles: [f64; 3],
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Inspect a raffle given as JSON.
    Raffle {
        #[arg(long)]
        spec: PathBuf,
        action: RaffleAction,
    },
    /// Fit a raffle to a correlation array given as JSON.
    Fit {
        #[arg(long)]
        array: PathBuf,
    },
    /// Test a point (χ_ab, χ_ac, χ_bc).
    Check {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        chi: [f64; 3],
        action: CheckAction,
    },
    /// Anti-correlation polyhedron of admissible raffles.
    Polytope {
        #[arg(long)]
        spin: Spin,
        /// Permit spins above 3/2.
        #[arg(long)]
        deep: bool,
        action: PolytopeAction,
    },
    /// Four-setting CHSH tools.
    Chsh {
        action: ChshAction,
        /// χ_aa',χ_ab',χ_ba',χ_bb'.
        #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
        chi4: Option<[f64; 4]>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Simulate runs of the experiment and report estimates as JSON.
    Simulate {
        #[arg(long)]
        source: SourceKind,
        #[arg(long, default_value_t = 100_000)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Setting labels X,Y measured on every run.
        #[arg(long)]
        fixed_pair: Option<String>,
        #[arg(long, default_value = "1/2")]
        spin: Spin,
        /// Angles in degrees for the quantum source.
        #[arg(long, value_parser = parse_triple, default_value = "120,120,120")]
        angles: [f64; 3],
        /// Raffle JSON for the raffle source.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Write the run log as CSV to this path.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Tetrahedron and elliptope volumes.
    Volume {
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-section at fixed χ_bc, as CSV.
    Slice {
        #[arg(long, allow_hyphen_values = true)]
        chi_bc: f64,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RaffleAction {
    Array,
    Chi,
    Admissible,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CheckAction {
    Elliptope,
    Tetrahedron,
    Propp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PolytopeAction {
    Vertices,
    Facets,
    Volume,
    MinSum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChshAction {
    Tickets,
    Value,
    Landau,
    Shadow,
    TFamily,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SourceKind {
    Quantum,
    Raffle,
    Prbox,
}

fn parse_list<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("{p:?} is not a number")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated values, got {}", v.len()))
}

fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    parse_list::<3>(s)
}

fn parse_quad(s: &str) -> std::result::Result<[f64; 4], String> {
    parse_list::<4>(s)
}

fn exact(r: &Rational) -> Value {
    json!({ "exact": rational::format(r), "value": rational::to_f64(r) })
}

fn exact_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(exact).collect())
}

fn seed_override(seed: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(seed),
    }
}

fn degrees(a: [f64; 3]) -> PairAngles {
    let [ab, ac, bc] = a.map(f64::to_radians);
    PairAngles::mermin(ab, ac, bc)
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn quad(chi4: Option<[f64; 4]>) -> Result<ChiQuadruple> {
    let [aa, ab, ba, bb] = chi4.ok_or_else(|| Error::InvalidConfig("--chi4 is required for this action".into()))?;
    ChiQuadruple::new(aa, ab, ba, bb)
}

fn print_array<W: Write>(a: &CorrelationArray, out: &mut W) -> Result<()> {
    for (i, x) in a.alice_settings().iter().enumerate() {
        for (j, y) in a.bob_settings().iter().enumerate() {
            writeln!(out, "{x},{y}:")?;
            for row in a.cell(i, j).rows() {
                let cols: Vec<String> = row.iter().map(|p| format!("{p:.6}")).collect();
                writeln!(out, "  {}", cols.join(" "))?;
            }
        }
    }
    Ok(())
}

fn execute<W: Write>(cmd: Command, out: &mut W) -> Result<i32> {
    match cmd {
        Command::QuantumArray { spin, angles, json, csv } => {
            let a = crate::spin::quantum_correlation_array(spin, &degrees(angles))?;
            if json {
                writeln!(out, "{}", a.to_json()?)?;
            } else if csv {
                a.write_csv(&mut *out)?;
            } else {
                print_array(&a, out)?;
            }
        }
        Command::Raffle { spec, action } => {
            let r = Raffle::from_json(&read(&spec)?)?;
            match action {
                RaffleAction::Array => writeln!(out, "{}", raffle_correlation_array(&r)?.to_json()?)?,
                RaffleAction::Chi => {
                    let s = r.settings();
                    let pairs: serde_json::Map<String, Value> = r
                        .chi_pairs()
                        .iter()
                        .map(|((x, y), c)| (format!("{},{}", s[*x], s[*y]), exact(c)))
                        .collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&pairs)?)?;
                }
                RaffleAction::Admissible => {
                    let ok = admissibility_system(r.spin(), r.n_settings()).is_admissible(&r);
                    writeln!(out, "{}", if ok { "admissible" } else { "not admissible" })?;
                    if !ok {
                        return Ok(EXIT_CHECK_FAILED);
                    }
                }
            }
        }
        Command::Fit { array } => {
            let a = CorrelationArray::from_json(&read(&array)?)?;
            match fit_raffle_to_array(&a)? {
                RaffleFit::Feasible(r) => writeln!(out, "{}", r.to_json()?)?,
                RaffleFit::Infeasible(cert) => {
                    let v = json!({ "feasible": false, "certificate": exact_vec(&cert.y) });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
                    return Ok(EXIT_CHECK_FAILED);
                }
            }
        }
        Command::Check { chi, action } => {
            let c = ChiTriple::new(chi[0], chi[1], chi[2])?;
            match action {
                CheckAction::Elliptope => {
                    let v = elliptope_value(&c);
                    let inside = v >= -SURFACE_TOL && c.to_array().iter().all(|x| x.abs() <= 1.0);
                    let label = if v.abs() <= SURFACE_TOL {
                        "on-surface"
                    } else if inside {
                        "inside"
                    } else {
                        "outside"
                    };
                    writeln!(out, "{label} (value {v:.6})")?;
                    if !inside {
                        return Ok(EXIT_CHECK_FAILED);
                    }
                }
                CheckAction::Tetrahedron => {
                    let inside = tetrahedron_contains(&c);
                    writeln!(out, "{}", if inside { "inside" } else { "outside" })?;
                    if !inside {
                        return Ok(EXIT_CHECK_FAILED);
                    }
                }
                CheckAction::Propp => writeln!(out, "{}", pr_opposite(&c))?,
            }
        }
        Command::Polytope { spin, deep, action } => {
            let opts = PipelineOptions {
                deep,
                ..PipelineOptions::default()
            };
            match action {
                PolytopeAction::MinSum => writeln!(out, "{}", rational::format(&min_chi_sum(spin, opts)?.value))?,
                PolytopeAction::Volume => {
                    let p = anticorrelation_polyhedron(spin, opts)?;
                    writeln!(out, "{}", serde_json::to_string_pretty(&p.summary())?)?;
                }
                PolytopeAction::Vertices => {
                    let p = anticorrelation_polyhedron(spin, opts)?;
                    let v: Vec<Value> = p.hull.vertices.iter().map(|x| exact_vec(x)).collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
                }
                PolytopeAction::Facets => {
                    let p = anticorrelation_polyhedron(spin, opts)?;
                    let v: Vec<Value> = p
                        .hull
                        .facets
                        .iter()
                        .map(|f| json!({ "normal": exact_vec(&f.normal), "offset": exact(&f.offset) }))
                        .collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
                }
            }
        }
        Command::Chsh { action, chi4, t } => match action {
            ChshAction::Tickets => {
                let v: Vec<Value> = enumerate_chsh_tickets()
                    .iter()
                    .map(|r| json!({ "ticket": r.ticket.left(), "chi": r.chi, "chsh": r.chsh }))
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            }
            ChshAction::Value => writeln!(out, "{}", chsh_value(&quad(chi4)?))?,
            ChshAction::Landau => {
                let l = landau_check(&quad(chi4)?);
                writeln!(out, "{}", serde_json::to_string_pretty(&l)?)?;
                if !l.holds {
                    return Ok(EXIT_CHECK_FAILED);
                }
            }
            ChshAction::Shadow => {
                let c = elliptope4_completion(&quad(chi4)?);
                writeln!(out, "{}", serde_json::to_string_pretty(&c)?)?;
                if !c.feasible {
                    return Ok(EXIT_CHECK_FAILED);
                }
            }
            ChshAction::TFamily => match t {
                Some(t) => writeln!(out, "{}", serde_json::to_string_pretty(&t_family(t)?)?)?,
                None => {
                    let (c, q) = t_family_thresholds(1e-9);
                    let v = json!({ "classical_threshold": c, "quantum_threshold": q });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
                }
            },
        },
        Command::Simulate {
            source,
            runs,
            seed,
            fixed_pair,
            spin,
            angles,
            spec,
            log,
        } => {
            let seed = seed_override(seed)?;
            let src = match source {
                SourceKind::Quantum => Source::quantum(spin, &degrees(angles))?,
                SourceKind::Raffle => {
                    let path = spec.ok_or_else(|| Error::InvalidConfig("--spec is required for a raffle source".into()))?;
                    Source::Raffle(Raffle::from_json(&read(&path)?)?)
                }
                SourceKind::Prbox => Source::PrBox,
            };
            let policy = match fixed_pair {
                None => SettingPolicy::Uniform,
                Some(p) => {
                    let labels = src.settings();
                    let idx = |l: &str| {
                        labels
                            .iter()
                            .position(|x| x == l.trim())
                            .ok_or_else(|| Error::UnknownSetting(l.to_string()))
                    };
                    let (x, y) = p
                        .split_once(',')
                        .ok_or_else(|| Error::InvalidConfig(format!("--fixed-pair {p:?} must look like X,Y")))?;
                    SettingPolicy::FixedPair(idx(x)?, idx(y)?)
                }
            };
            let l = simulate(&src, runs, seed, policy)?;
            if let Some(path) = log {
                l.write_csv(std::fs::File::create(path)?)?;
            }
            writeln!(out, "{}", estimate(&l)?.to_json(&l)?)?;
        }
        Command::Volume { samples, seed } => {
            let r = volumes(samples, seed_override(seed)?)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
        }
        Command::Slice { chi_bc, resolution } => cross_section(chi_bc, resolution)?.write_csv(&mut *out)?,
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["corrgeo"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn tsirelson_point_on_surface() {
        let (code, out, _) = call(&["check", "--chi", "-0.5,-0.5,-0.5", "elliptope"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "on-surface (value 0.000000)");
        let (code, out, _) = call(&["check", "--chi", "-0.5,-0.5,-0.5", "tetrahedron"]);
        assert_eq!((code, out.trim()), (3, "outside"));
    }

    #[test]
    fn min_sum() {
        let (code, out, _) = call(&["polytope", "--spin", "0.5", "min-sum"]);
        assert_eq!((code, out.trim()), (0, "-1"));
        let (code, _, err) = call(&["polytope", "--spin", "2", "min-sum"]);
        assert_eq!(code, 2);
        assert!(err.contains("deep"));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(call(&["check", "--chi", "0.5,2,0", "elliptope"]).0, 2);
        assert_eq!(call(&["check", "--chi", "0.5,0", "elliptope"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["volume", "--bogus"]).0, 2);
        assert_eq!(call(&["quantum-array", "--spin", "0", "--angles", "1,2,3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn mermin_json() {
        let (code, out, _) = call(&["quantum-array", "--spin", "0.5", "--angles", "120,120,120", "--json"]);
        assert_eq!(code, 0);
        let a = CorrelationArray::from_json(&out).unwrap();
        assert!((a.cell(0, 1).get(0, 0) - 0.375).abs() < 1e-12);
    }

    #[test]
    fn chsh_actions() {
        assert_eq!(call(&["chsh", "shadow", "--chi4", "-1,-1,-1,1"]).0, 3);
        assert_eq!(call(&["chsh", "landau", "--chi4", "0.5,0.5,0.5,-0.5"]).0, 0);
        assert_eq!(call(&["chsh", "value"]).0, 2);
        let (_, out, _) = call(&["chsh", "tickets"]);
        assert_eq!(serde_json::from_str::<Vec<Value>>(&out).unwrap().len(), 8);
    }
}
