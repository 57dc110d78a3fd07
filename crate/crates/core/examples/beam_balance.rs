//! Three masses on a balanced beam: their displacement correlations sit on
//! the elliptope surface. Restricting displacements to two values pulls the
//! point inside.

use corrgeo::stats::{beam_report, beam_sample, beam_sample_discrete, BeamConfig};

fn main() -> corrgeo::Result<()> {
    for cfg in [BeamConfig::equal(1.0, 1.0), BeamConfig { masses: [1.0, 2.0, 1.5], half_widths: [1.0, 0.6, 0.8], torque: 0.0 }] {
        let r = beam_report(&beam_sample(&cfg, 100_000, 1)?)?;
        println!(
            "masses {:?}: χ = ({:+.3}, {:+.3}, {:+.3}), elliptope value {:+.4}",
            cfg.masses, r.chi.ab, r.chi.ac, r.chi.bc, r.elliptope_value
        );
    }
    let r = beam_report(&beam_sample_discrete(&BeamConfig::equal(1.0, 1.0), 100_000, 1)?)?;
    println!(
        "two-value beam: χ sum {:+.3}, elliptope value {:+.4}",
        r.chi.sum(),
        r.elliptope_value
    );
    Ok(())
}
