//! Fits raffles to correlation arrays: a raffle-generated array is
//! reproduced, the 120° quantum array is refuted with a Farkas certificate.

use std::f64::consts::PI;

use corrgeo::raffle::{default_labels, fit_raffle_to_array, raffle_correlation_array, Raffle, RaffleFit, Ticket};
use corrgeo::spin::{quantum_correlation_array, PairAngles, Spin};
use corrgeo_polytope::rational::format;

fn report(name: &str, fit: &RaffleFit) {
    match fit {
        RaffleFit::Feasible(r) => {
            println!("{name}: feasible");
            for (t, w) in r.entries() {
                println!("  {:?} with weight {}", t.left(), format(w));
            }
        }
        RaffleFit::Infeasible(cert) => {
            let nz = cert.y.iter().filter(|y| **y != num_traits::Zero::zero()).count();
            println!("{name}: infeasible, certificate with {nz} nonzero multipliers");
        }
    }
}

fn main() -> corrgeo::Result<()> {
    let s = Spin::HALF;
    let tickets = [[0.5, 0.5, -0.5], [0.5, -0.5, 0.5], [0.5, -0.5, -0.5]]
        .iter()
        .map(|t| Ticket::from_values(s, t))
        .collect::<corrgeo::Result<Vec<_>>>()?;
    let raffle = Raffle::uniform(s, default_labels(3), &tickets)?;
    report("raffle array", &fit_raffle_to_array(&raffle_correlation_array(&raffle)?)?);

    let t = 2.0 * PI / 3.0;
    let quantum = quantum_correlation_array(s, &PairAngles::mermin(t, t, t))?;
    report("120° quantum array", &fit_raffle_to_array(&quantum)?);
    Ok(())
}
