//! Simulates the three-setting experiment with a quantum source, a raffle
//! and a PR box, and prints Pr(opposite) and the χ sum for each.

use std::f64::consts::PI;

use corrgeo::raffle::{default_labels, Raffle, Ticket};
use corrgeo::sim::{estimate, simulate, SettingPolicy, Source};
use corrgeo::spin::{PairAngles, Spin};

fn main() -> corrgeo::Result<()> {
    let runs: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let t = 2.0 * PI / 3.0;
    let tickets = [[0.5, 0.5, -0.5], [0.5, -0.5, 0.5], [0.5, -0.5, -0.5]]
        .iter()
        .map(|v| Ticket::from_values(Spin::HALF, v))
        .collect::<corrgeo::Result<Vec<_>>>()?;
    let sources = [
        Source::quantum(Spin::HALF, &PairAngles::mermin(t, t, t))?,
        Source::Raffle(Raffle::uniform(Spin::HALF, default_labels(3), &tickets)?),
        Source::PrBox,
    ];
    for src in &sources {
        let rep = estimate(&simulate(src, runs, 42, SettingPolicy::Uniform)?)?;
        let sum = rep.chi_sum.expect("all pairs visited");
        println!(
            "{:>8}: Pr(opp) = {:.4} ± {:.4}, χ sum = {:+.4} ± {:.4}",
            src.name(),
            rep.pr_opposite.value,
            rep.pr_opposite.stderr,
            sum.value,
            sum.stderr
        );
        for v in &rep.verdicts {
            println!("          {} bound {:+.4}: {:?}", v.bound, v.limit, v.status);
        }
    }
    Ok(())
}
