//! The eight local CHSH vertices and the optimal quantum configuration.

use std::f64::consts::FRAC_1_SQRT_2;

use corrgeo::chsh::{chsh_report, enumerate_chsh_tickets, ChiQuadruple};

fn main() -> corrgeo::Result<()> {
    println!("ticket (a, b, a', b') -> (χ_aa', χ_ab', χ_ba', χ_bb'), CHSH");
    for t in enumerate_chsh_tickets() {
        println!("  {:?} -> {:?}, {}", t.ticket.left(), t.chi, t.chsh);
    }
    let r = FRAC_1_SQRT_2;
    let report = chsh_report(&ChiQuadruple::new(r, r, r, -r)?);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
