//! Walks the segment from the origin to the PR box and locates where it
//! leaves the local polytope and the quantum set.

use corrgeo::chsh::{t_family, t_family_thresholds};

fn main() -> corrgeo::Result<()> {
    for k in 0..=10 {
        let p = t_family(k as f64 / 10.0)?;
        println!(
            "t = {:.1}: CHSH {:+.2}, classical {:5}, quantum {:5}",
            p.t, p.chsh_value, p.classical, p.quantum
        );
    }
    let (c, q) = t_family_thresholds(1e-9);
    println!("classical boundary t = {c:.9}");
    println!("quantum boundary   t = {q:.9} (1/√2 = {:.9})", std::f64::consts::FRAC_1_SQRT_2);
    Ok(())
}
