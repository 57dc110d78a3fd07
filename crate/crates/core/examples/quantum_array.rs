//! Singlet correlation array for three settings at given angles (degrees).
//!
//! ```text
//! cargo run --example quantum_array -- 1 120 120 120
//! ```

use corrgeo::spin::{quantum_correlation_array, PairAngles, Spin};

fn main() -> corrgeo::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let spin: Spin = args.first().map(String::as_str).unwrap_or("1/2").parse()?;
    let deg = |i: usize| args.get(i).and_then(|s| s.parse::<f64>().ok()).unwrap_or(120.0).to_radians();
    let array = quantum_correlation_array(spin, &PairAngles::mermin(deg(1), deg(2), deg(3)))?;
    println!("{}", array.to_json()?);
    let chi = array.chi_triple()?;
    println!("chi = ({:.6}, {:.6}, {:.6}), sum {:.6}", chi.ab, chi.ac, chi.bc, chi.sum());
    Ok(())
}
