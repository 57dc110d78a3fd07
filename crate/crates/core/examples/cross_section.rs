//! Writes the slice of cube, tetrahedron and elliptope at fixed χ_bc as CSV.
//!
//! ```text
//! cargo run --example cross_section -- -0.5 > slice.csv
//! ```

use corrgeo::elliptope::cross_section;

fn main() -> corrgeo::Result<()> {
    let chi_bc: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let s = cross_section(chi_bc, 100)?;
    eprintln!(
        "tetrahedron slice has {} corners, elliptope outline {} points",
        s.tetrahedron.len(),
        s.elliptope.len()
    );
    s.write_csv(std::io::stdout())
}
