//! Builds the anti-correlation polyhedron for a spin and prints its summary.
//!
//! ```text
//! cargo run --release --example anticorrelation_polyhedron -- 3/2
//! ```

use std::time::Instant;

use corrgeo::polyhedron::{anticorrelation_polyhedron, min_chi_sum, PipelineOptions};
use corrgeo::spin::Spin;

fn main() -> corrgeo::Result<()> {
    let spin: Spin = std::env::args().nth(1).unwrap_or_else(|| "1".into()).parse()?;
    let opts = PipelineOptions {
        deep: true,
        ..Default::default()
    };
    let t = Instant::now();
    let min = min_chi_sum(spin, opts)?;
    println!("spin {spin}: min chi sum = {} ({:.2?})", corrgeo_polytope::rational::format(&min.value), t.elapsed());
    let t = Instant::now();
    let p = anticorrelation_polyhedron(spin, opts)?;
    println!("{}", serde_json::to_string_pretty(&p.summary())?);
    println!("pipeline took {:.2?}", t.elapsed());
    Ok(())
}
