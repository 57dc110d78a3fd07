//! Exact tetrahedron volume against a Monte-Carlo estimate of the elliptope.

use corrgeo::elliptope::volumes;

fn main() -> corrgeo::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2_000_000);
    let r = volumes(n, 2024)?;
    println!("tetrahedron: {} = {:.6}", r.tetrahedron, r.tetrahedron_f64);
    println!(
        "elliptope:   {:.5} ± {:.5} (π²/2 = {:.5})",
        r.elliptope.estimate, r.elliptope.stderr, r.exact_elliptope
    );
    println!("ratio:       {:.4}", r.ratio);
    Ok(())
}
