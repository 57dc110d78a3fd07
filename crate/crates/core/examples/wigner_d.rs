//! Prints the small Wigner d matrix for a spin and checks that it is orthogonal.

use corrgeo::spin::{wigner_d_matrix, Spin};

fn main() -> corrgeo::Result<()> {
    let mut args = std::env::args().skip(1);
    let spin: Spin = args.next().unwrap_or_else(|| "1".into()).parse()?;
    let beta: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(60.0_f64).to_radians();
    let d = wigner_d_matrix(spin, beta);
    println!("d^{spin}(beta = {:.4} rad), rows and columns by descending m:{d:.6}", beta);
    let err = (d.transpose() * &d - nalgebra::DMatrix::identity(d.nrows(), d.ncols())).abs().max();
    println!("max |dᵀd − 1| = {err:e}");
    Ok(())
}
