//! Classifies a few anti-correlation triples against the tetrahedron and the
//! elliptope, and recovers unit vectors for a point inside the elliptope.

use corrgeo::correlation::ChiTriple;
use corrgeo::elliptope::{elliptope_contains, elliptope_value, gram_decompose, tetrahedron_contains, ChiMatrix};

fn main() -> corrgeo::Result<()> {
    let points = [
        ("ticket vertex", [1.0, 1.0, 1.0]),
        ("120 degrees", [-0.5, -0.5, -0.5]),
        ("classical corner", [-1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0]),
        ("outside", [-0.7, -0.7, -0.7]),
        ("inside both", [0.2, -0.1, 0.3]),
    ];
    for (name, [ab, ac, bc]) in points {
        let chi = ChiTriple::new(ab, ac, bc)?;
        println!(
            "{name:>16}: value {:+.6}, elliptope {}, tetrahedron {}",
            elliptope_value(&chi),
            elliptope_contains(&chi, 1e-12),
            tetrahedron_contains(&chi)
        );
    }
    let chi = ChiTriple::new(0.2, -0.1, 0.3)?;
    let l = gram_decompose(&ChiMatrix::from_triple(&chi))?;
    println!("unit vectors as columns:{l:.6}");
    println!("LᵀL reproduces the matrix:{:.6}", l.transpose() * &l);
    Ok(())
}
