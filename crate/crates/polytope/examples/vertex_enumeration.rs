//! Enumerates the vertices of a cut cube and minimizes a linear objective
//! over it with exact arithmetic.

use corrgeo_polytope::rational::{format, frac, int};
use corrgeo_polytope::{lp_minimize, vertex_enumerate, HPolytope};

fn main() -> Result<(), corrgeo_polytope::PolytopeError> {
    let mut h = HPolytope::cube(3, int(0), int(1));
    h.add_inequality(vec![int(1), int(1), int(1)], frac(5, 2))?;
    let v = vertex_enumerate(&h)?;
    println!("{} vertices:", v.len());
    for x in &v.vertices {
        println!("  ({})", x.iter().map(format).collect::<Vec<_>>().join(", "));
    }
    let sol = lp_minimize(&[int(-1), int(-2), int(-3)], &h)?;
    println!(
        "min −x − 2y − 3z = {} at ({})",
        format(&sol.value),
        sol.witness.iter().map(format).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}
