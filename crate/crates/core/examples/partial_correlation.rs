//! Partial correlations, the Yule inequality and angle bounds on a few points.

use corrgeo::correlation::ChiTriple;
use corrgeo::elliptope::elliptope_value;
use corrgeo::stats::{definetti_angle_bounds, partial_correlation, yule_holds};

fn main() -> corrgeo::Result<()> {
    for (ab, ac, bc) in [(-0.5, -0.5, -0.5), (0.3, 0.6, 0.5), (-0.9, 0.6, 0.6)] {
        let chi = ChiTriple::new(ab, ac, bc)?;
        println!(
            "({ab:+}, {ac:+}, {bc:+}): partial {:+.4}, Yule {}, elliptope value {:+.4}",
            partial_correlation(&chi)?,
            yule_holds(&chi),
            elliptope_value(&chi)
        );
    }
    let t = 120f64.to_radians();
    let (lo, hi) = definetti_angle_bounds(t, t)?;
    println!("with both angles 120°, the third lies in [{:.1}°, {:.1}°]", lo.to_degrees(), hi.to_degrees());
    Ok(())
}
