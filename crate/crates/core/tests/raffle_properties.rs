use corrgeo::correlation::{cell_symmetries, nonsignaling_report, Cell, CorrelationArray};
use corrgeo::elliptope::elliptope_value_exact;
use corrgeo::polyhedron::{anticorrelation_polyhedron, chi_sum_bound, PipelineOptions};
use std::sync::OnceLock;

use corrgeo::raffle::{
    admissibility_system, AdmissibilitySystem, default_labels, enumerate_tickets, fit_raffle_to_array, raffle_correlation_array, Raffle,
};
use corrgeo::spin::Spin;
use corrgeo_polytope::rational::{self, frac, Rational};
use corrgeo_polytope::vertex_enumerate;
use num_traits::Zero;
use proptest::prelude::*;

/// Exact random weights over all canonical tickets.
fn raffle_strategy(spin: Spin) -> impl Strategy<Value = Raffle> {
    let tickets = enumerate_tickets(3, spin);
    prop::collection::vec(0i64..5, tickets.len())
        .prop_filter("some weight", |w| w.iter().any(|&x| x > 0))
        .prop_map(move |w| {
            let total: i64 = w.iter().sum();
            let entries = tickets.iter().cloned().zip(w.iter().map(|&x| frac(x, total))).collect();
            Raffle::new(spin, default_labels(3), entries).unwrap()
        })
}

fn system_and_vertices(spin: Spin) -> &'static (AdmissibilitySystem, Vec<Vec<Rational>>) {
    static CACHE: OnceLock<Vec<(AdmissibilitySystem, Vec<Vec<Rational>>)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [Spin::HALF, Spin::ONE]
            .into_iter()
            .map(|s| {
                let sys = admissibility_system(s, 3);
                let v = vertex_enumerate(&sys.polytope).unwrap().vertices;
                (sys, v)
            })
            .collect()
    });
    &all[spin.twice() as usize - 1]
}

fn spin_strategy() -> impl Strategy<Value = Spin> {
    prop_oneof![Just(Spin::HALF), Just(Spin::ONE)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn raffle_arrays_are_nonsignaling_and_centrosymmetric(r in spin_strategy().prop_flat_map(raffle_strategy)) {
        let a = raffle_correlation_array(&r).unwrap();
        prop_assert!(nonsignaling_report(&a).nonsignaling);
        for c in a.cells() {
            prop_assert!(cell_symmetries(c).centrosymmetric);
        }
    }

    #[test]
    fn json_round_trip(r in spin_strategy().prop_flat_map(raffle_strategy)) {
        prop_assert_eq!(Raffle::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn admissible_mixtures_respect_the_bound(spin in spin_strategy(), w in prop::collection::vec(0i64..4, 40)) {
        let (sys, verts) = system_and_vertices(spin);
        let w: Vec<i64> = w.into_iter().take(verts.len()).collect();
        let total: i64 = w.iter().sum();
        prop_assume!(total > 0);
        let mut mix = vec![Rational::zero(); sys.tickets.len()];
        for (v, &k) in verts.iter().zip(&w) {
            for (m, x) in mix.iter_mut().zip(v) {
                *m += x * frac(k, total);
            }
        }
        let r = sys.raffle_from_weights(&mix).unwrap();
        prop_assert!(sys.is_admissible(&r));
        let sum = r.chi_exact(0, 1) + r.chi_exact(0, 2) + r.chi_exact(1, 2);
        prop_assert!(sum >= chi_sum_bound(spin));
        let a = raffle_correlation_array(&r).unwrap();
        let d = spin.dim();
        for x in 0..3 {
            let c = a.cell(x, x);
            for i in 0..d {
                for j in 0..d {
                    let want = if i + j == d - 1 { 1.0 / d as f64 } else { 0.0 };
                    prop_assert!((c.get(i, j) - want).abs() < 1e-12);
                }
            }
        }
    }

    /// Alice always takes the left side: a 50/50 mix of a raffle and its
    /// side-swapped copy gives a symmetric array that canonical tickets
    /// reproduce exactly.
    #[test]
    fn fixed_side_protocol_is_covered(w in prop::collection::vec(0u32..4, 8)) {
        prop_assume!(w.iter().any(|&x| x > 0));
        let total: u32 = w.iter().sum();
        let sides: Vec<[i32; 3]> = (0..8).map(|k| [0, 1, 2].map(|i| if k >> i & 1 == 1 { -1 } else { 1 })).collect();
        let mut cells = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                let mut p = [0.0; 4];
                for (side, &k) in sides.iter().zip(&w) {
                    let wk = k as f64 / total as f64;
                    // Forward copy: Alice left, Bob right; swapped copy: the reverse.
                    for (a, b) in [(side[x], -side[y]), (-side[x], side[y])] {
                        let idx = |t: i32| if t > 0 { 0 } else { 1 };
                        p[idx(a) * 2 + idx(b)] += wk / 2.0;
                    }
                }
                cells.push(Cell::new(2, p.to_vec()).unwrap());
            }
        }
        let a = CorrelationArray::square(default_labels(3), Spin::HALF, cells).unwrap();
        prop_assert!(a.is_grid_symmetric(1e-12));
        prop_assert!(fit_raffle_to_array(&a).unwrap().is_feasible());
    }
}

#[test]
fn polyhedra_sit_inside_the_elliptope_and_grow() {
    let mut last = Rational::zero();
    for spin in [Spin::HALF, Spin::ONE, Spin::THREE_HALVES] {
        let p = anticorrelation_polyhedron(spin, PipelineOptions::default()).unwrap();
        for v in &p.hull.vertices {
            assert!(elliptope_value_exact(&v[0], &v[1], &v[2]) >= Rational::zero(), "{spin}: {v:?}");
        }
        let vol = p.volume();
        assert!(vol > last, "{spin}: volume {vol} not above {last}");
        assert!(rational::to_f64(&vol) < std::f64::consts::PI.powi(2) / 2.0);
        last = vol;
    }
}

#[test]
fn enumerated_vertices_satisfy_the_system() {
    for spin in [Spin::HALF, Spin::ONE] {
        let sys = admissibility_system(spin, 3);
        for v in vertex_enumerate(&sys.polytope).unwrap().vertices {
            assert!(sys.polytope.contains(&v));
        }
    }
}
