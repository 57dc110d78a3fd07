use std::f64::consts::PI;

use corrgeo::correlation::{chi_of_cell, nonsignaling_report, pr_opposite, Cell, ChiTriple, CorrelationArray};
use corrgeo::elliptope::TETRAHEDRON_SIGNS;
use corrgeo::spin::{quantum_correlation_array, singlet_cell, PairAngles, Spin};
use proptest::prelude::*;

fn random_cell(d: usize) -> impl Strategy<Value = Cell> {
    prop::collection::vec(0.0f64..1.0, d * d)
        .prop_filter("non-zero mass", |v| v.iter().sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let t: f64 = v.iter().sum();
            Cell::new(d, v.iter().map(|x| x / t).collect()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn chi_lies_in_unit_interval((tw, cell) in (1u32..=3).prop_flat_map(|tw| (Just(tw), random_cell(tw as usize + 1)))) {
        let s = Spin::from_twice(tw).unwrap();
        if let Ok(chi) = chi_of_cell(&cell, s) {
            prop_assert!((-1.0..=1.0).contains(&chi));
        }
    }

    #[test]
    fn pr_opposite_respects_bound_inside_tetrahedron(w in prop::collection::vec(0.0f64..1.0, 4)) {
        let t: f64 = w.iter().sum::<f64>().max(1e-9);
        let mut p = [0.0; 3];
        for (wi, v) in w.iter().zip(TETRAHEDRON_SIGNS) {
            for k in 0..3 {
                p[k] += wi / t * v[k];
            }
        }
        let chi = ChiTriple::new(p[0], p[1], p[2]).unwrap();
        prop_assert!(pr_opposite(&chi) >= 5.0 / 9.0 - 1e-12);
    }

    #[test]
    fn quantum_arrays_are_grid_symmetric(s in (1u32..=4).prop_map(|t| Spin::from_twice(t).unwrap()),
                                          ab in 0.0..=PI, ac in 0.0..=PI, bc in 0.0..=PI) {
        let a = quantum_correlation_array(s, &PairAngles::mermin(ab, ac, bc)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(a.cell(i, j).max_abs_diff(&a.cell(j, i).transpose()) < 1e-12);
            }
        }
        prop_assert!(a.is_grid_symmetric(1e-12));
        let r = nonsignaling_report(&a);
        prop_assert!(r.uniform_marginals && r.nonsignaling);
    }

    #[test]
    fn json_round_trip(ab in 0.0..=PI, ac in 0.0..=PI, bc in 0.0..=PI) {
        let a = quantum_correlation_array(Spin::ONE, &PairAngles::mermin(ab, ac, bc)).unwrap();
        let back = CorrelationArray::from_json(&a.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn uniform_marginal_variance_is_closed_form() {
    for tw in 1..=5 {
        let s = Spin::from_twice(tw).unwrap();
        let c = singlet_cell(s, 1.0).unwrap();
        let m = s.outcomes();
        let var: f64 = c.row_marginal().iter().zip(&m).map(|(p, x)| p * x * x).sum();
        let v = s.value();
        assert!((var - v * (v + 1.0) / 3.0).abs() < 1e-12);
        assert!((var - s.uniform_variance()).abs() < 1e-12);
    }
}

#[test]
fn degenerate_cells_are_typed_errors() {
    let c = Cell::new(2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(matches!(chi_of_cell(&c, Spin::HALF), Err(corrgeo::Error::DegenerateCell)));
    assert!(Cell::new(2, vec![0.5, 0.5, 0.5, -0.5]).is_err());
    assert!(Cell::new(2, vec![0.5, 0.5, 0.5, 0.5]).is_err());
}
