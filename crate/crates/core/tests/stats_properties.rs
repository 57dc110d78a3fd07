use corrgeo::correlation::cell_expectation;
use corrgeo::elliptope::angle_inequality_check;
use corrgeo::raffle::{default_labels, raffle_correlation_array, Raffle, Ticket};
use corrgeo::spin::Spin;
use corrgeo::stats::{
    correlation_matrix, definetti_angle_bounds, law_of_cosines_residual, mirror_samples, pearson_chi,
    BalancedSample, BeamConfig, beam_report, beam_sample,
};
use corrgeo_polytope::rational::{self, frac};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn raw(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

proptest! {
    #[test]
    fn mirrored_samples_are_balanced(v in prop::collection::vec(-10.0f64..10.0, 1..50)) {
        let s = mirror_samples(&v).unwrap();
        prop_assert_eq!(s.len(), 2 * v.len());
        prop_assert!(s.mean().abs() < 1e-12);
        let ms: f64 = v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64;
        prop_assert!((s.variance() - ms).abs() < 1e-9 * (1.0 + ms));
    }

    #[test]
    fn sample_correlation_matrices_are_psd(a in raw(12), b in raw(12), c in raw(12)) {
        let (a, b, c) = (mirror_samples(&a).unwrap(), mirror_samples(&b).unwrap(), mirror_samples(&c).unwrap());
        if let Ok(m) = correlation_matrix(&[&a, &b, &c]) {
            prop_assert!(m.min_eigenvalue() >= -1e-10);
        }
    }

    #[test]
    fn law_of_cosines_holds(a in raw(10), b in raw(10), c in raw(10)) {
        let (a, b, c) = (mirror_samples(&a).unwrap(), mirror_samples(&b).unwrap(), mirror_samples(&c).unwrap());
        if let Ok(r) = law_of_cosines_residual(&a, &b, &c) {
            prop_assert!(r.abs() < 1e-10);
        }
    }

    #[test]
    fn angle_bounds_agree_with_triangle_check(x in 0.0..=std::f64::consts::PI, y in 0.0..=std::f64::consts::PI, t in 0.0f64..=1.0) {
        let (lo, hi) = definetti_angle_bounds(x, y).unwrap();
        prop_assert!(lo <= hi + 1e-12);
        let mid = lo + t * (hi - lo);
        prop_assert!(angle_inequality_check([mid, x, y]));
        if lo > 1e-6 {
            prop_assert!(!angle_inequality_check([lo - 1e-6, x, y]));
        }
        if hi < std::f64::consts::PI - 1e-6 {
            prop_assert!(!angle_inequality_check([hi + 1e-6, x, y]));
        }
    }
}

#[test]
fn planted_correlation_converges() {
    let rho: f64 = 0.7;
    let mut errs = Vec::new();
    for n in [1_000usize, 100_000] {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let (u, v): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            xs.push(u);
            ys.push(rho * u + (1.0 - rho * rho).sqrt() * v);
        }
        let r = pearson_chi(&mirror_samples(&xs).unwrap(), &mirror_samples(&ys).unwrap()).unwrap();
        errs.push((r - rho).abs());
    }
    assert!(errs[1] < 0.01, "{errs:?}");
    assert!(errs[1] < errs[0] || errs[0] < 0.01);
}

#[test]
fn proxy_identity_on_spin_half_raffles() {
    // −⟨A_x B_y⟩ from the cell equals the same-wing covariance of the tickets.
    let s = Spin::HALF;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let w: Vec<i64> = (0..4).map(|_| rng.random_range(0..5)).collect();
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        let total: i64 = w.iter().sum();
        let tickets = corrgeo::raffle::enumerate_tickets(3, s);
        let r = Raffle::new(
            s,
            default_labels(3),
            tickets.into_iter().zip(w.iter().map(|&x| frac(x, total))).collect(),
        )
        .unwrap();
        let a = raffle_correlation_array(&r).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let cross = -cell_expectation(a.cell(x, y), s).unwrap();
                let same = rational::to_f64(&r.same_wing_covariance(x, y));
                assert!((cross - same).abs() < 1e-12);
            }
        }
    }
    let t = Ticket::from_values(s, &[0.5, -0.5, 0.5]).unwrap();
    let r = Raffle::single(s, default_labels(3), t).unwrap();
    assert_eq!(r.same_wing_covariance(0, 1), frac(-1, 4));
}

#[test]
fn beam_spread_matches_uniform_marginal() {
    let cfg = BeamConfig::equal(1.0, 1.0);
    let rep = beam_report(&beam_sample(&cfg, 100_000, 8).unwrap()).unwrap();
    // Conditioning on the plane narrows the marginals, so only bound them.
    for (sd, u) in rep.std_devs.iter().zip(cfg.uniform_std_dev()) {
        assert!(*sd <= u + 0.01);
        assert!((u - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }
    let shifted = BeamConfig { torque: 0.5, ..cfg };
    for t in beam_sample(&shifted, 1000, 9).unwrap() {
        assert!((t[0] + t[1] + t[2] - 0.5).abs() < 1e-12);
    }
    assert!(BalancedSample::new(vec![]).is_err());
}
