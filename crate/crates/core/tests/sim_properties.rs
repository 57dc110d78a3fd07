use corrgeo::correlation::nonsignaling_report;
use corrgeo::raffle::{default_labels, Raffle, Ticket};
use corrgeo::sim::{estimate, simulate, SettingPolicy, Source};
use corrgeo::spin::{PairAngles, Spin};

fn mermin_source() -> Source {
    let third = 2.0 * std::f64::consts::PI / 3.0;
    Source::quantum(Spin::HALF, &PairAngles::mermin(third, third, third)).unwrap()
}

#[test]
fn error_shrinks_like_inverse_root_n() {
    let src = mermin_source();
    let mut spread = Vec::new();
    for n in [4_000u64, 64_000] {
        let errs: Vec<f64> = (0..8)
            .map(|seed| {
                let log = simulate(&src, n, seed, SettingPolicy::Uniform).unwrap();
                estimate(&log).unwrap().pr_opposite.value - 0.5
            })
            .collect();
        spread.push((errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt());
    }
    // Sixteen times the runs should cut the error about four times.
    let ratio = spread[0] / spread[1];
    assert!((2.0..8.0).contains(&ratio), "{spread:?}");
}

#[test]
fn quantum_estimates_are_nonsignaling() {
    let log = simulate(&mermin_source(), 200_000, 11, SettingPolicy::Uniform).unwrap();
    let rep = estimate(&log).unwrap();
    let a = rep.array(&log).unwrap();
    // Each cell holds about 22k runs; 3σ of a marginal is about 0.01.
    let worst = nonsignaling_report(&a)
        .marginals
        .iter()
        .flat_map(|m| m.alice.iter().chain(&m.bob))
        .map(|p| (p - 0.5).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");
    for p in &rep.chi {
        let e = p.chi.unwrap();
        assert!((e.value + 0.5).abs() < 3.0 * e.stderr + 1e-3, "{p:?}");
    }
}

#[test]
fn single_ticket_gives_perfect_anticorrelation() {
    let t = Ticket::from_values(Spin::HALF, &[0.5, 0.5, 0.5]).unwrap();
    let src = Source::Raffle(Raffle::single(Spin::HALF, default_labels(3), t).unwrap());
    let log = simulate(&src, 5_000, 2, SettingPolicy::Uniform).unwrap();
    let rep = estimate(&log).unwrap();
    for p in &rep.chi {
        assert_eq!(p.chi.unwrap().value, 1.0);
    }
    assert_eq!(rep.pr_opposite.value, 1.0);
}

#[test]
fn fixed_pair_visits_one_cell() {
    let log = simulate(&mermin_source(), 1_000, 3, SettingPolicy::FixedPair(0, 2)).unwrap();
    assert!(log.records.iter().all(|r| r.set_a == 0 && r.set_b == 2));
    let rep = estimate(&log).unwrap();
    assert!(rep.array(&log).is_none());
    assert!(rep.chi_between("a", "c").is_some());
    assert!(rep.chi_between("a", "b").is_none());
}

#[test]
fn same_seed_same_log() {
    let a = simulate(&Source::PrBox, 10_000, 7, SettingPolicy::Uniform).unwrap();
    let b = simulate(&Source::PrBox, 10_000, 7, SettingPolicy::Uniform).unwrap();
    let c = simulate(&Source::PrBox, 10_000, 8, SettingPolicy::Uniform).unwrap();
    assert_eq!(a.records, b.records);
    assert_ne!(a.records, c.records);
}
