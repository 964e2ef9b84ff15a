use proptest::prelude::*;

use harvest_noma::analysis::{
    cell_throughput, selection_radius, sum_rate, ConditionalHarvest, HarvestModel, NumericBudget,
    RadiusMode, RateMode,
};
use harvest_noma::montecarlo::{
    harvest_success_frequency, run_trial, Campaign, SelectionRule, TrialInputs, Window,
};
use harvest_noma::params::{Param, SystemParams};

fn table_one(t: f64, lambda: f64) -> SystemParams {
    SystemParams::table_one(t, lambda).unwrap()
}

fn corrected_radius(p: &SystemParams) -> f64 {
    selection_radius(p, &HarvestModel::CorrectedClosedForm).km().unwrap()
}

// a threshold high enough that the selection radius is tens of metres
fn short_range(lambda: f64) -> SystemParams {
    table_one(0.15, lambda).with(Param::EnergyThreshold, 9000.0).unwrap()
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn campaigns_ignore_worker_count() {
    let p = table_one(0.15, 30.0);
    let rule = SelectionRule::RadiusCircle(corrected_radius(&p));
    let c = Campaign::new(300, 5);
    let one = pool(1).install(|| c.run_matched(&p, rule).unwrap());
    let four = pool(4).install(|| c.run_matched(&p, rule).unwrap());
    assert_eq!(one, four);
    let again = pool(3).install(|| c.run_matched(&p, rule).unwrap());
    assert_eq!(format!("{one:?}"), format!("{again:?}"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trial_invariants(seed in 0u64..1000, index in 0u64..1000, t in 0.01f64..0.95, small in any::<bool>()) {
        let p = if small { short_range(30.0) } else { table_one(t, 30.0) };
        let rule = if small {
            SelectionRule::RealizedEnergy
        } else {
            SelectionRule::RadiusCircle(corrected_radius(&p))
        };
        let rec = run_trial(&p, rule, Window::Auto, seed, index).unwrap();
        prop_assert!(rec.n_selected <= rec.n_candidates);
        prop_assert_eq!(rec.rates.len(), rec.n_selected);
        prop_assert!(rec.received_powers.windows(2).all(|w| w[0] >= w[1]));
        let total: f64 = rec.received_powers.iter().sum();
        let aggregate = sum_rate(total, rec.i_inter, p.noise_power(), p.harvest_fraction()).unwrap();
        prop_assert!((rec.throughput() - aggregate).abs() <= 1e-9 * aggregate.max(f64::MIN_POSITIVE));
        prop_assert!(rec.throughput_without_interference() >= rec.throughput());
        if small {
            prop_assert!(rec.harvested.iter().all(|&e| e >= p.energy_threshold()));
        }
    }
}

#[test]
fn window_frequency_matches_conditional_estimator() {
    let p = short_range(30.0);
    let budget = NumericBudget {
        trials: 20_000,
        ..NumericBudget::default()
    };
    let cond = ConditionalHarvest::new(&p, budget);
    for r1 in [0.045, 0.055, 0.065] {
        let window = harvest_success_frequency(&p, r1, 20_000, 21, 2.0);
        let (q, q_se) = cond.success(r1);
        let se = (window.std_error.powi(2) + q_se.powi(2)).sqrt();
        assert!(
            (window.mean - q).abs() <= 3.0 * se + 1e-9,
            "r1 {r1}: window {} vs conditional {q} (se {se})",
            window.mean
        );
    }
}

#[test]
fn doubling_the_window_barely_moves_interference() {
    let p = table_one(0.15, 30.0);
    let rule = SelectionRule::RadiusCircle(corrected_radius(&p));
    let (mut small, mut large) = (0.0, 0.0);
    for j in 0..150 {
        let big = TrialInputs::sample(&p, Window::HalfSide(4.0), 31, j).unwrap();
        let inner = big.restrict(2.0, 31).unwrap();
        large += big.evaluate(&p, rule).unwrap().i_inter;
        small += inner.evaluate(&p, rule).unwrap().i_inter;
    }
    let change = (large - small).abs() / small;
    assert!(change < 0.02, "relative change {change}");
}

#[test]
fn radius_circle_users_meet_the_coverage_target() {
    let p = short_range(30.0);
    let r = selection_radius(&p, &HarvestModel::NumericExact(NumericBudget::default()))
        .km()
        .unwrap();
    let records = Campaign::new(10_000, 41)
        .records(&p, SelectionRule::RadiusCircle(r))
        .unwrap();
    let (hits, total) = records.iter().fold((0usize, 0usize), |(h, n), rec| {
        let ok = rec.harvested.iter().filter(|&&e| e >= p.energy_threshold()).count();
        (h + ok, n + rec.harvested.len())
    });
    let beta = p.coverage();
    let frac = hits as f64 / total as f64;
    let se = (beta * (1.0 - beta) / total as f64).sqrt();
    assert!(total > 1000, "only {total} selected users");
    assert!(frac >= beta - 3.0 * se, "fraction {frac} over {total} users");
}

#[test]
fn numeric_radius_grows_with_bs_density() {
    let budget = NumericBudget::default();
    let radii: Vec<f64> = [20.0, 30.0, 40.0]
        .iter()
        .map(|&l| {
            selection_radius(&short_range(l), &HarvestModel::NumericExact(budget))
                .km()
                .unwrap()
        })
        .collect();
    assert!(radii.windows(2).all(|w| w[1] >= w[0]), "{radii:?}");
}

#[test]
fn analytic_cell_throughput_tracks_simulation() {
    let p = table_one(0.15, 30.0);
    let radius = selection_radius(&p, &HarvestModel::from_mode(RadiusMode::CorrectedClosedForm, NumericBudget::default()));
    let r = radius.km().unwrap();
    let summary = Campaign::new(20_000, 51)
        .run_matched(&p, SelectionRule::RadiusCircle(r))
        .unwrap()
        .with_interference;
    let analytic = cell_throughput(&p, &radius, summary.mean_interference.mean, RateMode::LogSumRate).unwrap();
    let empirical = summary.mean_cell_throughput.mean;
    let gap = (analytic - empirical).abs() / empirical;
    assert!(gap <= 0.10, "analytic {analytic} vs simulated {empirical}: gap {gap:.3}");
}
