//! Analytic and simulated system throughput over a coarse T grid.

use harvest_noma::analysis::{
    cell_throughput, optimal_harvest_fraction, selection_radius, system_throughput, HarvestModel,
    RateMode,
};
use harvest_noma::montecarlo::{Campaign, SelectionRule};
use harvest_noma::params::SystemParams;

fn main() -> harvest_noma::Result<()> {
    let base = SystemParams::table_one(0.15, 30.0)?;
    let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let variants: Vec<_> = grid
        .iter()
        .map(|&t| {
            let p = base.with_harvest_fraction(t)?;
            let r = selection_radius(&p, &HarvestModel::CorrectedClosedForm).require()?;
            Ok((p, SelectionRule::RadiusCircle(r)))
        })
        .collect::<harvest_noma::Result<_>>()?;
    let sims = Campaign::new(2000, 1).run_variants(&variants)?;
    let mut analytic = Vec::new();
    println!("{:>5} {:>12} {:>12}", "T", "analytic", "simulated");
    for ((p, rule), s) in variants.iter().zip(&sims) {
        let radius = selection_radius(p, &HarvestModel::CorrectedClosedForm);
        let w = &s.with_interference;
        let r_tc = cell_throughput(p, &radius, w.mean_interference.mean, RateMode::LogSumRate)?;
        let r_ts = system_throughput(p, r_tc, rule.radius().unwrap()).area_throughput;
        analytic.push(r_ts);
        println!("{:>5} {r_ts:>12.3} {:>12.3}", p.harvest_fraction(), w.mean_system_throughput.mean);
    }
    let best = optimal_harvest_fraction(&grid, |t| {
        grid.iter().position(|&g| g == t).map(|i| analytic[i])
    })?;
    println!("analytic optimum on the grid: T {:.2}, R_ts {:.3}", best.harvest_fraction, best.value);
    Ok(())
}
