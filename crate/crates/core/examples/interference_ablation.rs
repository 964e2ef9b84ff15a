//! Matched-seed throughput with and without inter-cell interference.

use harvest_noma::analysis::{selection_radius, HarvestModel};
use harvest_noma::montecarlo::{Campaign, SelectionRule};
use harvest_noma::params::SystemParams;

fn main() -> harvest_noma::Result<()> {
    for lambda in [20.0, 30.0, 40.0] {
        let p = SystemParams::table_one(0.15, lambda)?;
        let r = selection_radius(&p, &HarvestModel::CorrectedClosedForm).require()?;
        let m = Campaign::new(2000, 9).run_matched(&p, SelectionRule::RadiusCircle(r))?;
        let (w, wo) = (&m.with_interference, &m.without_interference);
        println!(
            "lambda_B {lambda}: with {:.3} +- {:.3}, without {:.3} +- {:.3}, mean I {:.3e} W",
            w.mean_system_throughput.mean,
            w.mean_system_throughput.std_error,
            wo.mean_system_throughput.mean,
            wo.mean_system_throughput.std_error,
            w.mean_interference.mean
        );
    }
    Ok(())
}
