//! Selection radius in all three modes across a few BS densities.

use harvest_noma::analysis::{selection_radius, HarvestModel, NumericBudget, RadiusMode};
use harvest_noma::params::SystemParams;

fn main() -> harvest_noma::Result<()> {
    let budget = NumericBudget::default();
    println!("{:>6} {:>9} {:>10} {:>14}", "T", "lambda_B", "mode", "radius_km");
    for t in [0.01, 0.15] {
        for lambda in [20.0, 30.0, 40.0] {
            let p = SystemParams::table_one(t, lambda)?;
            for mode in RadiusMode::ALL {
                let r = selection_radius(&p, &HarvestModel::from_mode(mode, budget));
                let shown = match r.km() {
                    Some(km) => format!("{km:.6}"),
                    None => "undefined".to_string(),
                };
                println!("{t:>6} {lambda:>9} {:>10} {shown:>14}", mode.label());
            }
        }
    }
    Ok(())
}
