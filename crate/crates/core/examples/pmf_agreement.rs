//! Typical-cell user count against the Poisson PMF of the selection circle.
//!
//! The first case uses a paper-mode radius at T = 0.01, which is smaller
//! than the BS spacing; the second uses the corrected radius at T = 0.15.

use harvest_noma::analysis::{
    pmf_vector, selection_radius, total_variation_to_poisson, HarvestModel,
};
use harvest_noma::montecarlo::{Ablation, Campaign, SelectionRule};
use harvest_noma::params::SystemParams;

fn main() -> harvest_noma::Result<()> {
    let cases = [
        (0.01, HarvestModel::PaperClosedForm),
        (0.15, HarvestModel::CorrectedClosedForm),
    ];
    for (t, model) in cases {
        let p = SystemParams::table_one(t, 30.0)?;
        let r = selection_radius(&p, &model).require()?;
        let mean = p.ue_density() * std::f64::consts::PI * r * r;
        let s = Campaign::new(5000, 1).run(&p, SelectionRule::RadiusCircle(r), Ablation::WithInterference)?;
        println!("{} radius {r:.5} km, Poisson mean {mean:.4}", model.mode().label());
        let analytic = pmf_vector(mean);
        for n in 0..6 {
            println!(
                "  n {n}: analytic {:.4}  empirical {:.4}",
                analytic.values.get(n).copied().unwrap_or(0.0),
                s.pmf_empirical.get(n).copied().unwrap_or(0.0)
            );
        }
        println!("  total variation {:.4}", total_variation_to_poisson(&s.pmf_empirical, mean));
    }
    Ok(())
}
