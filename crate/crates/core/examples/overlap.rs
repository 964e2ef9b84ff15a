//! Probability that the selection circle meets a neighbouring one.

use harvest_noma::montecarlo::{overlap_closed_form, overlap_probability};
use harvest_noma::params::SystemParams;

fn main() -> harvest_noma::Result<()> {
    for lambda in [30.0, 300.0] {
        let p = SystemParams::table_one(0.15, lambda)?;
        for r in [0.01, 0.03, 0.1] {
            let e = overlap_probability(&p, r, 20_000, 5);
            println!(
                "lambda_B {lambda:>5} r {r:>5} km: {:.4} +- {:.4}  closed form {:.4}",
                e.mean,
                e.std_error,
                overlap_closed_form(lambda, r)
            );
        }
    }
    Ok(())
}
