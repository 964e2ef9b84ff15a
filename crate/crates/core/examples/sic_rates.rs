//! Per-user SIC rates and the telescoped sum rate.

use harvest_noma::analysis::{sic_rates, sum_rate};

fn main() -> harvest_noma::Result<()> {
    let received = [4e-9, 1e-9, 2.5e-10, 1e-11];
    let (i_inter, sigma, t) = (3e-10, 1e-12, 0.15);
    let rates = sic_rates(&received, i_inter, sigma, t)?;
    for (s, r) in received.iter().zip(&rates) {
        println!("S {s:>9.2e} W  ->  {r:.6} bits/s/Hz");
    }
    let total: f64 = received.iter().sum();
    println!("sum of rates   {:.12}", rates.iter().sum::<f64>());
    println!("aggregate rate {:.12}", sum_rate(total, i_inter, sigma, t)?);
    Ok(())
}
