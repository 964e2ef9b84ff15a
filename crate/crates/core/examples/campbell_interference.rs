//! Mean far-field harvest sum beyond the nearest BS: simulation vs Campbell.

use harvest_noma::analysis::campbell_mean_excess_interference;
use harvest_noma::montecarlo::{excess_interference_draws, sample_estimate};

fn main() {
    let (lambda, alpha) = (30.0, 4.0);
    for r1 in [0.05, 0.1, 0.2] {
        let draws = excess_interference_draws(lambda, alpha, r1, 20_000, 3, 2.0);
        let est = sample_estimate(&draws);
        let closed = campbell_mean_excess_interference(r1, lambda, alpha);
        println!(
            "r1 {r1:>5} km: simulated {:>10.1} +- {:>7.1}   campbell {closed:>10.1}",
            est.mean, est.std_error
        );
    }
}
