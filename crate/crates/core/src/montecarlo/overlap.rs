use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::geometry::{sample_ppp, Point};
use crate::params::SystemParams;
use crate::streams::{stream, Purpose};

use super::campaign::Estimate;

/// Largest half side (km) of the square sampled around the BS. Beyond it
/// the 2r disk is only partly covered; the miss probability is at most
/// `exp(-λ_B (2 · cap)²)`.
pub const OVERLAP_MAX_HALF_SIDE_KM: f64 = 5.0;

/// Fraction of trials in which a BS at the origin has another BS closer
/// than `2r`, i.e. its radius-`r` circle meets another BS's circle. The
/// other BSs are a PPP around the conditioned one.
pub fn overlap_probability(p: &SystemParams, r: f64, trials: u64, master_seed: u64) -> Estimate {
    let reach = 2.0 * r;
    let half = reach.min(OVERLAP_MAX_HALF_SIDE_KM);
    let lambda = p.bs_density();
    let inscribed = half > 0.0 && std::f64::consts::SQRT_2 * half < reach;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream(master_seed, Purpose::Overlap, j);
            if inscribed {
                // every point of the window is within reach; only the count matters
                let mean = lambda * 4.0 * half * half;
                return (Poisson::new(mean).expect("positive mean").sample(&mut rng) >= 1.0) as u64;
            }
            let bs = sample_ppp(lambda, 2.0 * half, &mut rng);
            bs.iter().any(|b| b.dist(Point::ORIGIN) < reach) as u64
        })
        .sum();
    let n = trials.max(1) as f64;
    let mean = hits as f64 / n;
    Estimate {
        mean,
        std_error: (mean * (1.0 - mean) / n).sqrt(),
    }
}

/// `1 - exp(-4πλ_B r²)`: some other BS within `2r` of a given one.
pub fn overlap_closed_form(bs_density: f64, r: f64) -> f64 {
    -(-4.0 * std::f64::consts::PI * bs_density * r * r).exp_m1()
}
