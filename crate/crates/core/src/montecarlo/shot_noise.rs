use rayon::prelude::*;

use crate::channel::{clamped_path_loss, fading};
use crate::geometry::{sample_ppp, Point};
use crate::params::SystemParams;
use crate::streams::{stream, Purpose};

use super::campaign::Estimate;

/// Draws `Σ_{i≥2} h_i r_i^-α` seen from the origin given that the nearest
/// BS sits at `r1`: a PPP on the square of half side `half`, with the
/// points inside the disk of radius `r1` removed.
pub fn excess_interference_draws(
    bs_density: f64,
    alpha: f64,
    r1: f64,
    draws: u64,
    master_seed: u64,
    half: f64,
) -> Vec<f64> {
    (0..draws)
        .into_par_iter()
        .map(|j| excess_sum(bs_density, alpha, r1, master_seed, half, j).1)
        .collect()
}

fn excess_sum(bs_density: f64, alpha: f64, r1: f64, seed: u64, half: f64, j: u64) -> (f64, f64) {
    let bs = sample_ppp(bs_density, 2.0 * half, &mut stream(seed, Purpose::ShotNoisePoints, j));
    let mut rng = stream(seed, Purpose::ShotNoiseFading, j);
    let nearest = fading(&mut rng) * clamped_path_loss(r1, alpha);
    let excess = bs
        .iter()
        .map(|b| b.dist(Point::ORIGIN))
        .filter(|&d| d >= r1)
        .map(|d| fading(&mut rng) * clamped_path_loss(d, alpha))
        .sum();
    (nearest, excess)
}

/// Empirical mean and standard error of a sample.
pub fn sample_estimate(xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Estimate {
        mean,
        std_error: (var / n).sqrt(),
    }
}

/// Frequency with which a UE whose nearest BS is at `r1` harvests at
/// least `E_th`, simulating every BS of the window explicitly.
pub fn harvest_success_frequency(p: &SystemParams, r1: f64, trials: u64, master_seed: u64, half: f64) -> Estimate {
    let c = p.normalized_harvest_threshold();
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|j| {
            let (near, excess) = excess_sum(p.bs_density(), p.path_loss_exponent(), r1, master_seed, half, j);
            (near + excess >= c) as u64
        })
        .sum();
    let n = trials as f64;
    let mean = hits as f64 / n;
    Estimate {
        mean,
        std_error: (mean * (1.0 - mean) / n).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::campbell_mean_excess_interference;

    #[test]
    fn campbell_mean_small_run() {
        let xs = excess_interference_draws(30.0, 4.0, 0.1, 20_000, 2, 2.0);
        let e = sample_estimate(&xs);
        let expect = campbell_mean_excess_interference(0.1, 30.0, 4.0);
        assert!((e.mean - expect).abs() < 3.0 * e.std_error, "{e:?} vs {expect}");
    }

    #[test]
    fn draws_are_reproducible() {
        let a = excess_interference_draws(30.0, 4.0, 0.05, 100, 1, 1.0);
        let b = excess_interference_draws(30.0, 4.0, 0.05, 100, 1, 1.0);
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| x >= 0.0));
    }
}
