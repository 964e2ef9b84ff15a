use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

/// Truncation target for PMF vectors: the upper tail beyond `n_max`.
pub const PMF_TAIL_TOLERANCE: f64 = 1e-9;
/// Hard cap on PMF vector length.
pub const PMF_MAX_N: usize = 10_000;

/// Poisson probability of `n` events with the given mean.
pub fn poisson_pmf(n: u64, mean: f64) -> f64 {
    if mean <= 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let n_f = n as f64;
    (n_f * mean.ln() - mean - ln_gamma(n_f + 1.0)).exp()
}

/// `P(N = n)` for the number of UEs in a circle of radius `radius_km`
/// drawn from a PPP of density `ue_density`.
pub fn pmf_n(n: u64, ue_density: f64, radius_km: f64) -> f64 {
    poisson_pmf(n, ue_density * PI * radius_km * radius_km)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonPmf {
    pub mean: f64,
    /// `values[n] = P(N = n)` for `n = 0..=n_max`.
    pub values: Vec<f64>,
    /// `P(N > n_max)`.
    pub tail_mass: f64,
}

/// PMF vector truncated at the smallest `n` whose upper tail is below
/// [`PMF_TAIL_TOLERANCE`], capped at [`PMF_MAX_N`] entries past zero.
pub fn pmf_vector(mean: f64) -> PoissonPmf {
    let mut values = Vec::new();
    let mut cumulative = 0.0;
    for n in 0..=PMF_MAX_N as u64 {
        let v = poisson_pmf(n, mean);
        values.push(v);
        cumulative += v;
        // past the mode the terms only shrink
        if 1.0 - cumulative < PMF_TAIL_TOLERANCE && n as f64 >= mean {
            break;
        }
    }
    PoissonPmf {
        mean,
        values,
        tail_mass: (1.0 - cumulative).max(0.0),
    }
}

/// Half the L1 distance between two PMFs given as vectors starting at
/// zero; entries missing from the shorter vector count as zero.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// Total-variation distance between an empirical PMF (summing to one) and
/// a Poisson law, with the Poisson mass outside the compared range
/// counted in full.
pub fn total_variation_to_poisson(empirical: &[f64], mean: f64) -> f64 {
    let analytic = pmf_vector(mean);
    let len = empirical.len().max(analytic.values.len());
    let mut l1 = 0.0;
    let mut covered = 0.0;
    for n in 0..len {
        let q = poisson_pmf(n as u64, mean);
        covered += q;
        l1 += (empirical.get(n).copied().unwrap_or(0.0) - q).abs();
    }
    0.5 * (l1 + (1.0 - covered).max(0.0))
}

/// Range `[lo, hi]` outside which a Poisson law has negligible mass
/// (below ~1e-30 on either side).
pub(crate) fn poisson_support(mean: f64) -> (u64, u64) {
    if mean <= 0.0 {
        return (0, 0);
    }
    let spread = 12.0 * mean.sqrt() + 40.0;
    let lo = (mean - spread).max(0.0).floor() as u64;
    let hi = (mean + spread).ceil() as u64;
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circle_probability() {
        let (lu, r) = (100.0, 0.03);
        assert!((pmf_n(0, lu, r) - (-lu * PI * r * r).exp()).abs() < 1e-15);
        assert_eq!(pmf_n(0, lu, 0.0), 1.0);
        assert_eq!(pmf_n(3, lu, 0.0), 0.0);
    }

    #[test]
    fn hand_value_mean_two() {
        let v = poisson_pmf(2, 2.0);
        assert!((v - 2.0 * (-2.0f64).exp()).abs() < 1e-14);
        assert!((v - 0.27067).abs() < 1e-5);
        // same through the radius parameterization: λ_U π r² = 2
        let r = (2.0 / (100.0 * PI)).sqrt();
        assert!((pmf_n(2, 100.0, r) - v).abs() < 1e-14);
    }

    #[test]
    fn normalization_up_to_200() {
        for mean in [0.01, 0.5, 3.0, 17.0, 50.0] {
            let s: f64 = (0..=200).map(|n| poisson_pmf(n, mean)).sum();
            assert!((s - 1.0).abs() < 1e-12, "mean {mean}: {s}");
        }
    }

    #[test]
    fn vector_truncation() {
        let pmf = pmf_vector(4.0);
        assert!(pmf.tail_mass < PMF_TAIL_TOLERANCE);
        let s: f64 = pmf.values.iter().sum();
        assert!((s - (1.0 - pmf.tail_mass)).abs() < 1e-9);
        assert!(pmf.values.iter().all(|&v| (0.0..=1.0).contains(&v)));

        let huge = pmf_vector(1e7);
        assert_eq!(huge.values.len(), PMF_MAX_N + 1);
        assert!(huge.tail_mass > 0.999);
    }

    #[test]
    fn tv_examples() {
        assert_eq!(total_variation(&[1.0], &[1.0, 0.0]), 0.0);
        assert!((total_variation(&[1.0], &[0.0, 1.0]) - 1.0).abs() < 1e-15);
        let emp = pmf_vector(1.3).values;
        assert!(total_variation_to_poisson(&emp, 1.3) < 1e-8);
        assert!(total_variation_to_poisson(&[1.0], 1e6) > 0.999);
    }

    #[test]
    fn support_window_holds_the_mass() {
        for mean in [0.2, 5.0, 400.0, 1e6] {
            let (lo, hi) = poisson_support(mean);
            let s: f64 = (lo..=hi).map(|n| poisson_pmf(n, mean)).sum();
            assert!((s - 1.0).abs() < 1e-6, "mean {mean}: {s}");
        }
    }
}
