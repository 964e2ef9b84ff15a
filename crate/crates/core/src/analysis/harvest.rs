use std::f64::consts::PI;

use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;

use crate::channel::{clamped_path_loss, fading, MIN_LINK_DISTANCE_KM};
use crate::params::SystemParams;
use crate::streams::{stream, Purpose};

use super::radius::RadiusMode;

/// Mean of `Σ h_i r_i^-α` over the BSs beyond the nearest one, given the
/// nearest sits at `r1`: `2πλ r1^(2-α) / (α-2)`.
pub fn campbell_mean_excess_interference(r1: f64, bs_density: f64, alpha: f64) -> f64 {
    2.0 * PI * bs_density * r1.powf(2.0 - alpha) / (alpha - 2.0)
}

/// How the far field beyond the explicitly sampled BSs is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailModel {
    /// Ignore BSs beyond the sampled region.
    Drop,
    /// Gaussian with the exact shot-noise mean and variance of the region.
    MomentMatched,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericBudget {
    pub trials: u32,
    pub seed: u64,
    /// Expected number of BSs sampled explicitly beyond the nearest one.
    pub exact_points: f64,
    pub tail: TailModel,
}

impl Default for NumericBudget {
    fn default() -> Self {
        NumericBudget {
            trials: 4000,
            seed: 0x5eed_4a11,
            exact_points: 1024.0,
            tail: TailModel::MomentMatched,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HarvestModel {
    PaperClosedForm,
    CorrectedClosedForm,
    NumericExact(NumericBudget),
}

impl HarvestModel {
    pub fn from_mode(mode: RadiusMode, budget: NumericBudget) -> Self {
        match mode {
            RadiusMode::PaperClosedForm => HarvestModel::PaperClosedForm,
            RadiusMode::CorrectedClosedForm => HarvestModel::CorrectedClosedForm,
            RadiusMode::NumericExact => HarvestModel::NumericExact(budget),
        }
    }

    pub fn mode(&self) -> RadiusMode {
        match self {
            HarvestModel::PaperClosedForm => RadiusMode::PaperClosedForm,
            HarvestModel::CorrectedClosedForm => RadiusMode::CorrectedClosedForm,
            HarvestModel::NumericExact(_) => RadiusMode::NumericExact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarvestProbability {
    pub probability: f64,
    /// Zero for the closed forms.
    pub std_error: f64,
    /// Set when the paper closed form exceeded one and was clamped.
    pub clamped: bool,
}

impl HarvestProbability {
    fn exact(probability: f64) -> Self {
        HarvestProbability {
            probability,
            std_error: 0.0,
            clamped: false,
        }
    }
}

/// `P(E_H >= E_th | nearest BS at r1)` under the chosen model.
pub fn harvest_success_prob(r1: f64, p: &SystemParams, model: &HarvestModel) -> HarvestProbability {
    let c = p.normalized_harvest_threshold();
    let alpha = p.path_loss_exponent();
    let k = 2.0 * PI * p.bs_density() / (alpha - 2.0);
    match model {
        HarvestModel::PaperClosedForm => {
            let exponent = -c + k * r1 * r1;
            if exponent > 0.0 {
                HarvestProbability {
                    probability: 1.0,
                    std_error: 0.0,
                    clamped: true,
                }
            } else {
                HarvestProbability::exact(exponent.exp())
            }
        }
        HarvestModel::CorrectedClosedForm => {
            let threshold = c * r1.powf(alpha) - k * r1 * r1;
            if threshold > 0.0 {
                HarvestProbability::exact((-threshold).exp())
            } else {
                HarvestProbability::exact(1.0)
            }
        }
        HarvestModel::NumericExact(budget) => {
            let (probability, std_error) = ConditionalHarvest::new(p, *budget).success(r1);
            HarvestProbability {
                probability,
                std_error,
                clamped: false,
            }
        }
    }
}

/// Monte Carlo of the harvested sum conditioned on the nearest BS distance.
///
/// The remaining BSs form a PPP outside the disk of radius `r1`. They are
/// generated in order of distance as `r_k² = r1² + Γ_k/(λπ)` with `Γ_k` the
/// arrival times of a unit-rate Poisson process, up to an expected
/// `exact_points` BSs. Trial `j` always consumes the same random numbers
/// whatever `r1` is, so the estimated probability is exactly nonincreasing
/// in `r1` and bisection on it is well posed.
pub struct ConditionalHarvest {
    threshold: f64,
    alpha: f64,
    lambda_pi: f64,
    bs_density: f64,
    budget: NumericBudget,
}

impl ConditionalHarvest {
    pub fn new(p: &SystemParams, budget: NumericBudget) -> Self {
        ConditionalHarvest {
            threshold: p.normalized_harvest_threshold(),
            alpha: p.path_loss_exponent(),
            lambda_pi: p.bs_density() * PI,
            bs_density: p.bs_density(),
            budget,
        }
    }

    fn gain_sq(&self, r2: f64) -> f64 {
        let r2 = r2.max(MIN_LINK_DISTANCE_KM * MIN_LINK_DISTANCE_KM);
        if self.alpha == 4.0 {
            1.0 / (r2 * r2)
        } else {
            r2.powf(-0.5 * self.alpha)
        }
    }

    /// Normalized received sum `Σ h_i r_i^-α` of trial `trial` at `r1`.
    pub fn sample_sum(&self, trial: u64, r1: f64) -> f64 {
        let mut rng = stream(self.budget.seed, Purpose::ConditionalHarvest, trial);
        let mut sum = fading(&mut rng) * clamped_path_loss(r1, self.alpha);
        let area = self.budget.exact_points / self.lambda_pi;
        let r1_sq = r1 * r1;
        let mut offset = 0.0;
        loop {
            let gap: f64 = Exp1.sample(&mut rng);
            offset += gap / self.lambda_pi;
            if offset > area {
                break;
            }
            sum += fading(&mut rng) * self.gain_sq(r1_sq + offset);
        }
        if self.budget.tail == TailModel::MomentMatched {
            let outer_sq = r1_sq + area;
            let a = self.alpha;
            let mean = 2.0 * PI * self.bs_density * outer_sq.powf(1.0 - 0.5 * a) / (a - 2.0);
            // E[h²] = 2 for unit exponential gains
            let var = 4.0 * PI * self.bs_density * outer_sq.powf(1.0 - a) / (2.0 * a - 2.0);
            let z: f64 = StandardNormal.sample(&mut rng);
            sum += (mean + z * var.sqrt()).max(0.0);
        }
        sum
    }

    /// Estimated success probability and its binomial standard error.
    pub fn success(&self, r1: f64) -> (f64, f64) {
        let n = self.budget.trials.max(1) as u64;
        let hits: u64 = (0..n)
            .into_par_iter()
            .map(|j| (self.sample_sum(j, r1) >= self.threshold) as u64)
            .sum();
        let p = hits as f64 / n as f64;
        (p, (p * (1.0 - p) / n as f64).sqrt())
    }
}
