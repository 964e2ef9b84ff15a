use std::cmp::Ordering;

use rand_chacha::ChaCha8Rng;

use crate::analysis::sic_rates;
use crate::channel::{clamped_path_loss, draw_fading, fading};
use crate::error::{Error, Result};
use crate::geometry::{cell_extent_bound, nearest_neighbor_distance, NetworkRealization, Point};
use crate::params::SystemParams;
use crate::streams::{stream, Purpose};

/// Which UEs of a cell take part in the uplink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionRule {
    /// UEs within this distance (km) of their BS.
    RadiusCircle(f64),
    /// UEs whose realized harvested energy reaches `E_th`.
    RealizedEnergy,
}

impl SelectionRule {
    pub fn radius(self) -> Option<f64> {
        match self {
            SelectionRule::RadiusCircle(r) => Some(r),
            SelectionRule::RealizedEnergy => None,
        }
    }
}

/// Simulation window around the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// `max(2 km, 8 / sqrt(λ_B))` half side.
    Auto,
    HalfSide(f64),
}

pub const MIN_AUTO_HALF_SIDE_KM: f64 = 2.0;
const AUTO_SPACINGS: f64 = 8.0;

impl Window {
    pub fn half_side(self, bs_density: f64) -> f64 {
        match self {
            Window::Auto => MIN_AUTO_HALF_SIDE_KM.max(AUTO_SPACINGS / bs_density.sqrt()),
            Window::HalfSide(h) => h,
        }
    }
}

/// Outcome of one slot in the typical cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellTrialRecord {
    pub n_candidates: usize,
    pub n_selected: usize,
    /// Indices into the realization's UE list, in decode order.
    pub selected: Vec<usize>,
    /// Distances (km) of the selected UEs to the typical BS.
    pub distances: Vec<f64>,
    /// Uplink fading power gains of the selected UEs.
    pub uplink_gains: Vec<f64>,
    /// Harvested energy (J) of the selected UEs.
    pub harvested: Vec<f64>,
    /// Received powers (W) at the typical BS, nonincreasing.
    pub received_powers: Vec<f64>,
    /// Uplink interference (W) from the selected UEs of every other cell.
    pub i_inter: f64,
    pub rates: Vec<f64>,
    /// Rates recomputed with `i_inter` forced to zero.
    pub rates_without_interference: Vec<f64>,
    /// The typical BS has another BS closer than twice the selection
    /// radius. Always false under [`SelectionRule::RealizedEnergy`].
    pub circle_overlap: bool,
    /// UEs of any cell within the selection radius of the typical BS.
    pub users_in_circle: usize,
}

impl CellTrialRecord {
    pub fn throughput(&self) -> f64 {
        self.rates.iter().sum()
    }

    pub fn throughput_without_interference(&self) -> f64 {
        self.rates_without_interference.iter().sum()
    }
}

/// UE of another cell, as seen by the typical BS.
#[derive(Debug, Clone, Copy)]
struct Interferer {
    ue: usize,
    own_distance: f64,
    /// `g r^-α` towards the typical BS.
    gain: f64,
}

/// Everything a trial draws before the parameters that vary within a
/// sweep (`T`, `E_th`, the selection radius) come into play. Depends only
/// on `λ_B`, `λ_U`, `α`, the window and `(seed, index)`.
#[derive(Debug, Clone)]
pub struct TrialInputs {
    pub index: u64,
    pub realization: NetworkRealization,
    /// Uplink gain of every UE towards the typical BS.
    pub uplink_gains: Vec<f64>,
    alpha: f64,
    typical: usize,
    typical_offset: f64,
    extent: f64,
    neighbor_distance: f64,
    /// Typical-cell UEs sorted by `g r^-α`, strongest first.
    candidates: Vec<usize>,
    candidate_distance: Vec<f64>,
    candidate_gain: Vec<f64>,
    /// `Σ_i h_i d_i^-α` over every BS in the window.
    candidate_harvest: Vec<f64>,
    /// Other-cell UEs sorted by distance to their own BS.
    interferers: Vec<Interferer>,
    /// `prefix[k]` sums the gains of the first `k` interferers.
    prefix: Vec<f64>,
    /// Distances of all UEs to the typical BS, ascending.
    all_distances: Vec<f64>,
    harvest_rng: ChaCha8Rng,
}

impl TrialInputs {
    /// Samples the realization and the fading of trial `index`.
    pub fn sample(p: &SystemParams, window: Window, master_seed: u64, index: u64) -> Result<Self> {
        let half = window.half_side(p.bs_density());
        let realization = NetworkRealization::sample(
            p.bs_density(),
            p.ue_density(),
            2.0 * half,
            &mut stream(master_seed, Purpose::BaseStations, index),
            &mut stream(master_seed, Purpose::Users, index),
        )?;
        let gains = draw_fading(
            &mut stream(master_seed, Purpose::UplinkFading, index),
            realization.ue_points.len(),
        );
        Self::from_parts(p.path_loss_exponent(), realization, gains, master_seed, index)
    }

    /// Builds trial inputs from a given realization and uplink gains; the
    /// harvest fading is still drawn from `(master_seed, index)`.
    pub fn from_parts(
        alpha: f64,
        realization: NetworkRealization,
        uplink_gains: Vec<f64>,
        master_seed: u64,
        index: u64,
    ) -> Result<Self> {
        assert_eq!(uplink_gains.len(), realization.ue_points.len());
        let typical = realization.typical_cell()?;
        let bs = &realization.bs_points;
        let centre = bs[typical];
        let gain_to_typical =
            |u: usize| uplink_gains[u] * clamped_path_loss(realization.ue_points[u].dist(centre), alpha);

        let mut candidates = realization.cell_members(typical);
        let gain_of: Vec<f64> = candidates.iter().map(|&u| gain_to_typical(u)).collect();
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        order.sort_by(|&a, &b| {
            gain_of[b]
                .partial_cmp(&gain_of[a])
                .unwrap_or(Ordering::Equal)
                .then(candidates[a].cmp(&candidates[b]))
        });
        candidates = order.iter().map(|&i| candidates[i]).collect();
        let candidate_gain: Vec<f64> = order.iter().map(|&i| gain_of[i]).collect();
        let candidate_distance: Vec<f64> = candidates
            .iter()
            .map(|&u| realization.ue_points[u].dist(centre))
            .collect();

        let mut harvest_rng = stream(master_seed, Purpose::HarvestFading, index);
        let candidate_harvest = candidates
            .iter()
            .map(|&u| harvest_sum(realization.ue_points[u], bs, alpha, &mut harvest_rng))
            .collect();

        let mut interferers: Vec<Interferer> = realization
            .association
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b != typical)
            .map(|(u, &b)| Interferer {
                ue: u,
                own_distance: realization.ue_points[u].dist(bs[b]),
                gain: gain_to_typical(u),
            })
            .collect();
        interferers.sort_unstable_by(|a, b| a.own_distance.total_cmp(&b.own_distance).then(a.ue.cmp(&b.ue)));
        let mut prefix = Vec::with_capacity(interferers.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for i in &interferers {
            acc += i.gain;
            prefix.push(acc);
        }
        let mut all_distances: Vec<f64> = realization.ue_points.iter().map(|u| u.dist(centre)).collect();
        all_distances.sort_unstable_by(f64::total_cmp);

        Ok(TrialInputs {
            index,
            alpha,
            typical,
            typical_offset: centre.norm(),
            extent: cell_extent_bound(bs, typical),
            neighbor_distance: nearest_neighbor_distance(bs, typical),
            candidates,
            candidate_distance,
            candidate_gain,
            candidate_harvest,
            interferers,
            prefix,
            all_distances,
            harvest_rng,
            uplink_gains,
            realization,
        })
    }

    pub fn typical_bs(&self) -> usize {
        self.typical
    }

    /// Same trial with every point outside the centred square of half side
    /// `half` removed. Point order and uplink gains are kept, so two
    /// windows of one trial differ only by the removed points.
    pub fn restrict(&self, half: f64, master_seed: u64) -> Result<Self> {
        let inside = |p: &Point| p.x.abs() <= half && p.y.abs() <= half;
        let bs: Vec<Point> = self.realization.bs_points.iter().copied().filter(inside).collect();
        let (ue, gains): (Vec<Point>, Vec<f64>) = self
            .realization
            .ue_points
            .iter()
            .zip(&self.uplink_gains)
            .filter(|(p, _)| inside(p))
            .map(|(p, g)| (*p, *g))
            .unzip();
        let realization = NetworkRealization::new(2.0 * half, bs, ue)?;
        Self::from_parts(self.alpha, realization, gains, master_seed, self.index)
    }

    /// Runs the harvest, selection and uplink phases for `p`, which must
    /// share `λ_B`, `λ_U` and `α` with the parameters the inputs were
    /// sampled for.
    pub fn evaluate(&self, p: &SystemParams, rule: SelectionRule) -> Result<CellTrialRecord> {
        debug_assert_eq!(p.path_loss_exponent(), self.alpha);
        let half = 0.5 * self.realization.side;
        let reach = match rule {
            SelectionRule::RadiusCircle(r) => r.min(self.extent),
            SelectionRule::RealizedEnergy => self.extent,
        };
        if !(self.typical_offset + reach <= half) {
            return Err(Error::GuardViolation {
                extent_km: reach,
                offset_km: self.typical_offset,
                half_side_km: half,
            });
        }

        let c = p.normalized_harvest_threshold();
        let keep: Vec<usize> = (0..self.candidates.len())
            .filter(|&k| match rule {
                SelectionRule::RadiusCircle(r) => self.candidate_distance[k] <= r,
                SelectionRule::RealizedEnergy => self.candidate_harvest[k] >= c,
            })
            .collect();

        let pu = p.uplink_power();
        let interference = match rule {
            SelectionRule::RadiusCircle(r) => {
                let k = self.interferers.partition_point(|i| i.own_distance <= r);
                self.prefix[k]
            }
            SelectionRule::RealizedEnergy => self.realized_energy_interference(c),
        };
        let i_inter = pu * interference;
        let received: Vec<f64> = keep.iter().map(|&k| pu * self.candidate_gain[k]).collect();
        let sigma = p.noise_power();
        let t = p.harvest_fraction();
        let rates = sic_rates(&received, i_inter, sigma, t)?;
        let rates_without_interference = sic_rates(&received, 0.0, sigma, t)?;

        let (circle_overlap, users_in_circle) = match rule {
            SelectionRule::RadiusCircle(r) => (
                self.neighbor_distance < 2.0 * r,
                self.all_distances.partition_point(|&d| d <= r),
            ),
            SelectionRule::RealizedEnergy => (false, 0),
        };

        Ok(CellTrialRecord {
            n_candidates: self.candidates.len(),
            n_selected: keep.len(),
            selected: keep.iter().map(|&k| self.candidates[k]).collect(),
            distances: keep.iter().map(|&k| self.candidate_distance[k]).collect(),
            uplink_gains: keep.iter().map(|&k| self.uplink_gains[self.candidates[k]]).collect(),
            harvested: keep
                .iter()
                .map(|&k| p.harvested_energy(self.candidate_harvest[k]))
                .collect(),
            received_powers: received,
            i_inter,
            rates,
            rates_without_interference,
            circle_overlap,
            users_in_circle,
        })
    }

    /// Interference from other-cell UEs whose own harvest clears `c`.
    /// Terms are added own BS first, then in BS index order, and a UE
    /// stops as soon as its partial sum reaches the threshold.
    fn realized_energy_interference(&self, c: f64) -> f64 {
        let mut rng = self.harvest_rng.clone();
        let bs = &self.realization.bs_points;
        let mut total = 0.0;
        let mut by_index: Vec<&Interferer> = self.interferers.iter().collect();
        by_index.sort_by_key(|i| i.ue);
        for i in by_index {
            let u = self.realization.ue_points[i.ue];
            let own = self.realization.association[i.ue];
            let mut sum = fading(&mut rng) * clamped_path_loss(i.own_distance, self.alpha);
            let mut b = 0;
            while sum < c && b < bs.len() {
                if b != own {
                    sum += fading(&mut rng) * clamped_path_loss(u.dist(bs[b]), self.alpha);
                }
                b += 1;
            }
            if sum >= c {
                total += i.gain;
            }
        }
        total
    }
}

/// `Σ_i h_i d_i^-α` at `ue` over every BS, in BS index order.
fn harvest_sum(ue: Point, bs: &[Point], alpha: f64, rng: &mut ChaCha8Rng) -> f64 {
    bs.iter()
        .map(|b| fading(rng) * clamped_path_loss(ue.dist(*b), alpha))
        .sum()
}

/// One full slot of trial `index` under `rule`.
pub fn run_trial(
    p: &SystemParams,
    rule: SelectionRule,
    window: Window,
    master_seed: u64,
    index: u64,
) -> Result<CellTrialRecord> {
    TrialInputs::sample(p, window, master_seed, index)
        .and_then(|inputs| inputs.evaluate(p, rule))
        .map_err(|e| Error::Trial {
            index,
            source: Box::new(e),
        })
}
