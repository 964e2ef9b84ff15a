use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::SystemParams;

use super::trial::{CellTrialRecord, SelectionRule, TrialInputs, Window};

/// Trials per work unit. Fixed so the reduction tree does not depend on
/// the number of workers.
const CHUNK: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ablation {
    WithInterference,
    WithoutInterference,
}

/// Sample mean with its standard error `s / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorSummary {
    pub trials: u64,
    pub ablation: Ablation,
    /// Relative frequency of `n` selected UEs in the typical cell.
    pub pmf_empirical: Vec<f64>,
    pub mean_selected: Estimate,
    pub mean_cell_throughput: Estimate,
    /// `λ_B (1 - p̂_0)` times the mean cell throughput.
    pub mean_system_throughput: Estimate,
    pub active_bs_density: Estimate,
    pub overlap_probability: Estimate,
    pub mean_interference: Estimate,
    /// Diagnostic: UEs of any cell inside the typical circle.
    pub mean_users_in_circle: Estimate,
}

impl EstimatorSummary {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summary fields are TOML-representable")
    }
}

/// Both ablation arms of one campaign, computed on the same trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedSummary {
    pub with_interference: EstimatorSummary,
    pub without_interference: EstimatorSummary,
}

impl MatchedSummary {
    pub fn get(&self, ablation: Ablation) -> &EstimatorSummary {
        match ablation {
            Ablation::WithInterference => &self.with_interference,
            Ablation::WithoutInterference => &self.without_interference,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        let one = Moments { n: 1, sum: x, m2: 0.0 };
        *self = self.merge(&one);
    }

    fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    fn merge(&self, o: &Moments) -> Moments {
        let n = self.n + o.n;
        if self.n == 0 {
            return *o;
        }
        if o.n == 0 {
            return *self;
        }
        let delta = o.mean() - self.mean();
        Moments {
            n,
            sum: self.sum + o.sum,
            m2: self.m2 + o.m2 + delta * delta * (self.n as f64 * o.n as f64) / n as f64,
        }
    }

    fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    fn estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean(),
            std_error: if self.n < 2 {
                0.0
            } else {
                (self.variance() / self.n as f64).sqrt()
            },
        }
    }
}

/// Running statistics of `x` together with the nonempty-cell indicator.
#[derive(Debug, Clone, Copy, Default)]
struct Paired {
    x: Moments,
    z: Moments,
    /// Co-moment `Σ (x - x̄)(z - z̄)`.
    c: f64,
}

impl Paired {
    fn merge(&self, o: &Paired) -> Paired {
        let (na, nb) = (self.x.n, o.x.n);
        let n = na + nb;
        let c = if na == 0 || nb == 0 {
            self.c + o.c
        } else {
            let dx = o.x.mean() - self.x.mean();
            let dz = o.z.mean() - self.z.mean();
            self.c + o.c + dx * dz * (na as f64 * nb as f64) / n as f64
        };
        Paired {
            x: self.x.merge(&o.x),
            z: self.z.merge(&o.z),
            c,
        }
    }

    fn push(&mut self, x: f64, z: f64) {
        let one = Paired {
            x: Moments { n: 1, sum: x, m2: 0.0 },
            z: Moments { n: 1, sum: z, m2: 0.0 },
            c: 0.0,
        };
        *self = self.merge(&one);
    }

    /// `λ z̄ x̄` with a delta-method standard error.
    fn scaled_product(&self, lambda: f64) -> Estimate {
        let n = self.x.n as f64;
        let (xb, zb) = (self.x.mean(), self.z.mean());
        let mean = lambda * zb * xb;
        if self.x.n < 2 {
            return Estimate { mean, std_error: 0.0 };
        }
        let cov = self.c / (n - 1.0);
        let var = (xb * xb * self.z.variance() + zb * zb * self.x.variance() + 2.0 * xb * zb * cov) / n;
        Estimate {
            mean,
            std_error: lambda * var.max(0.0).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Accumulator {
    counts: Vec<u64>,
    with: Paired,
    without: Paired,
    selected: Moments,
    overlap: Moments,
    interference: Moments,
    in_circle: Moments,
}

impl Accumulator {
    fn push(&mut self, rec: &CellTrialRecord) {
        if self.counts.len() <= rec.n_selected {
            self.counts.resize(rec.n_selected + 1, 0);
        }
        self.counts[rec.n_selected] += 1;
        let z = (rec.n_selected > 0) as u8 as f64;
        self.with.push(rec.throughput(), z);
        self.without.push(rec.throughput_without_interference(), z);
        self.selected.push(rec.n_selected as f64);
        self.overlap.push(rec.circle_overlap as u8 as f64);
        self.interference.push(rec.i_inter);
        self.in_circle.push(rec.users_in_circle as f64);
    }

    fn merge(&self, o: &Accumulator) -> Accumulator {
        let len = self.counts.len().max(o.counts.len());
        let counts = (0..len)
            .map(|i| self.counts.get(i).unwrap_or(&0) + o.counts.get(i).unwrap_or(&0))
            .collect();
        Accumulator {
            counts,
            with: self.with.merge(&o.with),
            without: self.without.merge(&o.without),
            selected: self.selected.merge(&o.selected),
            overlap: self.overlap.merge(&o.overlap),
            interference: self.interference.merge(&o.interference),
            in_circle: self.in_circle.merge(&o.in_circle),
        }
    }

    fn summary(&self, ablation: Ablation, bs_density: f64) -> EstimatorSummary {
        let n = self.selected.n;
        let arm = match ablation {
            Ablation::WithInterference => &self.with,
            Ablation::WithoutInterference => &self.without,
        };
        let nonempty = arm.z.estimate();
        EstimatorSummary {
            trials: n,
            ablation,
            pmf_empirical: self.counts.iter().map(|&c| c as f64 / n as f64).collect(),
            mean_selected: self.selected.estimate(),
            mean_cell_throughput: arm.x.estimate(),
            mean_system_throughput: arm.scaled_product(bs_density),
            active_bs_density: Estimate {
                mean: bs_density * nonempty.mean,
                std_error: bs_density * nonempty.std_error,
            },
            overlap_probability: self.overlap.estimate(),
            mean_interference: self.interference.estimate(),
            mean_users_in_circle: self.in_circle.estimate(),
        }
    }

    fn matched(&self, bs_density: f64) -> MatchedSummary {
        MatchedSummary {
            with_interference: self.summary(Ablation::WithInterference, bs_density),
            without_interference: self.summary(Ablation::WithoutInterference, bs_density),
        }
    }
}

/// Reduces in a balanced binary tree over the slice order.
fn pairwise<T: Clone, F: Fn(&T, &T) -> T + Copy>(items: &[T], merge: F) -> Option<T> {
    match items.len() {
        0 => None,
        1 => Some(items[0].clone()),
        n => {
            let (a, b) = items.split_at(n / 2);
            Some(merge(&pairwise(a, merge)?, &pairwise(b, merge)?))
        }
    }
}

/// A batch of independent trials keyed by `(master_seed, trial index)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Campaign {
    pub trials: u64,
    pub master_seed: u64,
    pub window: Window,
}

impl Campaign {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        Campaign {
            trials,
            master_seed,
            window: Window::Auto,
        }
    }

    pub fn with_window(self, window: Window) -> Self {
        Campaign { window, ..self }
    }

    pub fn run(&self, p: &SystemParams, rule: SelectionRule, ablation: Ablation) -> Result<EstimatorSummary> {
        Ok(self.run_matched(p, rule)?.get(ablation).clone())
    }

    pub fn run_matched(&self, p: &SystemParams, rule: SelectionRule) -> Result<MatchedSummary> {
        Ok(self.run_variants(&[(*p, rule)])?.remove(0))
    }

    /// Runs several parameter sets on the same sampled trials. All variants
    /// must share `λ_B`, `λ_U` and `α`; they may differ in `T`, `E_th`,
    /// `β`, `σ`, `a`, `P_S` and the selection rule.
    pub fn run_variants(&self, variants: &[(SystemParams, SelectionRule)]) -> Result<Vec<MatchedSummary>> {
        let Some((base, _)) = variants.first() else {
            return Ok(Vec::new());
        };
        if self.trials == 0 {
            return Err(Error::Config("campaign needs at least one trial".into()));
        }
        for (p, _) in variants {
            if p.bs_density() != base.bs_density()
                || p.ue_density() != base.ue_density()
                || p.path_loss_exponent() != base.path_loss_exponent()
            {
                return Err(Error::Config(
                    "variants of one campaign must share lambda_B, lambda_U and alpha".into(),
                ));
            }
        }
        let chunks = self.trials.div_ceil(CHUNK);
        let partials: Vec<Vec<Accumulator>> = (0..chunks)
            .into_par_iter()
            .map(|chunk| -> Result<Vec<Accumulator>> {
                let mut acc = vec![Accumulator::default(); variants.len()];
                let end = ((chunk + 1) * CHUNK).min(self.trials);
                for index in chunk * CHUNK..end {
                    let wrap = |e| Error::Trial {
                        index,
                        source: Box::new(e),
                    };
                    let inputs = TrialInputs::sample(base, self.window, self.master_seed, index).map_err(wrap)?;
                    for (slot, (p, rule)) in acc.iter_mut().zip(variants) {
                        slot.push(&inputs.evaluate(p, *rule).map_err(wrap)?);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        Ok((0..variants.len())
            .map(|v| {
                let column: Vec<Accumulator> = partials.iter().map(|c| c[v].clone()).collect();
                pairwise(&column, |a, b| a.merge(b))
                    .expect("at least one chunk")
                    .matched(base.bs_density())
            })
            .collect())
    }

    /// Per-trial records, for debugging dumps.
    pub fn records(&self, p: &SystemParams, rule: SelectionRule) -> Result<Vec<CellTrialRecord>> {
        (0..self.trials)
            .into_par_iter()
            .map(|index| super::trial::run_trial(p, rule, self.window, self.master_seed, index))
            .collect()
    }
}

/// Runs `trials` slots with the automatic window.
pub fn run_campaign(
    p: &SystemParams,
    trials: u64,
    rule: SelectionRule,
    ablation: Ablation,
    master_seed: u64,
) -> Result<EstimatorSummary> {
    Campaign::new(trials, master_seed).run(p, rule, ablation)
}

/// Writes one row per trial: index, counts, interference and throughput.
pub fn write_records<W: std::io::Write>(records: &[CellTrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "trial",
        "n_candidates",
        "n_selected",
        "i_inter_w",
        "throughput",
        "throughput_without_interference",
        "circle_overlap",
        "users_in_circle",
    ])?;
    for (i, r) in records.iter().enumerate() {
        w.write_record([
            i.to_string(),
            r.n_candidates.to_string(),
            r.n_selected.to_string(),
            r.i_inter.to_string(),
            r.throughput().to_string(),
            r.throughput_without_interference().to_string(),
            r.circle_overlap.to_string(),
            r.users_in_circle.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
