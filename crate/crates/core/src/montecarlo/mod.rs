//! Monte Carlo engine: full two-phase slots over sampled PPP worlds and the
//! estimators built on them.

mod campaign;
mod overlap;
mod shot_noise;
mod trial;

pub use campaign::{
    run_campaign, write_records, Ablation, Campaign, Estimate, EstimatorSummary, MatchedSummary,
};
pub use overlap::{overlap_closed_form, overlap_probability, OVERLAP_MAX_HALF_SIDE_KM};
pub use shot_noise::{excess_interference_draws, harvest_success_frequency, sample_estimate};
pub use trial::{
    run_trial, CellTrialRecord, SelectionRule, TrialInputs, Window, MIN_AUTO_HALF_SIDE_KM,
};
