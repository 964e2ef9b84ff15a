//! Closed-form predictions: selection radius, user-count PMF, SIC rates
//! and cell/system throughput, plus the numeric harvest-probability
//! estimator the radius bisection can run on.

mod harvest;
mod optimize;
mod pmf;
pub mod quadrature;
mod radius;
mod rates;
mod report;

pub use harvest::{
    campbell_mean_excess_interference, harvest_success_prob, ConditionalHarvest,
    HarvestModel, HarvestProbability, NumericBudget, TailModel,
};
pub use optimize::{grid_argmax, optimal_harvest_fraction, parabolic_peak, Optimum};
pub use pmf::{
    pmf_n, pmf_vector, poisson_pmf, total_variation, total_variation_to_poisson, PoissonPmf,
    PMF_MAX_N, PMF_TAIL_TOLERANCE,
};
pub use radius::{
    paper_radicand, selection_radius, RadiusMode, RadiusOutcome, SelectionRadius,
    UndefinedReason, MAX_BRACKET_KM, RADIUS_TOLERANCE_KM,
};
pub use rates::{
    cell_throughput, mean_received_power, sic_rates, sum_rate, system_throughput, RateMode,
    SystemThroughput,
};
pub use report::{analytic_report, AnalyticReport};
