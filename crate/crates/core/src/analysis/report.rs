use serde::Serialize;

use crate::error::Result;
use crate::params::SystemParams;

use super::pmf::{pmf_vector, PMF_MAX_N};
use super::radius::{RadiusMode, RadiusOutcome, SelectionRadius};
use super::rates::{cell_throughput, system_throughput, RateMode};

/// Closed-form outputs for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticReport {
    pub radius_mode: RadiusMode,
    /// Absent when the radius is undefined.
    pub radius_km: Option<f64>,
    pub undefined_reason: Option<String>,
    pub rate_mode: RateMode,
    pub interference_mean: f64,
    pub mean_users: f64,
    /// `P(N > n_max)`; exceeds the truncation target only when the
    /// vector hit its length cap.
    pub pmf_tail_mass: f64,
    pub pmf: Vec<f64>,
    pub active_bs_density: f64,
    pub cell_throughput: f64,
    pub system_throughput: f64,
}

pub fn analytic_report(
    p: &SystemParams,
    radius: &SelectionRadius,
    i_inter_mean: f64,
    rate_mode: RateMode,
) -> Result<AnalyticReport> {
    let r = radius.require()?;
    let mean = p.ue_density() * std::f64::consts::PI * r * r;
    let pmf = pmf_vector(mean);
    debug_assert!(pmf.values.len() <= PMF_MAX_N + 1);
    let r_tc = cell_throughput(p, radius, i_inter_mean, rate_mode)?;
    let sys = system_throughput(p, r_tc, r);
    Ok(AnalyticReport {
        radius_mode: radius.mode,
        radius_km: Some(r),
        undefined_reason: match radius.outcome {
            RadiusOutcome::Defined(_) => None,
            RadiusOutcome::Undefined(reason) => Some(reason.to_string()),
        },
        rate_mode,
        interference_mean: i_inter_mean,
        mean_users: mean,
        pmf_tail_mass: pmf.tail_mass,
        pmf: pmf.values,
        active_bs_density: sys.active_bs_density,
        cell_throughput: r_tc,
        system_throughput: sys.area_throughput,
    })
}

impl AnalyticReport {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report fields are TOML-representable")
    }
}
