use serde::Serialize;

use crate::analysis::{
    analytic_report, cell_throughput, parabolic_peak, pmf_vector, selection_radius,
    system_throughput, total_variation_to_poisson, AnalyticReport, HarvestModel, RadiusMode,
    RateMode, SelectionRadius,
};
use crate::error::Result;
use crate::montecarlo::{overlap_probability, Campaign, EstimatorSummary, MatchedSummary, SelectionRule};
use crate::params::SystemParams;

use super::config::SweepSpec;

/// Smallest number of PMF rows written per density.
pub const PMF_MIN_BINS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusRow {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "lambda_B")]
    pub lambda_b: f64,
    pub r_paper_km: Option<f64>,
    pub r_corrected_km: Option<f64>,
    pub r_exact_km: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfRow {
    #[serde(rename = "lambda_B")]
    pub lambda_b: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub radius_mode: &'static str,
    pub radius_km: Option<f64>,
    pub n: usize,
    pub analytic: Option<f64>,
    pub empirical: Option<f64>,
    pub tv_distance: Option<f64>,
    pub overlap_probability: Option<f64>,
    pub overlap_std_error: Option<f64>,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThroughputRow {
    /// `grid`, `optimum` (empirical curve) or `optimum_analytic`.
    pub row_kind: &'static str,
    #[serde(rename = "lambda_B")]
    pub lambda_b: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub radius_km: Option<f64>,
    pub analytic_linear: Option<f64>,
    pub analytic_log: Option<f64>,
    pub empirical: Option<f64>,
    pub empirical_std_error: Option<f64>,
    pub active_bs_density: Option<f64>,
    pub mean_interference_w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationRow {
    #[serde(rename = "lambda_B")]
    pub lambda_b: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub radius_km: Option<f64>,
    pub with_interference: Option<f64>,
    pub with_std_error: Option<f64>,
    pub without_interference: Option<f64>,
    pub without_std_error: Option<f64>,
    /// Without over with.
    pub ratio: Option<f64>,
    pub analytic_with: Option<f64>,
    pub analytic_without: Option<f64>,
}

/// Rows of one experiment, in sweep order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<R> {
    pub spec: SweepSpec,
    pub rows: Vec<R>,
}

fn radius_for(p: &SystemParams, spec: &SweepSpec, mode: RadiusMode) -> SelectionRadius {
    selection_radius(p, &HarvestModel::from_mode(mode, spec.numeric))
}

/// Selection radius in every mode against `λ_B`, one block per `T`.
pub fn experiment_radius_vs_density(spec: &SweepSpec) -> Result<SweepResult<RadiusRow>> {
    let mut rows = Vec::new();
    for &t in &spec.series {
        for &lambda in &spec.values {
            let p = spec.params_at(lambda, t)?;
            log::info!("radius: T {t}, lambda_B {lambda}");
            let r = |m| radius_for(&p, spec, m).km();
            rows.push(RadiusRow {
                t,
                lambda_b: lambda,
                r_paper_km: r(RadiusMode::PaperClosedForm),
                r_corrected_km: r(RadiusMode::CorrectedClosedForm),
                r_exact_km: r(RadiusMode::NumericExact),
            });
        }
    }
    Ok(SweepResult { spec: spec.clone(), rows })
}

/// Analytic and simulated outcome at one `(λ_B, T)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfPoint {
    pub lambda_b: f64,
    pub t: f64,
    pub radius: SelectionRadius,
    pub analytic: Option<AnalyticReport>,
    pub empirical: Option<EstimatorSummary>,
    pub tv_distance: Option<f64>,
    pub overlap: Option<crate::montecarlo::Estimate>,
}

/// Typical-cell user-count PMF against the Poisson PMF of the circle.
pub fn pmf_points(spec: &SweepSpec) -> Result<Vec<PmfPoint>> {
    let mut out = Vec::new();
    for &t in &spec.series {
        for &lambda in &spec.values {
            log::info!("pmf: T {t}, lambda_B {lambda}");
            let p = spec.params_at(lambda, t)?;
            let radius = radius_for(&p, spec, spec.radius_mode);
            let point = match radius.km() {
                None => PmfPoint {
                    lambda_b: lambda,
                    t,
                    radius,
                    analytic: None,
                    empirical: None,
                    tv_distance: None,
                    overlap: None,
                },
                Some(r) => {
                    let campaign = Campaign::new(spec.trials, spec.master_seed).with_window(spec.window);
                    let summary = campaign
                        .run_matched(&p, SelectionRule::RadiusCircle(r))?
                        .with_interference;
                    let report = analytic_report(
                        &p,
                        &radius,
                        summary.mean_interference.mean,
                        spec.rate_mode,
                    )?;
                    let tv = total_variation_to_poisson(&summary.pmf_empirical, report.mean_users);
                    PmfPoint {
                        lambda_b: lambda,
                        t,
                        radius,
                        analytic: Some(report),
                        tv_distance: Some(tv),
                        overlap: Some(overlap_probability(&p, r, spec.trials, spec.master_seed)),
                        empirical: Some(summary),
                    }
                }
            };
            out.push(point);
        }
    }
    Ok(out)
}

pub fn pmf_rows(spec: &SweepSpec, points: &[PmfPoint]) -> Vec<PmfRow> {
    let mut rows = Vec::new();
    for pt in points {
        let empirical = pt.empirical.as_ref().map(|s| s.pmf_empirical.as_slice()).unwrap_or(&[]);
        let analytic = pt.analytic.as_ref().map(|a| pmf_vector(a.mean_users));
        let bins = PMF_MIN_BINS.max(empirical.len());
        for n in 0..bins {
            rows.push(PmfRow {
                lambda_b: pt.lambda_b,
                t: pt.t,
                radius_mode: spec.radius_mode.label(),
                radius_km: pt.radius.km(),
                n,
                analytic: analytic
                    .as_ref()
                    .map(|a| a.values.get(n).copied().unwrap_or(0.0)),
                empirical: pt
                    .empirical
                    .as_ref()
                    .map(|_| empirical.get(n).copied().unwrap_or(0.0)),
                tv_distance: pt.tv_distance,
                overlap_probability: pt.overlap.map(|o| o.mean),
                overlap_std_error: pt.overlap.map(|o| o.std_error),
                trials: spec.trials,
            });
        }
    }
    rows
}

pub fn experiment_pmf(spec: &SweepSpec) -> Result<SweepResult<PmfRow>> {
    let points = pmf_points(spec)?;
    Ok(SweepResult {
        spec: spec.clone(),
        rows: pmf_rows(spec, &points),
    })
}

/// One grid point of a throughput curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputPoint {
    pub t: f64,
    pub params: SystemParams,
    pub radius: SelectionRadius,
    /// Absent when the radius is undefined.
    pub matched: Option<MatchedSummary>,
}

/// One curve: every grid `T` at a fixed `λ_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputCurve {
    pub lambda_b: f64,
    pub points: Vec<ThroughputPoint>,
}

/// Runs the matched campaigns behind the throughput and ablation tables.
/// Every `T` of a curve is evaluated on the same sampled trials.
pub fn throughput_curves(spec: &SweepSpec) -> Result<Vec<ThroughputCurve>> {
    let mut curves = Vec::new();
    for &lambda in &spec.series {
        log::info!("throughput: lambda_B {lambda}, {} grid points", spec.values.len());
        let mut points: Vec<ThroughputPoint> = spec
            .values
            .iter()
            .map(|&t| {
                let params = spec.params_at(t, lambda)?;
                Ok(ThroughputPoint {
                    t,
                    radius: radius_for(&params, spec, spec.radius_mode),
                    params,
                    matched: None,
                })
            })
            .collect::<Result<_>>()?;
        let defined: Vec<usize> = (0..points.len()).filter(|&i| points[i].radius.km().is_some()).collect();
        let variants: Vec<_> = defined
            .iter()
            .map(|&i| {
                let pt = &points[i];
                (pt.params, SelectionRule::RadiusCircle(pt.radius.km().expect("defined")))
            })
            .collect();
        let summaries = Campaign::new(spec.trials, spec.master_seed)
            .with_window(spec.window)
            .run_variants(&variants)?;
        for (i, s) in defined.into_iter().zip(summaries) {
            points[i].matched = Some(s);
        }
        curves.push(ThroughputCurve { lambda_b: lambda, points });
    }
    Ok(curves)
}

/// Analytic `R_ts` at a point, using the simulated mean interference.
fn analytic_at(pt: &ThroughputPoint, i_inter: f64, mode: RateMode) -> Option<f64> {
    let r = pt.radius.km()?;
    let r_tc = cell_throughput(&pt.params, &pt.radius, i_inter, mode).ok()?;
    Some(system_throughput(&pt.params, r_tc, r).area_throughput)
}

pub fn throughput_rows(spec: &SweepSpec, curves: &[ThroughputCurve]) -> Vec<ThroughputRow> {
    let mut rows = Vec::new();
    for curve in curves {
        let grid: Vec<f64> = curve.points.iter().map(|p| p.t).collect();
        let mut empirical = Vec::new();
        let mut analytic = Vec::new();
        for pt in &curve.points {
            let with = pt.matched.as_ref().map(|m| &m.with_interference);
            let i_inter = with.map(|s| s.mean_interference.mean);
            let lin = i_inter.and_then(|i| analytic_at(pt, i, RateMode::PaperLinear));
            let log = i_inter.and_then(|i| analytic_at(pt, i, RateMode::LogSumRate));
            empirical.push(with.map(|s| s.mean_system_throughput.mean));
            analytic.push(match spec.rate_mode {
                RateMode::PaperLinear => lin,
                RateMode::LogSumRate => log,
            });
            rows.push(ThroughputRow {
                row_kind: "grid",
                lambda_b: curve.lambda_b,
                t: pt.t,
                radius_km: pt.radius.km(),
                analytic_linear: lin,
                analytic_log: log,
                empirical: with.map(|s| s.mean_system_throughput.mean),
                empirical_std_error: with.map(|s| s.mean_system_throughput.std_error),
                active_bs_density: with.map(|s| s.active_bs_density.mean),
                mean_interference_w: i_inter,
            });
        }
        let optimum_row = |kind, opt: crate::analysis::Optimum| ThroughputRow {
            row_kind: kind,
            lambda_b: curve.lambda_b,
            t: opt.harvest_fraction,
            radius_km: None,
            analytic_linear: None,
            analytic_log: None,
            empirical: None,
            empirical_std_error: None,
            active_bs_density: None,
            mean_interference_w: None,
        };
        if let Some(opt) = parabolic_peak(&grid, &empirical) {
            rows.push(ThroughputRow {
                empirical: Some(opt.value),
                ..optimum_row("optimum", opt)
            });
        }
        if let Some(opt) = parabolic_peak(&grid, &analytic) {
            let mut row = optimum_row("optimum_analytic", opt);
            match spec.rate_mode {
                RateMode::PaperLinear => row.analytic_linear = Some(opt.value),
                RateMode::LogSumRate => row.analytic_log = Some(opt.value),
            }
            rows.push(row);
        }
    }
    rows
}

pub fn ablation_rows(spec: &SweepSpec, curves: &[ThroughputCurve]) -> Vec<AblationRow> {
    let mut rows = Vec::new();
    for curve in curves {
        for pt in &curve.points {
            let m = pt.matched.as_ref();
            let with = m.map(|m| m.with_interference.mean_system_throughput);
            let without = m.map(|m| m.without_interference.mean_system_throughput);
            let i_inter = m.map(|m| m.with_interference.mean_interference.mean);
            rows.push(AblationRow {
                lambda_b: curve.lambda_b,
                t: pt.t,
                radius_km: pt.radius.km(),
                with_interference: with.map(|e| e.mean),
                with_std_error: with.map(|e| e.std_error),
                without_interference: without.map(|e| e.mean),
                without_std_error: without.map(|e| e.std_error),
                ratio: with.zip(without).map(|(w, wo)| wo.mean / w.mean),
                analytic_with: i_inter.and_then(|i| analytic_at(pt, i, spec.rate_mode)),
                analytic_without: m.and_then(|_| analytic_at(pt, 0.0, spec.rate_mode)),
            });
        }
    }
    rows
}

pub fn experiment_throughput_vs_t(spec: &SweepSpec) -> Result<SweepResult<ThroughputRow>> {
    let curves = throughput_curves(spec)?;
    Ok(SweepResult {
        spec: spec.clone(),
        rows: throughput_rows(spec, &curves),
    })
}

pub fn experiment_interference_ablation(spec: &SweepSpec) -> Result<SweepResult<AblationRow>> {
    let curves = throughput_curves(spec)?;
    Ok(SweepResult {
        spec: spec.clone(),
        rows: ablation_rows(spec, &curves),
    })
}
