use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{clamped_path_loss, MIN_LINK_DISTANCE_KM};
use crate::error::{Error, Result};
use crate::params::SystemParams;

use super::pmf::{pmf_n, poisson_pmf, poisson_support};
use super::quadrature::adaptive_simpson;
use super::radius::SelectionRadius;

/// Per-UE SIC rates in decode order (strongest first):
/// `R_m = (1-T) log2(1 + S_m / (I + Σ_{i>m} S_i + σ))`.
///
/// Each rate is a `log1p` of a positive ratio, so the rates add up to the
/// aggregate `(1-T) log2(1 + ΣS/(I+σ))` to rounding.
pub fn sic_rates(received: &[f64], i_inter: f64, sigma: f64, t: f64) -> Result<Vec<f64>> {
    if let Some(i) = received.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::NotSorted(i + 1));
    }
    let floor = i_inter + sigma;
    if !(floor > 0.0) {
        return Err(Error::ZeroNoiseFloor(floor));
    }
    let mut rates = vec![0.0; received.len()];
    let mut below = 0.0;
    for (m, &s) in received.iter().enumerate().rev() {
        rates[m] = (1.0 - t) * (s / (floor + below)).ln_1p() / LN_2;
        below += s;
    }
    Ok(rates)
}

/// Telescoped SIC sum rate `(1-T) log2(1 + total/(I+σ))`.
pub fn sum_rate(total_received: f64, i_inter: f64, sigma: f64, t: f64) -> Result<f64> {
    let floor = i_inter + sigma;
    if !(floor > 0.0) {
        return Err(Error::ZeroNoiseFloor(floor));
    }
    Ok((1.0 - t) * (total_received / floor).ln_1p() / LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RateMode {
    /// Linear SINR sum without a logarithm, as the per-cell formula is printed.
    PaperLinear,
    /// Telescoped SIC sum rate.
    LogSumRate,
}

impl RateMode {
    pub fn label(self) -> &'static str {
        match self {
            RateMode::PaperLinear => "linear",
            RateMode::LogSumRate => "log",
        }
    }
}

/// Mean received power at the BS from one UE placed uniformly in the
/// selection disk, with distances clamped to the minimum link distance as
/// the simulator does. The unclamped part is integrated in log-radius.
pub fn mean_received_power(p: &SystemParams, radius_km: f64) -> f64 {
    let alpha = p.path_loss_exponent();
    let pu = p.uplink_power();
    let r_min = MIN_LINK_DISTANCE_KM;
    if radius_km <= r_min {
        return pu * clamped_path_loss(r_min, alpha);
    }
    let r2 = radius_km * radius_km;
    // density 2x/r² dx, with x = e^s so dx = x ds
    let outer = adaptive_simpson(
        |s: f64| {
            let x = s.exp();
            x.powf(2.0 - alpha) * 2.0 / r2
        },
        r_min.ln(),
        radius_km.ln(),
        1e-8,
    );
    let inner = clamped_path_loss(r_min, alpha) * r_min * r_min / r2;
    pu * (outer + inner)
}

/// Expected per-cell throughput with the UE count `N ~ Poisson(λ_U π r²)`
/// and every UE contributing the mean received power.
pub fn cell_throughput(
    p: &SystemParams,
    radius: &SelectionRadius,
    i_inter_mean: f64,
    mode: RateMode,
) -> Result<f64> {
    let r = radius.require()?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let floor = i_inter_mean + p.noise_power();
    if !(floor > 0.0) {
        return Err(Error::ZeroNoiseFloor(floor));
    }
    let es = mean_received_power(p, r);
    let t = p.harvest_fraction();
    let mean = p.ue_density() * std::f64::consts::PI * r * r;
    let (lo, hi) = poisson_support(mean);
    let total = match mode {
        RateMode::PaperLinear => mean * es / floor,
        RateMode::LogSumRate => (lo.max(1)..=hi)
            .map(|n| poisson_pmf(n, mean) * (n as f64 * es / floor).ln_1p() / LN_2)
            .sum(),
    };
    Ok((1.0 - t) * total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemThroughput {
    /// Density of BSs with at least one selected UE (per km²).
    pub active_bs_density: f64,
    /// Area throughput (bits/s/Hz/km²).
    pub area_throughput: f64,
}

/// `λ_B' = λ_B (1 - P(N=0))`, `R_ts = λ_B' R_tc`.
pub fn system_throughput(p: &SystemParams, cell_throughput: f64, radius_km: f64) -> SystemThroughput {
    let active = p.bs_density() * (1.0 - pmf_n(0, p.ue_density(), radius_km));
    SystemThroughput {
        active_bs_density: active,
        area_throughput: active * cell_throughput,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::RadiusMode;
    use crate::params::Param;
    use proptest::prelude::*;

    #[test]
    fn empty_cell_has_no_rates() {
        assert!(sic_rates(&[], 1.0, 0.0, 0.3).unwrap().is_empty());
    }

    #[test]
    fn two_user_chain() {
        let r = sic_rates(&[3.0, 1.0], 1.0, 0.0, 0.0).unwrap();
        assert!((r[0] - 2.5f64.log2()).abs() < 1e-15);
        assert!((r[1] - 1.0).abs() < 1e-15);
        assert!((r[0] + r[1] - 5f64.log2()).abs() < 1e-14);
    }

    #[test]
    fn unsorted_and_zero_floor_rejected() {
        assert!(matches!(sic_rates(&[1.0, 3.0], 1.0, 0.0, 0.0), Err(Error::NotSorted(1))));
        assert!(matches!(sic_rates(&[1.0], 0.0, 0.0, 0.0), Err(Error::ZeroNoiseFloor(_))));
    }

    #[test]
    fn mean_received_power_closed_form() {
        // α = 4: P_u [ (r_min^-2 - r^-2)/r² + r_min^-2/r² ]
        let p = SystemParams::table_one(0.15, 30.0).unwrap();
        for r in [0.01f64, 0.3, 70.0] {
            let rm = MIN_LINK_DISTANCE_KM;
            let expect = p.uplink_power() * ((rm.powi(-2) - r.powi(-2)) / (r * r) + rm.powi(-2) / (r * r));
            let got = mean_received_power(&p, r);
            assert!((got / expect - 1.0).abs() < 1e-7, "r {r}: {got} vs {expect}");
        }
    }

    #[test]
    fn zero_radius_gives_zero_throughput() {
        let p = SystemParams::table_one(0.15, 30.0).unwrap();
        let r0 = SelectionRadius::defined(RadiusMode::CorrectedClosedForm, 0.0);
        for mode in [RateMode::PaperLinear, RateMode::LogSumRate] {
            assert_eq!(cell_throughput(&p, &r0, 1.0, mode).unwrap(), 0.0);
        }
        let s = system_throughput(&p, 0.0, 0.0);
        assert_eq!(s.active_bs_density, 0.0);
        assert_eq!(s.area_throughput, 0.0);
    }

    #[test]
    fn small_sinr_ratio_is_one_over_ln2() {
        // a circle that holds at most one UE, with ΣS/(I+σ) ~ 1e-6
        let p = SystemParams::table_one(0.15, 30.0)
            .unwrap()
            .with(Param::UeDensity, 1e-3)
            .unwrap();
        let r = SelectionRadius::defined(RadiusMode::CorrectedClosedForm, 0.01);
        let es = mean_received_power(&p, 0.01);
        let interference = es * 1e6;
        let lin = cell_throughput(&p, &r, interference, RateMode::PaperLinear).unwrap();
        let log = cell_throughput(&p, &r, interference, RateMode::LogSumRate).unwrap();
        // linear ≈ log · ln 2
        assert!((log / lin - 1.0 / LN_2).abs() < 1e-5, "{}", log / lin);
    }

    #[test]
    fn system_throughput_hand_values() {
        let p = SystemParams::table_one(0.15, 30.0).unwrap();
        // choose r so that P(N = 0) = 0.2
        let r = (-(0.2f64).ln() / (p.ue_density() * std::f64::consts::PI)).sqrt();
        let s = system_throughput(&p, 1.5, r);
        assert!((s.active_bs_density - 24.0).abs() < 1e-12);
        assert!((s.area_throughput - 36.0).abs() < 1e-12);
        let big = system_throughput(&p, 1.0, 10.0);
        assert!((big.active_bs_density - 30.0).abs() < 1e-12);
    }

    #[test]
    fn undefined_radius_is_an_error() {
        let p = SystemParams::table_one(0.15, 30.0).unwrap();
        let r = crate::analysis::selection_radius(&p, &crate::analysis::HarvestModel::PaperClosedForm);
        assert!(matches!(
            cell_throughput(&p, &r, 1.0, RateMode::LogSumRate),
            Err(Error::UndefinedRadius(_))
        ));
    }

    proptest! {
        #[test]
        fn telescoping_identity(
            mut s in proptest::collection::vec(0.0f64..1e3, 0..40),
            i in 0.0f64..10.0, sigma in 1e-9f64..1.0, t in 0.0f64..0.99,
        ) {
            s.sort_by(|a, b| b.total_cmp(a));
            let rates = sic_rates(&s, i, sigma, t).unwrap();
            let total: f64 = s.iter().sum();
            let agg = sum_rate(total, i, sigma, t).unwrap();
            let got: f64 = rates.iter().sum();
            prop_assert!((got - agg).abs() <= 1e-12 * agg.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn system_throughput_linear(rtc in 0.0f64..100.0, c in 0.0f64..10.0, r in 0.0f64..0.2) {
            let p = SystemParams::table_one(0.2, 25.0).unwrap();
            let a = system_throughput(&p, rtc, r).area_throughput;
            let b = system_throughput(&p, c * rtc, r).area_throughput;
            prop_assert!((b - c * a).abs() <= 1e-12 * b.abs().max(1e-300));
            prop_assert!(system_throughput(&p, rtc, r).active_bs_density <= p.bs_density());
        }
    }
}
