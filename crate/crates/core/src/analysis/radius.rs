use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;

use super::harvest::{harvest_success_prob, ConditionalHarvest, HarvestModel};

/// Bisection stops once the bracket is narrower than this (km).
pub const RADIUS_TOLERANCE_KM: f64 = 1e-6;
/// Bracket expansion gives up beyond this radius (km).
pub const MAX_BRACKET_KM: f64 = 1e6;
const INITIAL_GUESS_KM: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadiusMode {
    PaperClosedForm,
    CorrectedClosedForm,
    NumericExact,
}

impl RadiusMode {
    pub const ALL: [RadiusMode; 3] = [
        RadiusMode::PaperClosedForm,
        RadiusMode::CorrectedClosedForm,
        RadiusMode::NumericExact,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RadiusMode::PaperClosedForm => "paper",
            RadiusMode::CorrectedClosedForm => "corrected",
            RadiusMode::NumericExact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum UndefinedReason {
    /// The closed-form radicand was negative (value attached).
    NegativeRadicand(f64),
    /// The harvest probability stayed at or above β out to this radius.
    NoCrossing { bracket_km: f64 },
}

impl fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UndefinedReason::NegativeRadicand(v) => write!(f, "negative radicand {v}"),
            UndefinedReason::NoCrossing { bracket_km } => {
                write!(f, "probability never fell to beta within {bracket_km} km")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RadiusOutcome {
    Defined(f64),
    Undefined(UndefinedReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionRadius {
    pub mode: RadiusMode,
    pub outcome: RadiusOutcome,
}

impl SelectionRadius {
    pub fn defined(mode: RadiusMode, km: f64) -> Self {
        SelectionRadius {
            mode,
            outcome: RadiusOutcome::Defined(km),
        }
    }

    pub fn km(&self) -> Option<f64> {
        match self.outcome {
            RadiusOutcome::Defined(r) => Some(r),
            RadiusOutcome::Undefined(_) => None,
        }
    }

    pub fn require(&self) -> Result<f64> {
        match self.outcome {
            RadiusOutcome::Defined(r) => Ok(r),
            RadiusOutcome::Undefined(reason) => Err(Error::UndefinedRadius(reason)),
        }
    }
}

/// `(ln β + E_th/(T a P_S)) (α-2) / (2πλ_B)`, the square of the paper-form radius.
pub fn paper_radicand(p: &SystemParams) -> f64 {
    (p.coverage().ln() + p.normalized_harvest_threshold()) * (p.path_loss_exponent() - 2.0)
        / (2.0 * PI * p.bs_density())
}

/// Radius of the circle within which a UE harvests enough energy with
/// probability at least β.
pub fn selection_radius(p: &SystemParams, model: &HarvestModel) -> SelectionRadius {
    let mode = model.mode();
    let outcome = match model {
        HarvestModel::PaperClosedForm => {
            let radicand = paper_radicand(p);
            if radicand >= 0.0 {
                RadiusOutcome::Defined(radicand.sqrt())
            } else {
                RadiusOutcome::Undefined(UndefinedReason::NegativeRadicand(radicand))
            }
        }
        HarvestModel::CorrectedClosedForm => {
            let beta = p.coverage();
            bracket_and_bisect(INITIAL_GUESS_KM, |r| {
                harvest_success_prob(r, p, model).probability >= beta
            })
        }
        HarvestModel::NumericExact(budget) => {
            let beta = p.coverage();
            // the corrected radius is a good first guess for the bracket
            let guess = match bracket_and_bisect(INITIAL_GUESS_KM, |r| {
                harvest_success_prob(r, p, &HarvestModel::CorrectedClosedForm).probability >= beta
            }) {
                RadiusOutcome::Defined(r) if r > 0.0 => r,
                _ => INITIAL_GUESS_KM,
            };
            let sampler = ConditionalHarvest::new(p, *budget);
            bracket_and_bisect(guess, |r| sampler.success(r).0 >= beta)
        }
    };
    SelectionRadius { mode, outcome }
}

/// Finds the boundary of `{r : holds(r)}` for a predicate that is true
/// on an initial interval `[0, r*]` and false beyond.
fn bracket_and_bisect<F: FnMut(f64) -> bool>(guess: f64, mut holds: F) -> RadiusOutcome {
    let (mut lo, mut hi);
    if holds(guess) {
        lo = guess;
        hi = 2.0 * guess;
        while holds(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > MAX_BRACKET_KM {
                return RadiusOutcome::Undefined(UndefinedReason::NoCrossing { bracket_km: lo });
            }
        }
    } else {
        hi = guess;
        lo = 0.5 * guess;
        while !holds(lo) {
            hi = lo;
            lo *= 0.5;
            if lo < RADIUS_TOLERANCE_KM {
                lo = 0.0;
                break;
            }
        }
    }
    while hi - lo > RADIUS_TOLERANCE_KM {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RadiusOutcome::Defined(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::NumericBudget;
    use crate::params::Param;

    fn table_one(t: f64, lambda: f64) -> SystemParams {
        SystemParams::table_one(t, lambda).unwrap()
    }

    #[test]
    fn paper_radius_hand_value() {
        // (ln 0.99 + 0.02) * 2 / (2π 30)
        let expect = ((0.99f64.ln() + 0.02) * 2.0 / (2.0 * PI * 30.0)).sqrt();
        let r = selection_radius(&table_one(0.01, 30.0), &HarvestModel::PaperClosedForm);
        assert_eq!(r.mode, RadiusMode::PaperClosedForm);
        let got = r.km().unwrap();
        assert!((got / expect - 1.0).abs() < 1e-12);
        assert!((got - 0.01027).abs() < 5e-6, "{got}");
    }

    #[test]
    fn paper_radius_undefined_at_t_015() {
        let r = selection_radius(&table_one(0.15, 30.0), &HarvestModel::PaperClosedForm);
        match r.outcome {
            RadiusOutcome::Undefined(UndefinedReason::NegativeRadicand(v)) => {
                let numerator = 0.99f64.ln() + 1e-4 / 0.075;
                assert!((numerator + 0.00872).abs() < 1e-5);
                assert!(v < 0.0);
            }
            other => panic!("expected undefined, got {other:?}"),
        }
        assert!(r.require().is_err());
    }

    #[test]
    fn paper_radius_beta_to_one_limit() {
        let p = table_one(0.01, 30.0).with(Param::Coverage, 1.0 - 1e-15).unwrap();
        let r = selection_radius(&p, &HarvestModel::PaperClosedForm).km().unwrap();
        let limit = (1e-4 * 2.0 / (0.01 * 0.5 * 2.0 * PI * 30.0)).sqrt();
        assert!((r / limit - 1.0).abs() < 1e-9);
    }

    #[test]
    fn corrected_radius_matches_quadratic_root() {
        // α = 4: c x² - πλ x = -ln β with x = r²
        for (t, lambda) in [(0.01, 20.0), (0.15, 30.0), (0.6, 40.0)] {
            let p = table_one(t, lambda);
            let c = p.normalized_harvest_threshold();
            let b = PI * lambda;
            let x = (b + (b * b - 4.0 * c * 0.99f64.ln()).sqrt()) / (2.0 * c);
            let r = selection_radius(&p, &HarvestModel::CorrectedClosedForm).km().unwrap();
            assert!((r - x.sqrt()).abs() <= 2.0 * RADIUS_TOLERANCE_KM, "{r} vs {}", x.sqrt());
        }
    }

    #[test]
    fn corrected_radius_undefined_when_always_covered() {
        // with alpha just above 2 the Campbell term swamps the threshold everywhere
        let p = table_one(0.5, 30.0)
            .with(Param::PathLossExponent, 2.0 + 1e-9)
            .unwrap()
            .with(Param::EnergyThreshold, 1e-30)
            .unwrap();
        let r = selection_radius(&p, &HarvestModel::CorrectedClosedForm);
        assert!(matches!(
            r.outcome,
            RadiusOutcome::Undefined(UndefinedReason::NoCrossing { .. })
        ));
    }

    #[test]
    fn numeric_radius_tracks_corrected_at_scaled_threshold() {
        let p = table_one(0.15, 30.0)
            .with(Param::EnergyThreshold, 9000.0)
            .unwrap();
        let budget = NumericBudget {
            trials: 3000,
            ..NumericBudget::default()
        };
        let numeric = selection_radius(&p, &HarvestModel::NumericExact(budget))
            .km()
            .unwrap();
        let corrected = selection_radius(&p, &HarvestModel::CorrectedClosedForm)
            .km()
            .unwrap();
        // same physics, different far-field treatment
        assert!(numeric > 0.3 * corrected && numeric < 3.0 * corrected);
    }

    #[test]
    fn bisection_edge_cases() {
        match bracket_and_bisect(1.0, |_| false) {
            RadiusOutcome::Defined(r) => assert!(r <= RADIUS_TOLERANCE_KM),
            other => panic!("{other:?}"),
        }
        match bracket_and_bisect(1e-3, |r| r <= 0.3) {
            RadiusOutcome::Defined(r) => assert!((r - 0.3).abs() <= RADIUS_TOLERANCE_KM),
            other => panic!("{other:?}"),
        }
    }
}
