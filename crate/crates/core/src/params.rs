//! Validated model parameters.
//!
//! Units: distances in km, densities per km², powers in W, energies in J,
//! slot durations in s. Path loss is evaluated directly on km distances.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Raw key/value form of a parameter set, keyed by [`Param::key`].
pub type ParamMap = BTreeMap<String, f64>;

/// Default UE density (UE/km²) when a configuration omits `lambda_U`.
pub const DEFAULT_UE_DENSITY: f64 = 100.0;
/// Default receiver noise power (W) when a configuration omits `sigma`.
pub const DEFAULT_NOISE_POWER: f64 = 1e-12;
/// Unit slot length in seconds.
pub const DEFAULT_SLOT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    HarvestFraction,
    Efficiency,
    BsPower,
    PathLossExponent,
    EnergyThreshold,
    Coverage,
    BsDensity,
    UeDensity,
    NoisePower,
    Slot,
}

impl Param {
    /// Validation order; the first violated constraint in this order is reported.
    pub const ALL: [Param; 10] = [
        Param::HarvestFraction,
        Param::Efficiency,
        Param::BsPower,
        Param::PathLossExponent,
        Param::EnergyThreshold,
        Param::Coverage,
        Param::BsDensity,
        Param::UeDensity,
        Param::NoisePower,
        Param::Slot,
    ];

    /// Configuration key.
    pub fn key(self) -> &'static str {
        match self {
            Param::HarvestFraction => "T",
            Param::Efficiency => "a",
            Param::BsPower => "P_S",
            Param::PathLossExponent => "alpha",
            Param::EnergyThreshold => "E_th",
            Param::Coverage => "beta",
            Param::BsDensity => "lambda_B",
            Param::UeDensity => "lambda_U",
            Param::NoisePower => "sigma",
            Param::Slot => "slot",
        }
    }

    pub fn from_key(key: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.key() == key)
    }

    fn default_value(self) -> Option<f64> {
        match self {
            Param::UeDensity => Some(DEFAULT_UE_DENSITY),
            Param::NoisePower => Some(DEFAULT_NOISE_POWER),
            Param::Slot => Some(DEFAULT_SLOT),
            _ => None,
        }
    }

    fn check(self, v: f64) -> Result<f64> {
        let (ok, allowed) = match self {
            Param::HarvestFraction => (v > 0.0 && v < 1.0, "(0, 1)"),
            Param::Efficiency => (v > 0.0 && v <= 1.0, "(0, 1]"),
            Param::BsPower => (v > 0.0, "(0, inf)"),
            Param::PathLossExponent => (v > 2.0, "(2, inf)"),
            Param::EnergyThreshold => (v > 0.0, "(0, inf)"),
            Param::Coverage => (v > 0.0 && v < 1.0, "(0, 1)"),
            Param::BsDensity | Param::UeDensity => (v > 0.0, "(0, inf)"),
            Param::NoisePower => (v >= 0.0, "[0, inf)"),
            Param::Slot => (v > 0.0, "(0, inf)"),
        };
        if ok && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::OutOfRange {
                field: self.key(),
                value: v,
                allowed,
            })
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Immutable, validated parameter set shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    #[serde(rename = "T")]
    harvest_fraction: f64,
    #[serde(rename = "a")]
    efficiency: f64,
    #[serde(rename = "P_S")]
    bs_power: f64,
    #[serde(rename = "alpha")]
    path_loss_exponent: f64,
    #[serde(rename = "E_th")]
    energy_threshold: f64,
    #[serde(rename = "beta")]
    coverage: f64,
    #[serde(rename = "lambda_B")]
    bs_density: f64,
    #[serde(rename = "lambda_U")]
    ue_density: f64,
    #[serde(rename = "sigma")]
    noise_power: f64,
    slot: f64,
}

impl SystemParams {
    /// Builds a parameter set from raw values, applying the documented
    /// defaults for `lambda_U`, `sigma` and `slot`.
    pub fn validate(raw: &ParamMap) -> Result<Self> {
        if let Some(unknown) = raw.keys().find(|k| Param::from_key(k).is_none()) {
            return Err(Error::UnknownField(unknown.clone()));
        }
        let mut values = [0.0; 10];
        for (slot, param) in values.iter_mut().zip(Param::ALL) {
            let v = match raw.get(param.key()) {
                Some(&v) => v,
                None => param
                    .default_value()
                    .ok_or(Error::MissingField(param.key()))?,
            };
            *slot = param.check(v)?;
        }
        let [t, a, ps, alpha, eth, beta, lb, lu, sigma, slot] = values;
        Ok(SystemParams {
            harvest_fraction: t,
            efficiency: a,
            bs_power: ps,
            path_loss_exponent: alpha,
            energy_threshold: eth,
            coverage: beta,
            bs_density: lb,
            ue_density: lu,
            noise_power: sigma,
            slot,
        })
    }

    /// The simulation table values (P_S = 1, α = 4, E_th = 1e-4, a = 0.5,
    /// β = 0.99) with the repo defaults for λ_U and σ.
    pub fn table_one(harvest_fraction: f64, bs_density: f64) -> Result<Self> {
        Self::validate(&table_one_map(harvest_fraction, bs_density))
    }

    pub fn to_map(&self) -> ParamMap {
        Param::ALL
            .into_iter()
            .map(|p| (p.key().to_string(), self.get(p)))
            .collect()
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::HarvestFraction => self.harvest_fraction,
            Param::Efficiency => self.efficiency,
            Param::BsPower => self.bs_power,
            Param::PathLossExponent => self.path_loss_exponent,
            Param::EnergyThreshold => self.energy_threshold,
            Param::Coverage => self.coverage,
            Param::BsDensity => self.bs_density,
            Param::UeDensity => self.ue_density,
            Param::NoisePower => self.noise_power,
            Param::Slot => self.slot,
        }
    }

    /// Copy with one field replaced, revalidated.
    pub fn with(&self, param: Param, value: f64) -> Result<Self> {
        let mut map = self.to_map();
        map.insert(param.key().to_string(), value);
        Self::validate(&map)
    }

    pub fn with_harvest_fraction(&self, t: f64) -> Result<Self> {
        self.with(Param::HarvestFraction, t)
    }

    pub fn with_bs_density(&self, lambda: f64) -> Result<Self> {
        self.with(Param::BsDensity, lambda)
    }

    pub fn harvest_fraction(&self) -> f64 {
        self.harvest_fraction
    }
    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }
    pub fn bs_power(&self) -> f64 {
        self.bs_power
    }
    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }
    pub fn energy_threshold(&self) -> f64 {
        self.energy_threshold
    }
    pub fn coverage(&self) -> f64 {
        self.coverage
    }
    pub fn bs_density(&self) -> f64 {
        self.bs_density
    }
    pub fn ue_density(&self) -> f64 {
        self.ue_density
    }
    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }
    pub fn slot(&self) -> f64 {
        self.slot
    }

    /// Uplink transmit power: the threshold energy spread over the
    /// transmission sub-slot, `E_th / ((1 - T) * slot)`.
    pub fn uplink_power(&self) -> f64 {
        self.energy_threshold / ((1.0 - self.harvest_fraction) * self.slot)
    }

    /// Harvest-phase threshold on the normalized received sum
    /// `Σ h r^-α`, i.e. `E_th / (T * slot * a * P_S)`.
    pub fn normalized_harvest_threshold(&self) -> f64 {
        self.energy_threshold
            / (self.harvest_fraction * self.slot * self.efficiency * self.bs_power)
    }

    /// Energy harvested by a UE whose normalized received sum is `sum`.
    pub fn harvested_energy(&self, sum: f64) -> f64 {
        self.harvest_fraction * self.slot * self.efficiency * self.bs_power * sum
    }
}

pub(crate) fn table_one_map(harvest_fraction: f64, bs_density: f64) -> ParamMap {
    [
        ("T", harvest_fraction),
        ("a", 0.5),
        ("P_S", 1.0),
        ("alpha", 4.0),
        ("E_th", 1e-4),
        ("beta", 0.99),
        ("lambda_B", bs_density),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Reads the flat top-level numeric keys of a TOML document. Tables are
/// left to other readers (the experiment runner keeps its run and sweep
/// settings in tables).
pub fn param_map_from_toml(text: &str) -> Result<ParamMap> {
    let doc: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    let mut map = ParamMap::new();
    for (key, value) in doc {
        let v = match value {
            toml::Value::Float(f) => f,
            toml::Value::Integer(i) => i as f64,
            toml::Value::Table(_) => continue,
            other => {
                return Err(Error::Config(format!(
                    "parameter `{key}` must be numeric, got {}",
                    other.type_str()
                )))
            }
        };
        map.insert(key, v);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table_one_full() -> ParamMap {
        let mut m = table_one_map(0.15, 30.0);
        m.insert("lambda_U".into(), 100.0);
        m.insert("sigma".into(), 1e-12);
        m
    }

    #[test]
    fn table_one_set_is_valid() {
        let p = SystemParams::validate(&table_one_full()).unwrap();
        assert_eq!(p.bs_density(), 30.0);
        assert_eq!(p.ue_density(), 100.0);
        assert_eq!(p.slot(), 1.0);
        assert_eq!(p, SystemParams::table_one(0.15, 30.0).unwrap());
    }

    #[test]
    fn alpha_two_rejected() {
        let mut m = table_one_full();
        m.insert("alpha".into(), 2.0);
        match SystemParams::validate(&m) {
            Err(Error::OutOfRange { field, .. }) => assert_eq!(field, "alpha"),
            other => panic!("expected OutOfRange(alpha), got {other:?}"),
        }
    }

    #[test]
    fn full_harvest_slot_rejected() {
        let mut m = table_one_full();
        m.insert("T".into(), 1.0);
        assert!(matches!(
            SystemParams::validate(&m),
            Err(Error::OutOfRange { field: "T", .. })
        ));
    }

    #[test]
    fn first_violation_reported() {
        let mut m = table_one_full();
        m.insert("beta".into(), 1.5);
        m.insert("a".into(), 0.0);
        assert!(matches!(
            SystemParams::validate(&m),
            Err(Error::OutOfRange { field: "a", .. })
        ));
    }

    #[test]
    fn missing_and_unknown_fields() {
        let mut m = table_one_full();
        m.remove("E_th");
        assert!(matches!(
            SystemParams::validate(&m),
            Err(Error::MissingField("E_th"))
        ));
        let mut m = table_one_full();
        m.insert("gamma".into(), 1.0);
        assert!(matches!(SystemParams::validate(&m), Err(Error::UnknownField(_))));
    }

    #[test]
    fn nan_is_out_of_range() {
        let mut m = table_one_full();
        m.insert("sigma".into(), f64::NAN);
        assert!(SystemParams::validate(&m).is_err());
    }

    #[test]
    fn uplink_power_examples() {
        let p = SystemParams::table_one(0.5, 30.0).unwrap();
        assert!((p.uplink_power() - 2e-4).abs() < 1e-18);
        let p = SystemParams::table_one(0.9, 30.0).unwrap();
        assert!((p.uplink_power() - 1e-3).abs() < 1e-15);
        let p = SystemParams::table_one(1e-12, 30.0).unwrap();
        assert!((p.uplink_power() - 1e-4).abs() < 1e-15);
    }

    #[test]
    fn toml_reader_skips_tables() {
        let text = "T = 0.2\nlambda_B = 25\n[sweep]\ntrials = 10\n";
        let m = param_map_from_toml(text).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m["lambda_B"], 25.0);
        assert!(param_map_from_toml("T = \"x\"").is_err());
    }

    proptest! {
        #[test]
        fn validate_round_trips(
            t in 0.001f64..0.999, a in 0.01f64..1.0, alpha in 2.01f64..6.0,
            beta in 0.01f64..0.999, lb in 0.1f64..500.0, lu in 0.1f64..500.0,
            sigma in 0.0f64..1e-6,
        ) {
            let mut m = table_one_map(t, lb);
            m.insert("a".into(), a);
            m.insert("alpha".into(), alpha);
            m.insert("beta".into(), beta);
            m.insert("lambda_U".into(), lu);
            m.insert("sigma".into(), sigma);
            let p = SystemParams::validate(&m).unwrap();
            prop_assert_eq!(SystemParams::validate(&p.to_map()).unwrap(), p);
        }

        #[test]
        fn uplink_power_monotone(t1 in 0.001f64..0.998, dt in 1e-4f64..0.5, e in 1e-6f64..1.0) {
            let t2 = (t1 + dt).min(0.999);
            prop_assume!(t2 > t1);
            let p1 = SystemParams::table_one(t1, 30.0).unwrap().with(Param::EnergyThreshold, e).unwrap();
            let p2 = p1.with_harvest_fraction(t2).unwrap();
            prop_assert!(p2.uplink_power() > p1.uplink_power());
            let p3 = p1.with(Param::EnergyThreshold, e * 1.5).unwrap();
            prop_assert!(p3.uplink_power() > p1.uplink_power());
        }
    }
}
