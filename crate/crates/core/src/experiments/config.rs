use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analysis::{NumericBudget, RadiusMode, RateMode};
use crate::error::{Error, Result};
use crate::montecarlo::Window;
use crate::params::{param_map_from_toml, table_one_map, Param, SystemParams};

pub const DEFAULT_TRIALS: u64 = 50_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_OUTPUT_DIR: &str = "results";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Radius,
    Pmf,
    Throughput,
    Ablation,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [
        Experiment::Radius,
        Experiment::Pmf,
        Experiment::Throughput,
        Experiment::Ablation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Radius => "radius",
            Experiment::Pmf => "pmf",
            Experiment::Throughput => "throughput",
            Experiment::Ablation => "ablation",
        }
    }

    /// Parameter on the x axis.
    pub fn swept(self) -> Swept {
        match self {
            Experiment::Radius | Experiment::Pmf => Swept::BsDensity,
            Experiment::Throughput | Experiment::Ablation => Swept::HarvestFraction,
        }
    }

    fn default_axes(self) -> (SweepValues, SweepValues) {
        use SweepValues::*;
        match self {
            Experiment::Radius => (
                Range { start: 20.0, stop: 40.0, step: 2.0 },
                List(vec![0.01, 0.15]),
            ),
            Experiment::Pmf => (List(vec![20.0, 30.0, 40.0, 300.0]), List(vec![0.15])),
            Experiment::Throughput | Experiment::Ablation => (
                Range { start: 0.01, stop: 0.95, step: 0.01 },
                List(vec![20.0, 30.0, 40.0]),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Swept {
    #[serde(rename = "T")]
    HarvestFraction,
    #[serde(rename = "lambda_B")]
    BsDensity,
}

impl Swept {
    pub fn param(self) -> Param {
        match self {
            Swept::HarvestFraction => Param::HarvestFraction,
            Swept::BsDensity => Param::BsDensity,
        }
    }

    /// The parameter each curve is held at.
    pub fn series_param(self) -> Param {
        match self {
            Swept::HarvestFraction => Param::BsDensity,
            Swept::BsDensity => Param::HarvestFraction,
        }
    }
}

/// Values of one axis: an inclusive range or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValues {
    Range { start: f64, stop: f64, step: f64 },
    List(Vec<f64>),
    Single(f64),
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

impl SweepValues {
    pub fn values(&self) -> Result<Vec<f64>> {
        let out = match self {
            SweepValues::Range { start, stop, step } => {
                if !(*step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
                    return Err(Error::Config(format!(
                        "sweep range {start}..{stop} step {step} is empty or malformed"
                    )));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..n).map(|i| round12(start + i as f64 * step)).collect()
            }
            SweepValues::List(v) => v.clone(),
            SweepValues::Single(v) => vec![*v],
        };
        if out.is_empty() {
            return Err(Error::Config("sweep has no values".into()));
        }
        Ok(out)
    }
}

/// One experiment's resolved sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub swept: Swept,
    pub values: Vec<f64>,
    /// Values of the other parameter, one curve each.
    pub series: Vec<f64>,
    pub fixed: SystemParams,
    pub radius_mode: RadiusMode,
    pub rate_mode: RateMode,
    #[serde(skip)]
    pub numeric: NumericBudget,
    pub trials: u64,
    pub master_seed: u64,
    #[serde(skip)]
    pub window: Window,
    pub output_dir: PathBuf,
}

impl SweepSpec {
    /// Parameters at swept value `x` on the curve held at `s`.
    pub fn params_at(&self, x: f64, s: f64) -> Result<SystemParams> {
        self.fixed
            .with(self.swept.param(), x)?
            .with(self.swept.series_param(), s)
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        for &s in &self.series {
            for &x in &self.values {
                self.params_at(x, s)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunTable {
    trials: Option<u64>,
    seed: Option<u64>,
    mode: Option<String>,
    rate_mode: Option<String>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    numeric_trials: Option<u32>,
    exact_points: Option<f64>,
    half_side_km: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisTable {
    #[serde(rename = "T")]
    t: Option<SweepValues>,
    #[serde(rename = "lambda_B")]
    lambda_b: Option<SweepValues>,
}

/// Command-line or environment settings; they win over the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub radius_mode: Option<RadiusMode>,
    pub rate_mode: Option<RateMode>,
    pub threads: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

/// Fully resolved settings of one CLI invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SystemParams,
    pub trials: u64,
    pub master_seed: u64,
    pub radius_mode: RadiusMode,
    pub rate_mode: RateMode,
    pub threads: Option<usize>,
    pub output_dir: PathBuf,
    pub numeric: NumericBudget,
    pub window: Window,
    axes: BTreeMap<Experiment, (SweepValues, SweepValues)>,
}

pub fn parse_radius_mode(s: &str) -> Result<RadiusMode> {
    RadiusMode::ALL
        .into_iter()
        .find(|m| m.label() == s)
        .ok_or_else(|| Error::Config(format!("unknown radius mode `{s}` (paper, corrected, exact)")))
}

pub fn parse_rate_mode(s: &str) -> Result<RateMode> {
    [RateMode::PaperLinear, RateMode::LogSumRate]
        .into_iter()
        .find(|m| m.label() == s)
        .ok_or_else(|| Error::Config(format!("unknown rate mode `{s}` (linear, log)")))
}

impl RunConfig {
    /// Resolves a config document (or none) and overrides. Parameters not
    /// in the document keep the simulation-table values at `T = 0.15`,
    /// `λ_B = 30`.
    pub fn load(text: Option<&str>, overrides: &Overrides) -> Result<Self> {
        let text = text.unwrap_or("");
        let mut raw = table_one_map(0.15, 30.0);
        raw.extend(param_map_from_toml(text)?);
        let params = SystemParams::validate(&raw)?;

        let doc: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let mut run = RunTable::default();
        let mut axes: BTreeMap<Experiment, (SweepValues, SweepValues)> =
            Experiment::ALL.into_iter().map(|e| (e, e.default_axes())).collect();
        for (key, value) in doc {
            let toml::Value::Table(table) = value else { continue };
            let bad = |e: toml::de::Error| Error::Config(format!("[{key}]: {e}"));
            if key == "run" {
                run = table.try_into().map_err(bad)?;
                continue;
            }
            let Some(exp) = Experiment::ALL.into_iter().find(|e| e.name() == key) else {
                return Err(Error::Config(format!("unknown table [{key}]")));
            };
            let t: AxisTable = table.try_into().map_err(bad)?;
            let entry = axes.get_mut(&exp).expect("every experiment has axes");
            let (x, s) = match exp.swept() {
                Swept::BsDensity => (t.lambda_b, t.t),
                Swept::HarvestFraction => (t.t, t.lambda_b),
            };
            if let Some(x) = x {
                entry.0 = x;
            }
            if let Some(s) = s {
                entry.1 = s;
            }
        }

        let radius_mode = match (overrides.radius_mode, &run.mode) {
            (Some(m), _) => m,
            (None, Some(s)) => parse_radius_mode(s)?,
            (None, None) => RadiusMode::CorrectedClosedForm,
        };
        let rate_mode = match (overrides.rate_mode, &run.rate_mode) {
            (Some(m), _) => m,
            (None, Some(s)) => parse_rate_mode(s)?,
            (None, None) => RateMode::LogSumRate,
        };
        let master_seed = overrides.seed.or(run.seed).unwrap_or(DEFAULT_SEED);
        let mut numeric = NumericBudget {
            seed: master_seed,
            ..NumericBudget::default()
        };
        if let Some(n) = run.numeric_trials {
            numeric.trials = n;
        }
        if let Some(k) = run.exact_points {
            if !(k > 0.0) {
                return Err(Error::Config("exact_points must be positive".into()));
            }
            numeric.exact_points = k;
        }
        let window = match run.half_side_km {
            Some(h) if h > 0.0 => Window::HalfSide(h),
            Some(h) => return Err(Error::Config(format!("half_side_km must be positive, got {h}"))),
            None => Window::Auto,
        };
        let threads = overrides.threads.or(run.threads);
        if threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(RunConfig {
            params,
            trials: overrides.trials.or(run.trials).unwrap_or(DEFAULT_TRIALS),
            master_seed,
            radius_mode,
            rate_mode,
            threads,
            output_dir: overrides
                .output_dir
                .clone()
                .or(run.out)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            numeric,
            window,
            axes,
        })
    }

    pub fn spec(&self, experiment: Experiment) -> Result<SweepSpec> {
        let (x, s) = &self.axes[&experiment];
        let spec = SweepSpec {
            experiment,
            swept: experiment.swept(),
            values: x.values()?,
            series: s.values()?,
            fixed: self.params,
            radius_mode: self.radius_mode,
            rate_mode: self.rate_mode,
            numeric: self.numeric,
            trials: self.trials,
            master_seed: self.master_seed,
            window: self.window,
            output_dir: self.output_dir.clone(),
        };
        spec.check()?;
        Ok(spec)
    }
}
