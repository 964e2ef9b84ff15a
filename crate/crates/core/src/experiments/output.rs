use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::params::ParamMap;

use super::config::{RunConfig, SweepSpec};
use super::sweeps::PmfPoint;

/// Writes `rows` with a header row; `None` fields become empty cells.
pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Analytic report and simulated summary of one PMF point, as TOML.
pub fn write_pmf_report(dir: &Path, point: &PmfPoint) -> Result<Option<PathBuf>> {
    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(rename = "lambda_B")]
        lambda_b: f64,
        #[serde(rename = "T")]
        t: f64,
        tv_distance: Option<f64>,
        analytic: &'a crate::analysis::AnalyticReport,
        empirical: &'a crate::montecarlo::EstimatorSummary,
    }
    let (Some(analytic), Some(empirical)) = (&point.analytic, &point.empirical) else {
        return Ok(None);
    };
    let doc = Doc {
        lambda_b: point.lambda_b,
        t: point.t,
        tv_distance: point.tv_distance,
        analytic,
        empirical,
    };
    let path = dir.join(format!("pmf_report_lambda_B_{}_T_{}.toml", point.lambda_b, point.t));
    fs::create_dir_all(dir)?;
    fs::write(&path, toml::to_string(&doc).expect("report is TOML-representable"))?;
    Ok(Some(path))
}

#[derive(Debug, Serialize)]
struct ManifestExperiment {
    name: &'static str,
    csv: String,
    swept: super::config::Swept,
    values: Vec<f64>,
    series: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct Manifest {
    version: &'static str,
    command: String,
    master_seed: u64,
    trials: u64,
    radius_mode: &'static str,
    rate_mode: &'static str,
    threads: Option<usize>,
    window: String,
    numeric_trials: u32,
    numeric_exact_points: f64,
    started_unix_s: u64,
    elapsed_s: f64,
    params: ParamMap,
    experiments: Vec<ManifestExperiment>,
}

/// Records everything needed to regenerate the CSVs of a run.
pub fn write_manifest(
    cfg: &RunConfig,
    command: &str,
    specs: &[(SweepSpec, PathBuf)],
    started_unix_s: u64,
    elapsed_s: f64,
) -> Result<PathBuf> {
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        master_seed: cfg.master_seed,
        trials: cfg.trials,
        radius_mode: cfg.radius_mode.label(),
        rate_mode: cfg.rate_mode.label(),
        threads: cfg.threads,
        window: format!("{:?}", cfg.window),
        numeric_trials: cfg.numeric.trials,
        numeric_exact_points: cfg.numeric.exact_points,
        started_unix_s,
        elapsed_s,
        params: cfg.params.to_map(),
        experiments: specs
            .iter()
            .map(|(s, path)| ManifestExperiment {
                name: s.experiment.name(),
                csv: path.display().to_string(),
                swept: s.swept,
                values: s.values.clone(),
                series: s.series.clone(),
            })
            .collect(),
    };
    fs::create_dir_all(&cfg.output_dir)?;
    let path = cfg.output_dir.join("manifest.toml");
    fs::write(&path, toml::to_string(&manifest).expect("manifest is TOML-representable"))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        x: f64,
        y: Option<f64>,
    }

    #[test]
    fn empty_cells_for_none() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&path, &[Row { x: 1.5, y: None }, Row { x: 2.0, y: Some(0.25) }]).unwrap();
        assert_eq!(fs::read_to_string(path).unwrap(), "x,y\n1.5,\n2.0,0.25\n");
    }
}
