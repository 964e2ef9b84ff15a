//! Parameter sweeps pairing the closed forms with the simulator, their
//! CSV outputs and the command-line front end.

pub mod cli;
mod config;
mod output;
mod sweeps;

pub use config::{
    parse_radius_mode, parse_rate_mode, Experiment, Overrides, RunConfig, SweepSpec, SweepValues,
    Swept, DEFAULT_OUTPUT_DIR, DEFAULT_SEED, DEFAULT_TRIALS,
};
pub use output::{write_csv, write_manifest, write_pmf_report};
pub use sweeps::{
    ablation_rows, experiment_interference_ablation, experiment_pmf, experiment_radius_vs_density,
    experiment_throughput_vs_t, pmf_points, pmf_rows, throughput_curves, throughput_rows,
    AblationRow, PmfPoint, PmfRow, RadiusRow, SweepResult, ThroughputCurve, ThroughputPoint,
    ThroughputRow, PMF_MIN_BINS,
};
