//! `harvest-noma` command line: `radius`, `pmf`, `throughput`, `ablation`
//! and `all`, each writing its CSV into the output directory.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{RadiusMode, RateMode};
use crate::error::{Error, Result};

use super::config::{Experiment, Overrides, RunConfig, SweepSpec};
use super::output::{write_csv, write_manifest, write_pmf_report};
use super::sweeps::{
    ablation_rows, experiment_radius_vs_density, pmf_points, pmf_rows, throughput_curves,
    throughput_rows, AblationRow, PmfRow, RadiusRow, ThroughputRow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Corrected,
    Exact,
}

impl From<ModeArg> for RadiusMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => RadiusMode::PaperClosedForm,
            ModeArg::Corrected => RadiusMode::CorrectedClosedForm,
            ModeArg::Exact => RadiusMode::NumericExact,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RateArg {
    Linear,
    Log,
}

impl From<RateArg> for RateMode {
    fn from(m: RateArg) -> Self {
        match m {
            RateArg::Linear => RateMode::PaperLinear,
            RateArg::Log => RateMode::LogSumRate,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "harvest-noma", version, about = "Energy-harvesting uplink NOMA sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML file with parameter overrides and optional [run] / per-experiment tables.
    #[arg(long, global = true, env = "HARVEST_NOMA_CONFIG")]
    config: Option<PathBuf>,
    /// Monte Carlo trials per sweep point.
    #[arg(long, global = true, env = "HARVEST_NOMA_TRIALS")]
    trials: Option<u64>,
    #[arg(long, global = true, env = "HARVEST_NOMA_SEED")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, env = "HARVEST_NOMA_OUT")]
    out: Option<PathBuf>,
    /// Selection-radius mode used by the simulation pipeline.
    #[arg(long, global = true, value_enum, env = "HARVEST_NOMA_MODE")]
    mode: Option<ModeArg>,
    /// Analytic throughput formula reported as the headline curve.
    #[arg(long, global = true, value_enum, env = "HARVEST_NOMA_RATE_MODE")]
    rate_mode: Option<RateArg>,
    #[arg(long, global = true, env = "HARVEST_NOMA_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Selection radius against BS density in every mode.
    Radius,
    /// Typical-cell user-count PMF against the Poisson PMF.
    Pmf,
    /// System throughput against the harvest fraction T.
    Throughput,
    /// Throughput with and without inter-cell interference.
    Ablation,
    /// All four experiments.
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Radius => "radius",
            Command::Pmf => "pmf",
            Command::Throughput => "throughput",
            Command::Ablation => "ablation",
            Command::All => "all",
        }
    }

    fn experiments(self) -> Vec<Experiment> {
        match self {
            Command::Radius => vec![Experiment::Radius],
            Command::Pmf => vec![Experiment::Pmf],
            Command::Throughput => vec![Experiment::Throughput],
            Command::Ablation => vec![Experiment::Ablation],
            Command::All => Experiment::ALL.to_vec(),
        }
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                EXIT_CONFIG
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let text = match &cli.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let overrides = Overrides {
        trials: cli.trials,
        seed: cli.seed,
        radius_mode: cli.mode.map(Into::into),
        rate_mode: cli.rate_mode.map(Into::into),
        threads: cli.threads,
        output_dir: cli.out.clone(),
    };
    let cfg = RunConfig::load(text.as_deref(), &overrides)?;
    let specs: Vec<SweepSpec> = cli
        .command
        .experiments()
        .into_iter()
        .map(|e| cfg.spec(e))
        .collect::<Result<_>>()?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let written = pool.install(|| run_specs(&specs))?;
    write_manifest(
        &cfg,
        cli.command.name(),
        &written,
        started,
        clock.elapsed().as_secs_f64(),
    )?;
    Ok(())
}

fn run_specs(specs: &[SweepSpec]) -> Result<Vec<(SweepSpec, PathBuf)>> {
    let mut written = Vec::new();
    // throughput and ablation read the same campaigns when their sweeps agree
    let mut shared: Option<(SweepSpec, Vec<super::sweeps::ThroughputCurve>)> = None;
    for spec in specs {
        let path = spec.output_dir.join(format!("{}.csv", spec.experiment.name()));
        match spec.experiment {
            Experiment::Radius => {
                let rows = experiment_radius_vs_density(spec)?.rows;
                print_radius(&rows);
                write_csv(&path, &rows)?;
            }
            Experiment::Pmf => {
                let points = pmf_points(spec)?;
                for pt in &points {
                    write_pmf_report(&spec.output_dir, pt)?;
                }
                let rows = pmf_rows(spec, &points);
                print_pmf(&rows);
                write_csv(&path, &rows)?;
            }
            Experiment::Throughput | Experiment::Ablation => {
                let reuse = shared.as_ref().is_some_and(|(s, _)| same_campaigns(s, spec));
                if !reuse {
                    shared = Some((spec.clone(), throughput_curves(spec)?));
                }
                let curves = &shared.as_ref().expect("curves computed").1;
                if spec.experiment == Experiment::Throughput {
                    let rows = throughput_rows(spec, curves);
                    print_throughput(&rows);
                    write_csv(&path, &rows)?;
                } else {
                    let rows = ablation_rows(spec, curves);
                    print_ablation(&rows);
                    write_csv(&path, &rows)?;
                }
            }
        }
        written.push((spec.clone(), path));
    }
    Ok(written)
}

fn same_campaigns(a: &SweepSpec, b: &SweepSpec) -> bool {
    a.values == b.values
        && a.series == b.series
        && a.fixed == b.fixed
        && a.radius_mode == b.radius_mode
        && a.numeric == b.numeric
        && a.trials == b.trials
        && a.master_seed == b.master_seed
        && a.window == b.window
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into())
}

fn print_radius(rows: &[RadiusRow]) {
    println!("radius (km)\n{:>6} {:>9} {:>12} {:>12} {:>12}", "T", "lambda_B", "paper", "corrected", "exact");
    for r in rows {
        println!(
            "{:>6} {:>9} {:>12} {:>12} {:>12}",
            r.t,
            r.lambda_b,
            cell(r.r_paper_km),
            cell(r.r_corrected_km),
            cell(r.r_exact_km)
        );
    }
}

fn print_pmf(rows: &[PmfRow]) {
    println!("pmf\n{:>9} {:>6} {:>12} {:>12} {:>12}", "lambda_B", "T", "radius_km", "tv", "overlap");
    for r in rows.iter().filter(|r| r.n == 0) {
        println!(
            "{:>9} {:>6} {:>12} {:>12} {:>12}",
            r.lambda_b,
            r.t,
            cell(r.radius_km),
            cell(r.tv_distance),
            cell(r.overlap_probability)
        );
    }
}

fn print_throughput(rows: &[ThroughputRow]) {
    println!("throughput optima\n{:>9} {:>18} {:>8} {:>12}", "lambda_B", "curve", "T*", "R_ts");
    for r in rows.iter().filter(|r| r.row_kind != "grid") {
        let value = r.empirical.or(r.analytic_log).or(r.analytic_linear);
        println!("{:>9} {:>18} {:>8.4} {:>12}", r.lambda_b, r.row_kind, r.t, cell(value));
    }
}

fn print_ablation(rows: &[AblationRow]) {
    println!("ablation (without / with)\n{:>9} {:>6} {:>12}", "lambda_B", "T", "ratio");
    for r in rows.iter().step_by(10) {
        println!("{:>9} {:>6} {:>12}", r.lambda_b, r.t, cell(r.ratio));
    }
}
