//! Builds a small throughput sweep from a TOML document and writes its CSV.

use harvest_noma::experiments::{
    experiment_throughput_vs_t, write_csv, Experiment, Overrides, RunConfig,
};

const CONFIG: &str = r#"
lambda_U = 100
[run]
trials = 500
mode = "corrected"
[throughput]
T = { start = 0.05, stop = 0.45, step = 0.1 }
lambda_B = [20, 40]
"#;

fn main() -> harvest_noma::Result<()> {
    let out = std::env::temp_dir().join("harvest-noma-example");
    let o = Overrides {
        output_dir: Some(out.clone()),
        ..Overrides::default()
    };
    let spec = RunConfig::load(Some(CONFIG), &o)?.spec(Experiment::Throughput)?;
    let result = experiment_throughput_vs_t(&spec)?;
    let path = out.join("throughput.csv");
    write_csv(&path, &result.rows)?;
    println!("{} rows written to {}", result.rows.len(), path.display());
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(())
}
