use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use syz_cli::{run, RunConfig, Scenario};

#[derive(Parser)]
#[command(name = "syz", version, about = "SYZ duality checks for the A_n smoothing uv = h(z)")]
struct Cli {
    /// walls | psi | areas | diagram | observation-a | singular | collision
    scenario: Scenario,

    /// JSON run config
    #[arg(long)]
    config: PathBuf,

    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for report.json and CSVs (default: config `out`, else ./out)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Overrides psi_match_tol
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    let text = fs::read_to_string(&cli.config).with_context(|| format!("reading {}", cli.config.display()))?;
    let mut cfg = RunConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tol {
        cfg.precision.psi_match_tol = tol;
    }
    cfg.scenario = Some(cli.scenario.name().to_string());
    let out_dir = cli.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));

    let outputs = run(cli.scenario, &cfg)?;
    outputs.write(&out_dir)?;
    for c in &outputs.report.checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let measured = c.measured.map_or("-".to_string(), |m| format!("{m:.3e}"));
        println!("{status} {:<36} measured {measured:>10} tol {:.1e} ({:.2}s)", c.name, c.tolerance, c.runtime);
        if let Some(d) = &c.detail {
            println!("     {d}");
        }
    }
    println!("report written to {}", out_dir.join("report.json").display());
    Ok(outputs.report.pass)
}
