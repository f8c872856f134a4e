//! Command-line frontend: builds the exact solutions, samples them to CSV and
//! JSON, and runs the verification suite.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Globals, Outcome};
use config::RunConfig;

/// Vacuum solutions of Lagrangian gas dynamics and elastodynamics with fracture.
///
/// Exit status: 0 on success or PASS, 2 when verification fails, 1 on a
/// configuration or runtime error. Set LAGVAC_LOG=error|info|debug for logs.
#[derive(Debug, Parser)]
#[command(name = "lagvac", version)]
struct Cli {
    /// Configuration file (`key = value` lines grouped in `[sections]`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Quadrature tolerance (norms, default 1e-10) or weak* residual
    /// threshold (verify, default 1e-6).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Sample times: `a,b,c` or `start:step:end`.
    #[arg(long, global = true, value_parser = parse_times, allow_hyphen_values = true)]
    times: Option<Times>,
    /// Number of grid points per profile (default 201).
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone)]
struct Times(Vec<f64>);

fn parse_times(s: &str) -> Result<Times, String> {
    config::parse_times(s).map(Times).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Riemann problem: `[riemann]` h_l, u_l, h_r, u_r, domain.
    Riemann,
    /// Vacuum collapse: `[collapse]` h_l, h_r, u_minus, u_plus, a, b.
    Collapse,
    /// Collapse into an off-center rarefaction: `[offcenter]` h_l, u_l, h_r,
    /// u_r, w0, focus_time, domain.
    Offcenter,
    /// Vacuum Riemann problem: `[vrp]` h_l, u_l, h_r, u_r, w0, domain.
    Vrp,
    /// Verify a scenario (riemann, collapse, vrp, offcenter, nonphysical) or
    /// a solution/measure JSON file.
    Verify {
        #[arg(default_value = "vrp")]
        target: String,
    },
    /// Crack in a softening elastic bar: `[elastic]` family, tau_inf, m,
    /// slope, u0, file, lambda, alpha, t.
    Elastic,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let g = Globals {
        out_dir: cli.out_dir,
        tol: cli.tol,
        times: cli.times.map(|t| t.0),
        grid: cli.grid,
    };
    match &cli.cmd {
        Command::Riemann => commands::riemann(&cfg, &g),
        Command::Collapse => commands::collapse(&cfg, &g),
        Command::Offcenter => commands::offcenter(&cfg, &g),
        Command::Vrp => commands::vrp(&cfg, &g),
        Command::Verify { target } => commands::verify(&cfg, &g, target),
        Command::Elastic => commands::elastic(&cfg, &g),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LAGVAC_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
