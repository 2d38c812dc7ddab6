use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use spin2_core::verify::{convergence_sweep, parse_param, run, Check, ConfigOverrides, ScenarioConfig, Verdict};

const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "spin2-verify",
    version,
    about = "Gauge-symmetry checks for first-order spin-2 field equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Overrides {
    /// Catalog metric name (minkowski, schwarzschild, de_sitter, frw).
    #[arg(long)]
    metric: Option<String>,
    /// Metric parameter as key=value; repeatable.
    #[arg(long = "param", value_parser = parse_param_arg)]
    params: Vec<(String, f64)>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Coupling values A; repeatable or comma-separated.
    #[arg(long = "coupling", value_delimiter = ',')]
    couplings: Vec<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Checks to run; repeatable or comma-separated.
    #[arg(long = "check", value_delimiter = ',', value_parser = parse_check_arg)]
    checks: Vec<Check>,
}

impl Overrides {
    fn into_overrides(self) -> ConfigOverrides {
        ConfigOverrides {
            metric: self.metric,
            params: self.params,
            n_points: self.points,
            seed: self.seed,
            couplings: (!self.couplings.is_empty()).then_some(self.couplings),
            tolerance: self.tolerance,
            checks: (!self.checks.is_empty()).then_some(self.checks),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the JSON report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference convergence sweep of the curvature oracle.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Strictly decreasing step sizes, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "1e-2,5e-3,2.5e-3")]
        steps: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_param_arg(s: &str) -> Result<(String, f64), String> {
    parse_param(s).map_err(|e| e.to_string())
}

fn parse_check_arg(s: &str) -> Result<Check, String> {
    s.parse().map_err(|e: spin2_core::Error| e.to_string())
}

fn load(path: &Path, overrides: Overrides) -> spin2_core::Result<ScenarioConfig> {
    let mut config = ScenarioConfig::from_file(path)?;
    overrides.into_overrides().apply(&mut config);
    config.validate()?;
    Ok(config)
}

fn emit(json: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{json}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<u8, (u8, anyhow::Error)> {
    let usage = |e: spin2_core::Error| (EXIT_USAGE, anyhow::Error::new(e));
    let io = |e: anyhow::Error| (EXIT_USAGE, e);
    match command {
        Command::Run { config, overrides, out } => {
            let config = load(&config, overrides).map_err(usage)?;
            let report = run(&config).map_err(usage)?;
            emit(&report.to_json(), out.as_ref()).map_err(io)?;
            for c in &report.summary.checks {
                let mark = if c.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
                let dev = c.max_deviation.map_or("-".to_string(), |d| format!("{d:.3e}"));
                eprintln!(
                    "{mark} {:<17} records={:<5} skipped={:<3} max_dev={dev}",
                    c.check.name(),
                    c.records,
                    c.skipped
                );
                if let Some(n) = &c.note {
                    eprintln!("     {n}");
                }
            }
            Ok(report.exit_code() as u8)
        }
        Command::Sweep {
            config,
            overrides,
            steps,
            out,
        } => {
            let config = load(&config, overrides).map_err(usage)?;
            let report = convergence_sweep(&config, &steps).map_err(usage)?;
            emit(&report.to_json(), out.as_ref()).map_err(io)?;
            for q in &report.quantities {
                eprintln!("{:<12} {:?} orders={:?}", q.name, q.status, q.orders);
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err((code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
