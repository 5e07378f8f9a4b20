use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alignest_cli::commands::{run_gen_track, run_modes};
use alignest_cli::{run_ident, run_scenario, run_sweep, CliError, ScenarioConfig, Seeds, SweepConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alignest", version, about = "Lateral track alignment estimation from on-board sensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario (or sweep) configuration file; defaults to the standard case.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base seed; track, noise and identification seeds derive from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Only report warnings and errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run,
    /// Run a base scenario and its variants; needs --config.
    Sweep,
    /// Identify the suspension parameters.
    Ident {
        /// Use the simplified model itself as the reference.
        #[arg(long)]
        twin: bool,
    },
    /// Print the modal summary.
    Modes,
    /// Write the track profile.
    GenTrack,
}

fn scenario(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seeds = Seeds::from_base(seed);
    }
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &ScenarioConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| Path::new("out").join(&cfg.run_id))
}

/// Runs the command and returns the summary to print on stdout.
fn run(cli: &Cli) -> Result<String, CliError> {
    let mut text = String::new();
    match &cli.command {
        Command::Run => {
            let cfg = scenario(cli)?;
            let out = out_dir(cli, &cfg);
            let run = run_scenario(&cfg, &out)?;
            for b in &run.report.bands {
                writeln!(text, "{:>6}  {}", b.name, alignest_cli::sweep::format_cell(b)).ok();
            }
            log::info!("outputs written to {}", out.display());
        }
        Command::Sweep => {
            let path = cli
                .config
                .as_ref()
                .ok_or_else(|| CliError::Config("sweep needs --config <sweep.json>".into()))?;
            let sweep = SweepConfig::load(path)?.resolve(cli.seed)?;
            let out = cli.out.clone().unwrap_or_else(|| Path::new("out").join(&sweep.sweep_id));
            let result = run_sweep(&sweep, &out);
            let table = out.join(format!("{}.csv", sweep.sweep_id));
            if let Ok(table) = std::fs::read_to_string(&table) {
                text.push_str(&table);
            }
            if let Err(e) = result {
                print_summary(&text);
                return Err(e);
            }
        }
        Command::Ident { twin } => {
            let cfg = scenario(cli)?;
            let out = out_dir(cli, &cfg);
            let outcome = run_ident(&cfg, *twin || cfg.ident.twin, &out)?;
            for (name, v) in &outcome.result.parameters {
                writeln!(text, "{name:>4} = {v:.6e}").ok();
            }
            writeln!(text, "J_ls = {:.6e}", outcome.result.j_ls).ok();
        }
        Command::Modes => {
            let cfg = scenario(cli)?;
            let report = run_modes(&cfg, &out_dir(cli, &cfg))?;
            writeln!(text, "Klingel wavelength: {:.3} m", report.klingel_wavelength_m).ok();
            for (name, m) in [("simplified", &report.simplified), ("truth", &report.truth)] {
                writeln!(text, "{name} model (max real part {:.4} 1/s):", m.max_real_part).ok();
                for mode in &m.modes {
                    writeln!(
                        text,
                        "  {:9.4} Hz  zeta {:7.4}  wavelength {:9.3} m",
                        mode.freq_hz, mode.damping_ratio, mode.wavelength_m
                    )
                    .ok();
                }
            }
        }
        Command::GenTrack => {
            let cfg = scenario(cli)?;
            let out = out_dir(cli, &cfg);
            run_gen_track(&cfg, &out)?;
            log::info!("profile written to {}", out.join("profile.csv").display());
        }
    }
    Ok(text)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn print_summary(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(text) => {
            print_summary(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
