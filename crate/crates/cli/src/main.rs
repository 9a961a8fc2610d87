use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dsp_soliton::eit::classify_regime;
use dsp_soliton::scenario::{
    all_passed, cmd_coeffs, cmd_fig1, cmd_propagate, cmd_sweep, parse_scenario, quick_checks, run_selfcheck, Check, Fault, Scenario,
};
use dsp_soliton::Error;

const EXIT_VALIDATION: u8 = 1;
const EXIT_INTEGRATION: u8 = 2;
const EXIT_SELFCHECK: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "dsp-soliton", version, about = "Dark-state-polariton soliton scenarios in EIT media")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the medium coefficients at one instant.
    Coeffs {
        #[arg(long)]
        config: PathBuf,
        /// Time in seconds.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        time: f64,
    },
    /// Classify the nonlinear regime for a control Rabi frequency and detuning.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, allow_negative_numbers = true)]
        detuning: f64,
    },
    /// Propagate a scenario and write diagnostics, snapshots and a summary.
    Propagate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the normalized amplitude surface |Psi(z/L, t/tau)|/E0.
    Fig1 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeat a propagation over values of one parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Dotted parameter path, e.g. control.omega_start.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance checks and report margins.
    Selfcheck {
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
        /// Skip the propagation-based checks.
        #[arg(long, hide = true)]
        quick: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultArg {
    Beta2Sign,
}

fn load(path: &Path) -> Result<Scenario, Error> {
    let text = fs::read_to_string(path)?;
    parse_scenario(&text)
}

fn exit_for(err: &Error) -> u8 {
    if err.is_integration() {
        EXIT_INTEGRATION
    } else {
        EXIT_VALIDATION
    }
}

fn print_checks(checks: &[Check]) -> bool {
    for c in checks {
        println!("{c}");
    }
    let ok = all_passed(checks);
    let failed = checks.iter().filter(|c| c.passed == Some(false)).count();
    println!("{}: {} checks, {failed} failed", if ok { "PASS" } else { "FAIL" }, checks.len());
    ok
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Coeffs { config, time } => {
            print!("{}", cmd_coeffs(&load(&config)?, time)?);
        }
        Command::Classify { omega, detuning } => {
            if !(omega > 0.0 && omega.is_finite() && detuning.is_finite()) {
                return Err(Error::Domain(format!(
                    "need a finite omega > 0 and finite detuning, got {omega}, {detuning}"
                )));
            }
            let regime = classify_regime(detuning, omega);
            println!("{} {}", regime.name(), regime.code());
        }
        Command::Propagate { config, out } => {
            let outcome = cmd_propagate(&load(&config)?, &out)?;
            println!("{} steps, summary in {}", outcome.summary.steps, out.join("summary.txt").display());
        }
        Command::Fig1 { config, out } => {
            let data = cmd_fig1(&load(&config)?, &out)?;
            println!(
                "E0 = {:.6e}, L = {:.6e} m, tau = {:.6e} s, {} slices in {}",
                data.units.e0,
                data.units.length,
                data.units.time,
                data.slices.len(),
                out.join("fig1.csv").display()
            );
        }
        Command::Sweep { config, param, values, out } => {
            let table = cmd_sweep(&load(&config)?, &param, &values, &out)?;
            let failed = table.rows.iter().filter(|r| r.outcome.is_err()).count();
            let fmt = |s: Option<f64>| s.map_or("n/a".to_string(), |v| format!("{v:.6}"));
            println!(
                "{} runs ({failed} failed), width slope {}, tau slope {}",
                table.rows.len(),
                fmt(table.slope_hwhm),
                fmt(table.slope_tau)
            );
        }
        Command::Selfcheck { inject_fault, quick } => {
            let fault = inject_fault.map(|FaultArg::Beta2Sign| Fault::FlipBeta2Sign);
            let checks = if quick { quick_checks(fault)? } else { run_selfcheck(fault) };
            if !print_checks(&checks) {
                return Ok(EXIT_SELFCHECK);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
