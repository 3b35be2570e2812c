//! `qreset`: simulate reset protocols, infer entropy-flow vectors and check
//! the mismatch-cost identity over sampled inputs.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qreset_core::SamplingMode;

use crate::commands::CliError;
use crate::config::{parse_triple, ExperimentConfig, Overrides, ProtocolName};

#[derive(Debug, Parser)]
#[command(
    name = "qreset",
    version,
    about = "Thermodynamics of reliable qubit reset"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate sampled inputs and write one trajectory CSV per input.
    Simulate,
    /// Infer the entropy-flow vector from four probe runs.
    InferPhi,
    /// Check the mismatch-cost identity on sampled inputs.
    Verify,
    /// Closed-form swap thermodynamics over a grid of bath gaps.
    SwapDemo,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// ball or sphere.
    #[arg(long, global = true)]
    sampling: Option<SamplingMode>,
    /// fig1-rotating, fig2-fixed-angle, fig3-relaxation, swap or custom.
    #[arg(long, global = true)]
    protocol: Option<ProtocolName>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest accepted |residual| in verify.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tolerance: Option<f64>,
    /// Take α₀ from the inferred entropy-flow vector instead of the minimiser.
    #[arg(long, global = true)]
    alpha0_from_phi: bool,
    /// Single input `ax,ay,az` in place of sampled ones.
    #[arg(long, global = true, value_parser = parse_triple, allow_hyphen_values = true)]
    initial: Option<[f64; 3]>,
    /// Target Bloch vector `ax,ay,az`.
    #[arg(long, global = true, value_parser = parse_triple, allow_hyphen_values = true)]
    target: Option<[f64; 3]>,
    /// Coupling c.
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    dt: Option<f64>,
    #[arg(long = "E0", global = true, allow_negative_numbers = true)]
    e0: Option<f64>,
    #[arg(long = "Etau", global = true, allow_negative_numbers = true)]
    etau: Option<f64>,
    /// Bath gap of the swap protocol.
    #[arg(long = "Eb", global = true, allow_negative_numbers = true)]
    eb: Option<f64>,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            protocol: self.protocol,
            c: self.c,
            tau: self.tau,
            dt: self.dt,
            e0: self.e0,
            etau: self.etau,
            eb: self.eb,
            samples: self.samples,
            seed: self.seed,
            sampling: self.sampling,
            target: self.target,
            tolerance: self.tolerance,
            alpha0_from_phi: self.alpha0_from_phi,
            initial: self.initial,
            out: self.out.clone(),
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = ExperimentConfig::load(cli.global.config.as_deref(), &cli.global.overrides())?;
    match cli.command {
        Command::Simulate => commands::simulate(&cfg),
        Command::InferPhi => {
            let value = commands::infer(&cfg)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("serialisable")
            );
            Ok(())
        }
        Command::Verify => {
            let outcome = commands::verify(&cfg)?;
            println!(
                "verified {} samples: max |residual| = {:e}, epsilon = {:e}",
                outcome.records.len(),
                outcome.max_abs_residual(),
                outcome.epsilon
            );
            Ok(())
        }
        Command::SwapDemo => commands::swap_demo(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qreset: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
