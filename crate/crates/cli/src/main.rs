use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

mod analyze;
mod compare;
mod gen;
mod manifest;
mod scan;

/// Constant-envelope OFDM radar waveform synthesis and analysis.
#[derive(Parser)]
#[command(name = "ceofdm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a waveform spec and its sampled time series.
    Gen(gen::GenArgs),
    /// Spectrum, ambiguity, autocorrelation, EOA and sidelobe reports for a spec.
    Analyze(analyze::AnalyzeArgs),
    /// ISL/PSLR surface over the phases of a two-carrier code.
    Scan(scan::ScanArgs),
    /// Spectra of a CE-OFDM pulse and the LFM of equal RMS bandwidth.
    CompareLfm(compare::CompareArgs),
}

/// Modulation index, given directly or through the equivalent LFM sweep.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct IndexArgs {
    /// Modulation index h.
    #[arg(long)]
    pub h: Option<f64>,
    /// Time-bandwidth product of the LFM with the same RMS bandwidth.
    #[arg(long)]
    pub tbp: Option<f64>,
}

impl IndexArgs {
    pub fn resolve(&self, duration: f64, carriers: usize) -> Result<f64> {
        match (self.h, self.tbp) {
            (Some(h), None) => Ok(h),
            (None, Some(tbp)) => {
                if !(tbp > 0.0) {
                    bail!("--tbp must be positive, got {tbp}");
                }
                Ok(ceofdm_core::h_for_tbp(duration, tbp / duration, carriers)?)
            }
            _ => bail!("exactly one of --h and --tbp is required"),
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("CEOFDM_THREADS") {
        let threads: usize = value
            .parse()
            .with_context(|| format!("CEOFDM_THREADS must be a positive integer, got {value:?}"))?;
        if threads == 0 {
            bail!("CEOFDM_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

pub fn ensure_dir(dir: &PathBuf) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Gen(args) => gen::run(args),
        Command::Analyze(args) => analyze::run(args),
        Command::Scan(args) => scan::run(args),
        Command::CompareLfm(args) => compare::run(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
