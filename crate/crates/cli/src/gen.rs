use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use ceofdm_core::{PskCode, WaveformFile, WaveformSpec};
use clap::Args;

use crate::manifest::RunManifest;
use crate::{ensure_dir, IndexArgs};

pub const SPEC_NAME: &str = "waveform.json";
pub const SERIES_NAME: &str = "waveform.csv";

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Number of carriers.
    #[arg(long = "L")]
    pub carriers: usize,
    /// Pulse length in seconds.
    #[arg(long = "T", default_value_t = 1.0)]
    pub duration: f64,
    #[command(flatten)]
    pub index: IndexArgs,
    /// PSK alphabet size for seeded codes.
    #[arg(long, default_value_t = 32)]
    pub mpsk: u32,
    /// Draw the code phases from the PSK alphabet with this seed (ChaCha8).
    #[arg(long, conflicts_with = "phi_file")]
    pub seed: Option<u64>,
    /// JSON array of code phases in radians, one per carrier.
    #[arg(long)]
    pub phi_file: Option<PathBuf>,
    /// Sampling rate of the written time series (default: the oversampling floor).
    #[arg(long)]
    pub fs: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn read_phases(path: &PathBuf, carriers: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let phi: Vec<f64> = serde_json::from_str(&text).with_context(|| format!("{} is not a JSON array of numbers", path.display()))?;
    if phi.len() != carriers {
        bail!("{} holds {} phases but --L is {carriers}", path.display(), phi.len());
    }
    Ok(phi)
}

pub fn run(args: GenArgs) -> Result<()> {
    if args.carriers == 0 {
        bail!("--L must be at least 1");
    }
    let h = args.index.resolve(args.duration, args.carriers)?;
    let code = match (&args.seed, &args.phi_file) {
        (Some(seed), None) => PskCode::random(args.carriers, args.mpsk, *seed)?,
        (None, Some(path)) => PskCode::unit(read_phases(path, args.carriers)?)?,
        _ => PskCode::from_alphabet(&vec![0; args.carriers], args.mpsk)?,
    };
    let spec = WaveformSpec::new(args.duration, h, code)?;
    let fs = args.fs.unwrap_or_else(|| spec.oversample_floor().ceil());
    let series = spec.sample(fs)?;

    ensure_dir(&args.out)?;
    let mut manifest = RunManifest::new("gen");
    manifest.param("L", args.carriers);
    manifest.param("T", args.duration);
    manifest.param("h", h);
    manifest.param("tbp", args.index.tbp);
    manifest.param("mpsk", args.mpsk);
    manifest.param("seed", args.seed);
    manifest.param("phi_file", &args.phi_file);
    manifest.param("fs", fs);

    let file = WaveformFile::from_spec(&spec);
    manifest.json(&args.out, SPEC_NAME, &file)?;
    manifest.output(&args.out, SERIES_NAME, |out| Ok(series.write_csv(out)?))?;
    manifest.spec_file = Some(args.out.join(SPEC_NAME));
    manifest.param("spec_hash", file.hash());
    manifest.save(&args.out)?;
    println!("h = {h:.6}, {} samples at {fs} Hz -> {}", series.len(), args.out.display());
    Ok(())
}
