use std::path::PathBuf;

use anyhow::{bail, Result};
use ceofdm_core::metric_surface;
use clap::Args;

use crate::manifest::RunManifest;
use crate::{ensure_dir, IndexArgs};

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Number of carriers; only 2 is supported.
    #[arg(long = "L", default_value_t = 2)]
    pub carriers: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub duration: f64,
    #[command(flatten)]
    pub index: IndexArgs,
    /// Phase samples per axis over [-pi, pi).
    #[arg(long, default_value_t = 64)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: ScanArgs) -> Result<()> {
    if args.carriers != 2 {
        bail!("scan covers the two-carrier phase plane only; --L must be 2, got {}", args.carriers);
    }
    let h = args.index.resolve(args.duration, 2)?;
    let surface = metric_surface(args.duration, h, args.grid_n, args.tol)?;

    ensure_dir(&args.out)?;
    let mut manifest = RunManifest::new("scan");
    manifest.param("L", 2);
    manifest.param("T", args.duration);
    manifest.param("h", h);
    manifest.param("tbp", args.index.tbp);
    manifest.param("grid_n", args.grid_n);
    manifest.param("tol", args.tol);
    manifest.param("intervals", surface.intervals);
    manifest.output(&args.out, "surface.csv", |out| Ok(surface.write_csv(out)?))?;
    manifest.json(&args.out, "surface.json", &surface)?;
    manifest.save(&args.out)?;

    let spread = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (isl_lo, isl_hi) = spread(&surface.isl_db);
    let (pslr_lo, pslr_hi) = spread(&surface.pslr_db);
    println!("ISL [{isl_lo:.2}, {isl_hi:.2}] dB, PSLR [{pslr_lo:.2}, {pslr_hi:.2}] dB over {} codes", surface.isl_db.len());
    Ok(())
}
