use std::path::PathBuf;

use anyhow::{bail, Result};
use ceofdm_core::eoa::lfm_rms_bandwidth;
use ceofdm_core::{compute_coefficients, h_for_tbp, spectrum, Lfm, PskCode, WaveformSpec};
use clap::Args;
use serde::Serialize;

use crate::ensure_dir;
use crate::manifest::RunManifest;

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Time-bandwidth product of the LFM sweep.
    #[arg(long)]
    pub tbp: f64,
    #[arg(long = "L")]
    pub carriers: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub duration: f64,
    /// Seed for a random PSK code (default: all phases zero).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 32)]
    pub mpsk: u32,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct Summary {
    tbp: f64,
    #[serde(rename = "L")]
    carriers: usize,
    #[serde(rename = "T")]
    duration: f64,
    h: f64,
    delta_f: f64,
    /// Energy outside |f| <= delta_f / 2.
    out_of_band_ceofdm: f64,
    out_of_band_lfm: f64,
    /// Energy outside |f| <= delta_f.
    out_of_band_ceofdm_wide: f64,
    out_of_band_lfm_wide: f64,
    lfm_beta2_numeric: f64,
    lfm_beta2_closed: f64,
}

pub fn run(args: CompareArgs) -> Result<()> {
    if !(args.tbp > 0.0) {
        bail!("--tbp must be positive, got {}", args.tbp);
    }
    if args.carriers == 0 {
        bail!("--L must be at least 1");
    }
    let duration = args.duration;
    let delta_f = args.tbp / duration;
    let h = h_for_tbp(duration, delta_f, args.carriers)?;
    let code = match args.seed {
        Some(seed) => PskCode::random(args.carriers, args.mpsk, seed)?,
        None => PskCode::from_alphabet(&vec![0; args.carriers], args.mpsk)?,
    };
    let spec = WaveformSpec::new(duration, h, code)?;
    let coeffs = compute_coefficients(&spec, args.tol)?;
    let lfm = Lfm::new(duration, delta_f)?;

    let f_max = (2.0 * delta_f).max(40.0 / duration);
    let steps = (2.0 * f_max * 8.0 * duration).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| -f_max + k as f64 / (8.0 * duration)).collect();
    let ce = spectrum(&coeffs, duration, &grid);
    let lf = lfm.spectrum_numeric(&grid);
    // both pulses have unit energy, so the out-of-band share includes
    // whatever lies beyond the grid
    let summary = Summary {
        tbp: args.tbp,
        carriers: args.carriers,
        duration,
        h,
        delta_f,
        out_of_band_ceofdm: 1.0 - ce.energy_within(delta_f / 2.0),
        out_of_band_lfm: 1.0 - lf.energy_within(delta_f / 2.0),
        out_of_band_ceofdm_wide: 1.0 - ce.energy_within(delta_f),
        out_of_band_lfm_wide: 1.0 - lf.energy_within(delta_f),
        lfm_beta2_numeric: lfm.rms_bandwidth_numeric(4096),
        lfm_beta2_closed: lfm_rms_bandwidth(delta_f),
    };

    ensure_dir(&args.out)?;
    let mut manifest = RunManifest::new("compare-lfm");
    manifest.param("tbp", args.tbp);
    manifest.param("L", args.carriers);
    manifest.param("T", duration);
    manifest.param("h", h);
    manifest.param("seed", args.seed);
    manifest.param("mpsk", args.mpsk);
    manifest.param("tol", args.tol);
    manifest.output(&args.out, "spectrum_ceofdm.csv", |out| Ok(ce.write_csv(out)?))?;
    manifest.output(&args.out, "spectrum_lfm.csv", |out| Ok(lf.write_csv(out)?))?;
    manifest.json(&args.out, "compare.json", &summary)?;
    manifest.save(&args.out)?;
    println!(
        "out-of-band energy beyond +/- delta_f/2: CE-OFDM {:.4}, LFM {:.4}; beyond +/- delta_f: CE-OFDM {:.2e}, LFM {:.2e}",
        summary.out_of_band_ceofdm, summary.out_of_band_lfm, summary.out_of_band_ceofdm_wide, summary.out_of_band_lfm_wide
    );
    Ok(())
}
