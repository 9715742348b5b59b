use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use ceofdm_core::closed_form::{acf_uniform, af_surface, spectrum};
use ceofdm_core::eoa::{ellipse_contour, eoa_closed_form, EoaReport};
use ceofdm_core::io::fmt_real;
use ceofdm_core::oracle::{
    acf_numeric_lattice, af_numeric, rdcf_numeric, rms_bandwidth_numeric, rms_pulselength_numeric, spectrum_numeric,
    OracleConfig, OracleReport, QuadRule,
};
use ceofdm_core::sidelobe::{default_intervals, sidelobe_report};
use ceofdm_core::{compute_coefficients, GbfCoefficients, WaveformFile, WaveformSpec};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensure_dir;
use crate::manifest::RunManifest;

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Waveform spec written by `gen`.
    pub spec: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Closed-form spectrum.
    #[arg(long)]
    pub spectrum: bool,
    /// Ambiguity surface on TAU_N delays over [-T, T] and NU_N Dopplers.
    #[arg(long, num_args = 2, value_names = ["TAU_N", "NU_N"])]
    pub af: Option<Vec<usize>>,
    /// Doppler half-span of the --af grid in Hz (default: 10/T).
    #[arg(long)]
    pub nu_max: Option<f64>,
    /// Autocorrelation on [0, T].
    #[arg(long)]
    pub acf: bool,
    /// Mainlobe ellipse parameters and contour.
    #[arg(long)]
    pub eoa: bool,
    /// Contour level for the ellipse export.
    #[arg(long, default_value_t = 0.5)]
    pub xi: f64,
    /// Mainlobe null, PSLR and ISL.
    #[arg(long)]
    pub sidelobes: bool,
    /// Add time-domain quadrature columns and absolute errors.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle sampling rate in Hz (default: 64x the oversampling floor).
    #[arg(long)]
    pub fs: Option<f64>,
    /// Delay intervals on [0, T] for --acf and --sidelobes.
    #[arg(long)]
    pub intervals: Option<usize>,
    /// Coefficient truncation tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Also write the Fourier coefficients.
    #[arg(long)]
    pub coeffs: bool,
}

/// Sweep of the LFM with the same RMS bandwidth.
fn equivalent_sweep(spec: &WaveformSpec<f64>) -> f64 {
    (3.0 * eoa_closed_form(spec).beta2).sqrt() / std::f64::consts::PI
}

fn oracle_config(spec: &WaveformSpec<f64>, fs: Option<f64>) -> OracleConfig<f64> {
    let cfg = OracleConfig::accurate(spec);
    match fs {
        Some(fs) => cfg.with_fs(fs),
        None => cfg,
    }
}

fn write_spectrum(
    args: &AnalyzeArgs,
    spec: &WaveformSpec<f64>,
    coeffs: &GbfCoefficients<f64>,
    manifest: &mut RunManifest,
) -> Result<()> {
    let duration = spec.duration();
    let f_max = (2.0 * equivalent_sweep(spec)).max(20.0 / duration);
    let steps = (2.0 * f_max * 8.0 * duration).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| -f_max + k as f64 / (8.0 * duration)).collect();
    let closed = spectrum(coeffs, duration, &grid);
    manifest.param("spectrum_points", grid.len());
    if !args.oracle {
        return manifest.output(&args.out, "spectrum.csv", |out| Ok(closed.write_csv(out)?));
    }
    // the spectrum oracle is a direct DTFT, so it uses midpoint samples
    let fs = args.fs.unwrap_or(16.0 * spec.oversample_floor());
    let numeric = spectrum_numeric(spec, &OracleConfig::new(fs, QuadRule::Midpoint), &grid)?;
    manifest.param("spectrum_oracle_fs", fs);
    manifest.output(&args.out, "spectrum.csv", |out| {
        writeln!(out, "f,re,im,abs2,numeric_re,numeric_im,abs_err")?;
        for ((f, a), b) in grid.iter().zip(&closed.values).zip(&numeric.values) {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                fmt_real(*f),
                fmt_real(a.re),
                fmt_real(a.im),
                fmt_real(a.norm_sqr()),
                fmt_real(b.re),
                fmt_real(b.im),
                fmt_real((a - b).norm())
            )?;
        }
        Ok(())
    })
}

fn axis(n: usize, half: f64) -> Result<Vec<f64>> {
    match n {
        0 => bail!("grid sizes must be positive"),
        1 => Ok(vec![0.0]),
        _ => Ok((0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect()),
    }
}

fn write_af(
    args: &AnalyzeArgs,
    sizes: &[usize],
    spec: &WaveformSpec<f64>,
    coeffs: &GbfCoefficients<f64>,
    manifest: &mut RunManifest,
) -> Result<()> {
    let duration = spec.duration();
    let nu_max = args.nu_max.unwrap_or(10.0 / duration);
    let taus = axis(sizes[0], duration)?;
    let nus = axis(sizes[1], nu_max)?;
    let surface = af_surface(coeffs, duration, &taus, &nus)?;
    manifest.param("af_tau_n", sizes[0]);
    manifest.param("af_nu_n", sizes[1]);
    manifest.param("af_nu_max", nu_max);
    let (i, j, peak) = surface.peak();
    println!("AF peak |chi|^2 = {peak:.12} at tau = {}, nu = {}", taus[i], nus[j]);
    if !args.oracle {
        return manifest.output(&args.out, "af.csv", |out| Ok(surface.write_csv(out)?));
    }
    let cfg = oracle_config(spec, args.fs);
    let numeric: Vec<_> = taus
        .par_iter()
        .map(|&tau| nus.iter().map(|&nu| af_numeric(spec, tau, nu, &cfg)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    manifest.param("oracle_fs", cfg.fs);
    manifest.param("oracle_rule", cfg.rule);
    manifest.output(&args.out, "af.csv", |out| {
        writeln!(out, "tau,nu,re,im,abs2,numeric_re,numeric_im,abs_err")?;
        for (i, tau) in taus.iter().enumerate() {
            for (j, nu) in nus.iter().enumerate() {
                let (a, b) = (surface.at(i, j), numeric[i][j]);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    fmt_real(*tau),
                    fmt_real(*nu),
                    fmt_real(a.re),
                    fmt_real(a.im),
                    fmt_real(a.norm_sqr()),
                    fmt_real(b.re),
                    fmt_real(b.im),
                    fmt_real((a - b).norm())
                )?;
            }
        }
        Ok(())
    })
}

/// Lattice oversampling that keeps the oracle above 64x the sampling floor.
fn lattice_oversample(spec: &WaveformSpec<f64>, intervals: usize) -> usize {
    ((64.0 * spec.oversample_floor() * spec.duration() / intervals as f64).ceil() as usize).max(8)
}

fn write_acf(
    args: &AnalyzeArgs,
    intervals: usize,
    spec: &WaveformSpec<f64>,
    coeffs: &GbfCoefficients<f64>,
    manifest: &mut RunManifest,
) -> Result<()> {
    let closed = acf_uniform(coeffs, spec.duration(), intervals);
    if !args.oracle {
        return manifest.output(&args.out, "acf.csv", |out| Ok(closed.write_csv(out)?));
    }
    let oversample = lattice_oversample(spec, intervals);
    let numeric = acf_numeric_lattice(spec, intervals, oversample)?;
    manifest.param("acf_oracle_oversample", oversample);
    let mut worst: f64 = 0.0;
    manifest.output(&args.out, "acf.csv", |out| {
        writeln!(out, "tau,re,im,abs2,numeric_re,numeric_im,abs_err")?;
        for ((t, a), b) in closed.tau.iter().zip(&closed.values).zip(&numeric.values) {
            let err = (a - b).norm();
            worst = worst.max(err);
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                fmt_real(*t),
                fmt_real(a.re),
                fmt_real(a.im),
                fmt_real(a.norm_sqr()),
                fmt_real(b.re),
                fmt_real(b.im),
                fmt_real(err)
            )?;
        }
        Ok(())
    })?;
    println!("ACF max abs_err vs lattice oracle = {worst:.3e}");
    Ok(())
}

#[derive(Serialize)]
struct EoaOracle {
    reports: Vec<OracleReport>,
}

fn write_eoa(args: &AnalyzeArgs, spec: &WaveformSpec<f64>, manifest: &mut RunManifest) -> Result<()> {
    let report = EoaReport::new(spec);
    manifest.json(&args.out, "eoa.json", &report)?;
    println!(
        "beta2 = {:.6e}, tau2 = {:.6}, rho = {:.6}, rho_norm = {:.4}, rho_norm_max = {:.4}",
        report.beta2, report.tau2, report.rho, report.rho_norm, report.rho_norm_max
    );
    let p = eoa_closed_form(spec);
    match ellipse_contour(&p, args.xi, 256) {
        Ok(points) => {
            manifest.param("xi", args.xi);
            manifest.output(&args.out, "ellipse.csv", |out| {
                writeln!(out, "tau,nu")?;
                for (tau, nu) in points {
                    writeln!(out, "{},{}", fmt_real(tau), fmt_real(nu))?;
                }
                Ok(())
            })?;
        }
        Err(err) => eprintln!("warning: no ellipse contour written: {err}"),
    }
    if args.oracle {
        let cfg = oracle_config(spec, args.fs);
        let (fs, rule) = (cfg.fs, cfg.rule);
        let reports = vec![
            OracleReport::new("beta2", p.beta2, rms_bandwidth_numeric(spec, &cfg)?, fs, rule),
            OracleReport::new("tau2", p.tau2, rms_pulselength_numeric(spec, &cfg)?, fs, rule),
            OracleReport::new("rho", p.rho, rdcf_numeric(spec, &cfg)?, fs, rule),
        ];
        manifest.json(&args.out, "eoa_oracle.json", &EoaOracle { reports })?;
    }
    Ok(())
}

pub fn run(args: AnalyzeArgs) -> Result<()> {
    if !(args.spectrum || args.af.is_some() || args.acf || args.eoa || args.sidelobes || args.coeffs) {
        bail!("nothing to do: pass at least one of --spectrum, --af, --acf, --eoa, --sidelobes, --coeffs");
    }
    let file = WaveformFile::load(&args.spec)?;
    let spec: WaveformSpec<f64> = file.to_spec()?;
    ensure_dir(&args.out)?;
    let mut manifest = RunManifest::new("analyze");
    manifest.spec_file = Some(args.spec.clone());
    manifest.param("spec_hash", file.hash());
    manifest.param("tol", args.tol);
    manifest.param("oracle", args.oracle);

    let coeffs = compute_coefficients(&spec, args.tol)?;
    manifest.param("truncation_order", coeffs.order());
    let intervals = args.intervals.unwrap_or_else(|| default_intervals(&spec));
    if intervals < 2 {
        bail!("--intervals must be at least 2");
    }

    if args.coeffs {
        manifest.output(&args.out, "coefficients.csv", |out| Ok(coeffs.write_csv(out)?))?;
    }
    if args.spectrum {
        write_spectrum(&args, &spec, &coeffs, &mut manifest)?;
    }
    if let Some(sizes) = &args.af {
        write_af(&args, sizes, &spec, &coeffs, &mut manifest)?;
    }
    if args.acf || args.sidelobes {
        manifest.param("intervals", intervals);
    }
    if args.acf {
        write_acf(&args, intervals, &spec, &coeffs, &mut manifest)?;
    }
    if args.eoa {
        write_eoa(&args, &spec, &mut manifest)?;
    }
    if args.sidelobes {
        let report = sidelobe_report(&coeffs, spec.duration(), intervals);
        if !report.null_found {
            eprintln!("warning: |R|^2 has no local minimum on (0, T]; PSLR reported as 0 dB");
        }
        println!(
            "delta_tau = {:.6e}, PSLR = {:.3} dB, ISL = {:.3} dB",
            report.delta_tau, report.pslr_db, report.isl_db
        );
        manifest.json(&args.out, "sidelobes.json", &report)?;
    }
    manifest.save(&args.out)?;
    Ok(())
}
