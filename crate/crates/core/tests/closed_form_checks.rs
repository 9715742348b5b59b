use ceofdm_core::closed_form::{acf, spectrum};
use ceofdm_core::gbf::compute_coefficients;
use ceofdm_core::oracle::{af_numeric, rdcf_numeric, spectrum_numeric, OracleConfig, QuadRule};
use ceofdm_core::sidelobe::{default_intervals, sidelobe_report};
use ceofdm_core::{PskCode, WaveformSpec};
use rayon::prelude::*;

fn fig1() -> WaveformSpec<f64> {
    WaveformSpec::new(1.0, 0.1856, PskCode::random(24, 32, 7).unwrap()).unwrap()
}

#[test]
fn two_carrier_acf_matches_oracle() {
    let spec = WaveformSpec::new(1.0, 5.81, PskCode::unit(vec![0.0, 0.0]).unwrap()).unwrap();
    let coeffs = compute_coefficients(&spec, 1e-12).unwrap();
    let cfg = OracleConfig::accurate(&spec);
    let worst = (0..512)
        .into_par_iter()
        .map(|i| {
            let tau = -1.0 + 2.0 * (i as f64 + 0.5) / 512.0;
            (acf(&coeffs, 1.0, tau).unwrap() - af_numeric(&spec, tau, 0.0, &cfg).unwrap()).norm()
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn mainlobe_narrows_as_h_grows() {
    let code = PskCode::random(24, 32, 7).unwrap();
    let widths: Vec<f64> = [0.05, 0.1856, 0.5]
        .iter()
        .map(|&h| {
            let spec = WaveformSpec::new(1.0, h, code.clone()).unwrap();
            let coeffs = compute_coefficients(&spec, 1e-12).unwrap();
            let r = sidelobe_report(&coeffs, 1.0, default_intervals(&spec));
            assert!(r.null_found);
            r.delta_tau
        })
        .collect();
    assert!(widths[0] > widths[1] && widths[1] > widths[2], "{widths:?}");
}

#[test]
fn fig_one_spectrum_matches_sampled_oracle() {
    let spec = fig1();
    let coeffs = compute_coefficients(&spec, 1e-12).unwrap();
    let grid: Vec<f64> = (-1600..=1600).map(|k| k as f64 / 8.0).collect();
    let closed = spectrum(&coeffs, 1.0, &grid);
    let cfg = OracleConfig::new(16.0 * spec.oversample_floor(), QuadRule::Midpoint);
    let numeric = spectrum_numeric(&spec, &cfg, &grid).unwrap();
    let worst = closed
        .values
        .iter()
        .zip(&numeric.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-4, "{worst:e}");
    assert!((numeric.energy() - 1.0).abs() < 1e-3);
}

#[test]
fn out_of_band_energy_follows_frequency_occupancy() {
    // For a wideband FM pulse the power spectrum tracks the distribution of
    // instantaneous frequency, so the share of |S|^2 beyond +/- 100 Hz is close
    // to the share of time that |m(t)| > 100 Hz.
    let spec = fig1();
    let coeffs = compute_coefficients(&spec, 1e-12).unwrap();
    let grid: Vec<f64> = (-3200..=3200).map(|k| k as f64 / 8.0).collect();
    let s = spectrum(&coeffs, 1.0, &grid);
    let out_of_band = 1.0 - s.energy_within(100.0);
    let n = 100_000;
    let beyond = (0..n)
        .filter(|i| {
            let t = -0.5 + (*i as f64 + 0.5) / n as f64;
            spec.freq_mod_at(t).unwrap().abs() > 100.0
        })
        .count() as f64
        / n as f64;
    assert!((out_of_band - beyond).abs() < 0.02, "{out_of_band} vs {beyond}");
}

#[test]
fn simpson_oracle_converges_at_fourth_order() {
    let spec = WaveformSpec::new(1.0, 0.5, PskCode::random(3, 32, 1).unwrap()).unwrap();
    let floor = spec.oversample_floor();
    let cfg = |k: f64| OracleConfig::new(k * floor, QuadRule::Simpson);
    for (tau, nu) in [(0.3, 2.0), (-0.7, -5.5)] {
        let at = |k: f64| af_numeric(&spec, tau, nu, &cfg(k)).unwrap();
        let (x2, x4, x8, x16) = (at(2.0), at(4.0), at(8.0), at(16.0));
        let ratio = (x2 - x4).norm() / (x4 - x8).norm();
        assert!(ratio > 10.0 && ratio < 24.0, "ratio {ratio}");
        assert!((x8 - x16).norm() < 1e-8, "{:e}", (x8 - x16).norm());
    }
    let at = |k: f64| -> f64 { rdcf_numeric(&spec, &cfg(k)).unwrap() };
    assert!((at(8.0) - at(16.0)).abs() < 1e-8 * at(16.0).abs().max(1.0));
}
