//! The ambiguity volume over the whole plane is one; a finite window only
//! captures what falls inside it.

use ceofdm_core::closed_form::af_surface;
use ceofdm_core::gbf::compute_coefficients;
use ceofdm_core::{PskCode, WaveformSpec};

fn volume(h: f64, phi: Vec<f64>, nu_half: f64, nu_step: f64, tau_n: usize) -> f64 {
    let spec = WaveformSpec::new(1.0, h, PskCode::unit(phi).unwrap()).unwrap();
    let coeffs = compute_coefficients(&spec, 1e-12).unwrap();
    let taus: Vec<f64> = (0..=tau_n).map(|i| -1.0 + 2.0 * i as f64 / tau_n as f64).collect();
    let steps = (2.0 * nu_half / nu_step).round() as usize;
    let nus: Vec<f64> = (0..=steps).map(|j| -nu_half + j as f64 * nu_step).collect();
    af_surface(&coeffs, 1.0, &taus, &nus).unwrap().volume()
}

#[test]
fn narrowband_pulse_fills_a_wide_window() {
    let v = volume(0.3, vec![0.4], 60.0, 0.125, 800);
    assert!((v - 1.0).abs() < 0.01, "{v}");
}

#[test]
fn window_captures_a_fraction_of_a_wideband_pulse() {
    // delay x Doppler extent of the energy scales with the bandwidth, so a
    // fixed +/- 5/T window keeps shrinking fractions as h grows
    let narrow = volume(0.5, vec![1.0, 0.2], 5.0, 0.125, 1000);
    let wide = volume(3.0, vec![1.0, 0.2], 5.0, 0.125, 1000);
    assert!(wide < narrow && narrow < 1.0, "{narrow} {wide}");
}
