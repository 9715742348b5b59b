use std::f64::consts::PI;

use ceofdm_core::gbf::{compute_coefficients, truncation_order};
use ceofdm_core::waveform::{code_from_symbols, ComplexSymbolVector};
use ceofdm_core::{PskCode, WaveformSpec};
use num_complex::Complex;
use proptest::prelude::*;

fn spec(h: f64, phi: Vec<f64>) -> WaveformSpec<f64> {
    WaveformSpec::new(1.0, h, PskCode::unit(phi).unwrap()).unwrap()
}

fn symbols(phases: &[f64]) -> ComplexSymbolVector<f64> {
    let pos: Vec<Complex<f64>> = phases.iter().map(|&p| Complex::from_polar(1.0, p)).collect();
    let mut all: Vec<Complex<f64>> = pos.iter().rev().map(|c| c.conj()).collect();
    all.push(Complex::new(0.0, 0.0));
    all.extend(pos);
    ComplexSymbolVector::new(all).unwrap()
}

proptest! {
    #[test]
    fn frequency_is_phase_derivative(
        phi in prop::collection::vec(-PI..PI, 1..8),
        h in 0.05..3.0f64,
        t in -0.45..0.45f64,
    ) {
        let s = spec(h, phi);
        let step = 1e-6;
        let fd = (s.phase_at(t + step).unwrap() - s.phase_at(t - step).unwrap()) / (2.0 * step) / (2.0 * PI);
        let m = s.freq_mod_at(t).unwrap();
        prop_assert!((fd - m).abs() <= 1e-6 * m.abs().max(1.0));
    }

    #[test]
    fn negated_phases_reverse_time(phi in prop::collection::vec(-PI..PI, 1..8), t in -0.5..0.5f64) {
        let s = spec(0.7, phi);
        let r = s.time_reversed();
        prop_assert!((s.phase_at(t).unwrap() - r.phase_at(-t).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn conjugate_symmetric_symbols(phases in prop::collection::vec(-PI..PI, 8)) {
        let c = symbols(&phases);
        let code = code_from_symbols(&c).unwrap();
        for g in code.gamma() {
            prop_assert!((g - 1.0).abs() < 1e-12);
        }
        let s = WaveformSpec::new(1.0, 0.3, code).unwrap();
        for i in 0..200 {
            let t = -0.5 + i as f64 / 199.0;
            let series = c.series_phase(t, 1.0, 0.3);
            prop_assert!(series.im.abs() < 1e-10);
            prop_assert!((series.re - s.phase_at(t).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_envelope(phi in prop::collection::vec(-PI..PI, 1..6), h in 0.0..2.0f64) {
        let s = WaveformSpec::new(2.0, h, PskCode::unit(phi).unwrap()).unwrap();
        let series = s.sample(s.oversample_floor() * 1.3).unwrap();
        for v in &series.values {
            prop_assert!((v.norm() - 0.5_f64.sqrt()).abs() < 1e-15);
        }
        prop_assert!((series.energy() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn coefficient_symmetries() {
    let code = PskCode::random(5, 32, 4).unwrap();
    let s = WaveformSpec::new(1.0, 0.6, code.clone()).unwrap();
    let a = compute_coefficients(&s, 1e-12).unwrap();
    // negated phases reverse time: c_m -> c_{-m}
    let b = compute_coefficients(&s.time_reversed(), 1e-12).unwrap();
    // a half-turn on every carrier conjugates the pulse: c_m -> c_{-m}*
    let flipped: Vec<f64> = code.phi().iter().map(|p| p + PI).collect();
    let c = compute_coefficients(&spec(0.6, flipped), 1e-12).unwrap();
    assert_eq!(a.order(), b.order());
    for (m, v) in a.iter() {
        assert!((b.get(-m) - v).norm() < 1e-10, "m = {m}");
        assert!((c.get(-m) - v.conj()).norm() < 1e-10, "m = {m}");
    }
}

#[test]
fn truncation_orders_are_stable() {
    let fig1 = WaveformSpec::new(1.0, 0.1856, PskCode::random(24, 32, 7).unwrap()).unwrap();
    let first = truncation_order(&fig1, 1e-12).unwrap();
    assert_eq!(first, truncation_order(&fig1, 1e-12).unwrap());
    assert_eq!(first, 968);
    let two = spec(5.81, vec![0.0, 0.0]);
    let order = truncation_order(&two, 1e-12).unwrap();
    // at least the peak phase excursion 2 pi h (1 + 2)
    assert!(order as f64 >= 2.0 * PI * 5.81 * 3.0);
    assert!(compute_coefficients(&two, 1e-12).unwrap().residual() < 1e-12);
}

#[test]
fn sampled_band_occupancy() {
    // instantaneous frequency of the TBP-200 design stays near +/- 100 Hz
    let s: WaveformSpec<f64> = WaveformSpec::new(1.0, 0.1856, PskCode::random(24, 32, 7).unwrap()).unwrap();
    let series = s.sample(8192.0).unwrap();
    assert_eq!(series.len(), 8192);
    let peak = (0..series.len())
        .map(|n| s.freq_mod_at(series.time(n)).unwrap().abs())
        .fold(0.0, f64::max);
    assert!(peak > 100.0 && peak < 400.0, "{peak}");
}
