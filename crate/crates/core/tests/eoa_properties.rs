use std::f64::consts::PI;

use ceofdm_core::eoa::{ellipse_contour, eoa_closed_form, rho_norm_max, EoaParameters};
use ceofdm_core::{PskCode, WaveformSpec};
use proptest::prelude::*;

fn spec(duration: f64, h: f64, phi: Vec<f64>) -> WaveformSpec<f64> {
    WaveformSpec::new(duration, h, PskCode::unit(phi).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn coupling_bounded_by_alternating_code(phi in prop::collection::vec(-PI..PI, 1..30)) {
        let carriers = phi.len();
        let p = eoa_closed_form(&spec(1.0, 0.5, phi));
        prop_assert!(p.rho_norm.abs() <= rho_norm_max::<f64>(carriers) + 1e-12);
        prop_assert!(p.rho_norm.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn bandwidth_ignores_phases(phi in prop::collection::vec(-PI..PI, 6), h in 0.01..4.0f64) {
        let a = eoa_closed_form(&spec(1.3, h, phi)).beta2;
        let b = eoa_closed_form(&spec(1.3, h, vec![0.0; 6])).beta2;
        prop_assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn normalized_coupling_ignores_h_and_t(
        phi in prop::collection::vec(-PI..PI, 1..10),
        h in 0.01..5.0f64,
        t in 0.1..10.0f64,
    ) {
        let a = eoa_closed_form(&spec(1.0, 1.0, phi.clone()));
        let b = eoa_closed_form(&spec(t, h, phi));
        prop_assert!((a.rho_norm - b.rho_norm).abs() < 1e-12);
        prop_assert!((b.rho_norm - b.rho / (b.tau2.sqrt() * b.beta2.sqrt())).abs() < 1e-12);
        prop_assert!((b.tau2 - PI * PI * t * t / 3.0).abs() <= 1e-15 * b.tau2);
    }

    #[test]
    fn contour_on_conic(rho_norm in -0.95..0.95f64, xi in 0.05..0.95f64, beta2 in 1.0..1e6f64) {
        let p = EoaParameters::from_normalized(beta2, PI * PI / 3.0, rho_norm);
        for (tau, nu) in ellipse_contour(&p, xi, 37).unwrap() {
            prop_assert!((p.quadratic_form(tau, nu) - xi).abs() < 1e-9 * xi);
        }
    }
}

#[test]
fn coupling_maximum_falls_as_inverse_root() {
    let mut prev = rho_norm_max::<f64>(1);
    for carriers in 2..=256 {
        let next = rho_norm_max::<f64>(carriers);
        assert!(next < prev);
        prev = next;
    }
    let ratio = rho_norm_max::<f64>(256) / rho_norm_max::<f64>(64);
    assert!((ratio - 0.5).abs() < 0.5 * 0.15, "{ratio}");
}

#[test]
fn tilt_grows_with_coupling() {
    let beta2 = PI * PI * 200.0 * 200.0 / 3.0;
    let tau2 = PI * PI / 3.0;
    let tilts: Vec<f64> = [0.0, 0.2673, 0.7797]
        .iter()
        .map(|&r| EoaParameters::from_normalized(beta2, tau2, r).tilt_angle())
        .collect();
    assert_eq!(tilts[0], 0.0);
    assert!(tilts[0] < tilts[1] && tilts[1] < tilts[2]);
    for r in [0.0, 0.2673, 0.7797] {
        let p = EoaParameters::from_normalized(beta2, tau2, r);
        assert_eq!(ellipse_contour(&p, 0.9, 128).unwrap().len(), 128);
    }
}

#[test]
fn fig_one_bandwidth_matches_lfm() {
    let p = eoa_closed_form(&spec(1.0, 0.1856, vec![0.0; 24]));
    let lfm = PI * PI * 200.0 * 200.0 / 3.0;
    assert!((p.beta2 - lfm).abs() / lfm < 1e-3);
}
