//! Ellipse-of-ambiguity parameters of the AF mainlobe.
//!
//! Near the origin `1 - |chi(tau, nu)|^2 ~ beta2 tau^2 + 2 rho tau nu + tau2 nu^2`.
//! Units follow the angular convention: `beta2` in rad^2/s^2, `tau2` in
//! rad^2 s^2. Dividing `beta2` by `4 pi^2` gives the RMS bandwidth squared in Hz^2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::waveform::{PskCode, WaveformSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EoaParameters<T> {
    /// RMS bandwidth squared.
    pub beta2: T,
    /// RMS pulse length squared.
    pub tau2: T,
    /// Range-Doppler coupling factor.
    pub rho: T,
    /// `rho / (tau_rms beta_rms)`, in `[-1, 1]`.
    pub rho_norm: T,
    /// Spectral centroid (Hz); zero because `m(t)` integrates to zero over a pulse.
    pub f0: T,
}

impl<T: Real> EoaParameters<T> {
    /// Parameters with prescribed normalized coupling.
    pub fn from_normalized(beta2: T, tau2: T, rho_norm: T) -> Self {
        Self {
            beta2,
            tau2,
            rho: rho_norm * beta2.sqrt() * tau2.sqrt(),
            rho_norm,
            f0: T::zero(),
        }
    }

    /// `beta2 tau^2 + 2 rho tau nu + tau2 nu^2`.
    pub fn quadratic_form(&self, tau: T, nu: T) -> T {
        self.beta2 * tau * tau + lit::<T>(2.0) * self.rho * tau * nu + self.tau2 * nu * nu
    }

    /// Rotation of the ellipse's principal axes away from the `(tau, nu)`
    /// axes, `atan2(2 rho, beta2 - tau2) / 2`. Zero for an uncoupled mainlobe.
    pub fn tilt_angle(&self) -> T {
        (lit::<T>(2.0) * self.rho).atan2(self.beta2 - self.tau2) * lit(0.5)
    }
}

/// `sum_l l^2 |Gamma_l|^2`; for unit amplitudes `(2L^3 + 3L^2 + L) / 6`.
fn weighted_power<T: Real>(code: &PskCode<T>) -> T {
    code.gamma()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &g)| {
            let l = from_usize::<T>(i + 1);
            acc + l * l * g * g
        })
}

/// `sum_l |Gamma_l| (-1)^l cos(phi_l)`.
fn alternating_sum<T: Real>(code: &PskCode<T>) -> T {
    code.gamma()
        .iter()
        .zip(code.phi())
        .enumerate()
        .fold(T::zero(), |acc, (i, (&g, &p))| {
            let term = g * p.cos();
            if (i + 1) % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
}

/// `2L^3 + 3L^2 + L`.
pub fn carrier_polynomial<T: Real>(carriers: usize) -> T {
    let l = from_usize::<T>(carriers);
    lit::<T>(2.0) * l * l * l + lit::<T>(3.0) * l * l + l
}

/// Exact EOA parameters.
///
/// ```text
/// beta2    = (8 pi^4 h^2 / T^2) sum_l l^2 |Gamma_l|^2      = (4 pi^4 h^2 / 3 T^2)(2L^3 + 3L^2 + L) for PSK
/// tau2     = pi^2 T^2 / 3
/// rho      = 4 pi^2 h sum_l |Gamma_l| (-1)^l cos(phi_l)
/// rho_norm = (sqrt 6 / pi) sum_l |Gamma_l| (-1)^l cos(phi_l) / sqrt(sum_l l^2 |Gamma_l|^2)
/// ```
///
/// `rho_norm` does not depend on `h` or `T`, so it is defined even for `h = 0`.
pub fn eoa_closed_form<T: Real>(spec: &WaveformSpec<T>) -> EoaParameters<T> {
    let pi = T::PI();
    let pi2 = pi * pi;
    let h = spec.mod_index();
    let duration = spec.duration();
    let code = spec.code();
    let power = weighted_power(code);
    let alt = alternating_sum(code);
    let rho_norm = if power > T::zero() {
        lit::<T>(6.0).sqrt() / pi * alt / power.sqrt()
    } else {
        T::zero()
    };
    EoaParameters {
        beta2: lit::<T>(8.0) * pi2 * pi2 * h * h / (duration * duration) * power,
        tau2: pi2 * duration * duration / lit(3.0),
        rho: lit::<T>(4.0) * pi2 * h * alt,
        rho_norm,
        f0: T::zero(),
    }
}

/// Largest normalized coupling reachable with `L` unit-amplitude carriers,
/// `(6/pi) L / sqrt(2L^3 + 3L^2 + L)`.
pub fn rho_norm_max<T: Real>(carriers: usize) -> T {
    assert!(carriers >= 1, "at least one carrier required");
    lit::<T>(6.0) / T::PI() * from_usize::<T>(carriers) / carrier_polynomial::<T>(carriers).sqrt()
}

/// Code attaining [`rho_norm_max`]: `phi_l = pi` for odd `l`, `0` for even `l`.
pub fn max_coupling_code<T: Real>(carriers: usize) -> PskCode<T> {
    assert!(carriers >= 1, "at least one carrier required");
    let phi = (1..=carriers)
        .map(|l| if l % 2 == 1 { T::PI() } else { T::zero() })
        .collect();
    PskCode::unit(phi).expect("alternating code is valid")
}

/// Modulation index whose RMS bandwidth equals that of an LFM sweeping
/// `delta_f` in time `T` (`beta2 = pi^2 delta_f^2 / 3`):
/// `h = T delta_f / (2 pi sqrt(2L^3 + 3L^2 + L))`.
pub fn h_for_tbp<T: Real>(duration: T, delta_f: T, carriers: usize) -> Result<T> {
    if !(duration > T::zero() && delta_f > T::zero() && carriers > 0) {
        return Err(Error::InvalidArgument(format!(
            "duration, bandwidth and carrier count must be positive (T = {duration}, delta_f = {delta_f}, L = {carriers})"
        )));
    }
    Ok(duration * delta_f / (T::TAU() * carrier_polynomial::<T>(carriers).sqrt()))
}

/// RMS bandwidth squared of an LFM sweeping `delta_f`: `pi^2 delta_f^2 / 3`.
pub fn lfm_rms_bandwidth<T: Real>(delta_f: T) -> T {
    T::PI() * T::PI() * delta_f * delta_f / lit(3.0)
}

/// Points on the contour `beta2 tau^2 + 2 rho tau nu + tau2 nu^2 = xi`.
///
/// The polar angle is sampled uniformly in the whitened coordinates
/// `(tau beta_rms, nu tau_rms)`, so the points spread evenly regardless of
/// how elongated the ellipse is.
pub fn ellipse_contour<T: Real>(p: &EoaParameters<T>, xi: T, n_points: usize) -> Result<Vec<(T, T)>> {
    if !(xi > T::zero() && xi < T::one()) {
        return Err(Error::InvalidArgument(format!("contour level must lie in (0, 1), got {xi}")));
    }
    if !(p.beta2 > T::zero() && p.tau2 > T::zero()) {
        return Err(Error::InvalidArgument("ellipse needs positive beta2 and tau2".into()));
    }
    if p.rho_norm.abs() >= T::one() - lit(1e-9) {
        return Err(Error::DegenerateEllipse {
            rho_norm: p.rho_norm.to_f64().unwrap_or(f64::NAN),
        });
    }
    let beta = p.beta2.sqrt();
    let trms = p.tau2.sqrt();
    let rn = p.rho / (beta * trms);
    let points = (0..n_points)
        .map(|i| {
            let theta = T::TAU() * from_usize::<T>(i) / from_usize(n_points);
            let (u, w) = (theta.cos(), theta.sin());
            let form = u * u + lit::<T>(2.0) * rn * u * w + w * w;
            let r = (xi / form).sqrt();
            (r * u / beta, r * w / trms)
        })
        .collect();
    Ok(points)
}

/// EOA summary as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EoaReport {
    pub beta2: f64,
    pub tau2: f64,
    pub rho: f64,
    pub rho_norm: f64,
    pub rho_norm_max: f64,
    pub h: f64,
    #[serde(rename = "L")]
    pub carriers: usize,
    #[serde(rename = "T")]
    pub duration: f64,
}

impl EoaReport {
    pub fn new<T: Real>(spec: &WaveformSpec<T>) -> Self {
        let p = eoa_closed_form(spec);
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        Self {
            beta2: f(p.beta2),
            tau2: f(p.tau2),
            rho: f(p.rho),
            rho_norm: f(p.rho_norm),
            rho_norm_max: rho_norm_max::<f64>(spec.carriers()),
            h: f(spec.mod_index()),
            carriers: spec.carriers(),
            duration: f(spec.duration()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn spec(h: f64, phi: Vec<f64>) -> WaveformSpec<f64> {
        WaveformSpec::new(1.0, h, PskCode::unit(phi).unwrap()).unwrap()
    }

    #[test]
    fn psk_bandwidth_polynomial() {
        for carriers in [1, 2, 7, 24] {
            let s = spec(0.37, vec![0.4; carriers]);
            let p = eoa_closed_form(&s);
            let want = 4.0 * PI.powi(4) * 0.37 * 0.37 / 3.0 * carrier_polynomial::<f64>(carriers);
            assert!((p.beta2 - want).abs() / want < 1e-14);
            assert!((p.tau2 - PI * PI / 3.0).abs() < 1e-15);
            assert_eq!(p.f0, 0.0);
        }
    }

    #[test]
    fn quadrature_phases_are_uncoupled() {
        let p = eoa_closed_form(&spec(1.2, vec![FRAC_PI_2; 9]));
        assert!(p.rho.abs() < 1e-12 && p.rho_norm.abs() < 1e-12);
    }

    #[test]
    fn normalized_coupling_consistent() {
        let s = spec(0.8, vec![0.1, 2.0, -1.0, 3.0]);
        let p = eoa_closed_form(&s);
        let via_ratio = p.rho / (p.tau2.sqrt() * p.beta2.sqrt());
        assert!((p.rho_norm - via_ratio).abs() < 1e-12);
        let alt = -(0.1_f64).cos() + 2.0_f64.cos() - (-1.0_f64).cos() + 3.0_f64.cos();
        let eq = 6.0 / PI * alt / carrier_polynomial::<f64>(4).sqrt();
        assert!((p.rho_norm - eq).abs() < 1e-14);
        let zero_h = eoa_closed_form(&s.with_mod_index(0.0).unwrap());
        assert!((zero_h.rho_norm - p.rho_norm).abs() < 1e-15);
    }

    #[test]
    fn coupling_maxima() {
        assert!((rho_norm_max::<f64>(1) - 0.7797).abs() < 5e-4);
        assert!((rho_norm_max::<f64>(24) - 0.2673).abs() < 5e-4);
        assert!((rho_norm_max::<f64>(2) - 6.0 / PI * 2.0 / 30.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(max_coupling_code::<f64>(1).phi(), &[PI]);
        assert_eq!(max_coupling_code::<f64>(4).phi(), &[PI, 0.0, PI, 0.0]);
    }

    #[test]
    fn modulation_index_for_tbp() {
        assert!((h_for_tbp(1.0_f64, 200.0, 24).unwrap() - 0.1856).abs() < 1e-4);
        assert!((h_for_tbp(1.0_f64, 200.0, 2).unwrap() - 5.81).abs() < 1e-2);
        assert!(h_for_tbp(1.0, 0.0, 2).is_err());
        assert!(h_for_tbp(1.0, 10.0, 0).is_err());
        let h = h_for_tbp(2.5, 77.0, 5).unwrap();
        let p = eoa_closed_form(&WaveformSpec::new(2.5, h, PskCode::unit(vec![0.0; 5]).unwrap()).unwrap());
        assert!((p.beta2 - lfm_rms_bandwidth(77.0_f64)).abs() / p.beta2 < 1e-12);
    }

    #[test]
    fn contour_points_on_conic() {
        let p = EoaParameters::from_normalized(1.3e5, PI * PI / 3.0, 0.6);
        let pts = ellipse_contour(&p, 0.9, 64).unwrap();
        assert_eq!(pts.len(), 64);
        for (tau, nu) in pts {
            assert!((p.quadratic_form(tau, nu) - 0.9).abs() < 1e-9 * 0.9);
        }
    }

    #[test]
    fn uncoupled_contour_semi_axes() {
        let p = EoaParameters::from_normalized(400.0, 9.0, 0.0);
        let pts = ellipse_contour(&p, 0.5, 4).unwrap();
        assert!((pts[0].0 - 0.5_f64.sqrt() / 20.0).abs() < 1e-15 && pts[0].1.abs() < 1e-15);
        assert!(pts[1].0.abs() < 1e-15 && (pts[1].1 - 0.5_f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn contour_errors() {
        let p = EoaParameters::from_normalized(1.0, 1.0, 1.0);
        assert!(matches!(ellipse_contour(&p, 0.5, 8), Err(Error::DegenerateEllipse { .. })));
        let p = EoaParameters::from_normalized(1.0, 1.0, 0.2);
        assert!(ellipse_contour(&p, 1.0, 8).is_err());
        assert!(ellipse_contour(&p, 0.0, 8).is_err());
    }

    #[test]
    fn report_fields() {
        let s = spec(0.1856, vec![0.0; 24]);
        let json = serde_json::to_value(EoaReport::new(&s)).unwrap();
        for key in ["beta2", "tau2", "rho", "rho_norm", "rho_norm_max", "h", "L", "T"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert!((json["rho_norm_max"].as_f64().unwrap() - 0.2673).abs() < 5e-4);
    }
}
