//! Brute-force references computed straight from the time-domain definitions.
//!
//! Nothing here touches the GBF coefficients: every quantity integrates the
//! analytic waveform `s(t)` (or its phase derivative) by fixed-step
//! quadrature, so agreement with the closed forms is a genuine cross-check.
//!
//! RMS bandwidth is integrated in the time domain,
//! `(1/T) int phi'^2 dt - |(1/T) int j phi' dt|^2`, and never as the spectral
//! second moment: the rectangular window gives `|S(f)|^2` tails decaying like
//! `1/f^2`, so `int f^2 |S(f)|^2 df` diverges on any finite frequency span.
//! The envelope derivative is always `s' = j phi' s`, evaluated analytically.

use std::fmt;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::closed_form::{AcfProfile, SpectrumSamples};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::waveform::{spec_hash, WaveformSpec};

/// Fixed-step quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadRule {
    Midpoint,
    Simpson,
}

impl fmt::Display for QuadRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadRule::Midpoint => write!(f, "midpoint"),
            QuadRule::Simpson => write!(f, "simpson"),
        }
    }
}

/// Default oversampling of [`WaveformSpec::oversample_floor`] used by
/// [`OracleConfig::accurate`].
pub const ACCURATE_OVERSAMPLE: f64 = 64.0;

/// Fewest quadrature panels [`OracleConfig::accurate`] will use over a full pulse.
pub const ACCURATE_MIN_PANELS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig<T> {
    /// Panel density in Hz: an interval of length `d` gets `ceil(fs d)` panels.
    pub fs: T,
    pub rule: QuadRule,
    /// Relative error above which [`OracleReport::passes`] fails.
    pub tol_report: T,
}

impl<T: Real> OracleConfig<T> {
    pub fn new(fs: T, rule: QuadRule) -> Self {
        Self {
            fs,
            rule,
            tol_report: lit(1e-6),
        }
    }

    /// Simpson at 64x the oversampling floor (at least 4096 panels per pulse).
    /// Accurate to ~1e-9 for the waveforms in the test suite.
    pub fn accurate(spec: &WaveformSpec<T>) -> Self {
        let floor = spec.oversample_floor() * lit(ACCURATE_OVERSAMPLE);
        let min = from_usize::<T>(ACCURATE_MIN_PANELS) / spec.duration();
        Self::new(floor.max(min), QuadRule::Simpson)
    }

    pub fn with_fs(self, fs: T) -> Self {
        Self { fs, ..self }
    }

    pub fn with_rule(self, rule: QuadRule) -> Self {
        Self { rule, ..self }
    }

    fn validate(&self, spec: &WaveformSpec<T>) -> Result<()> {
        let floor = spec.oversample_floor();
        if self.fs.is_finite() && self.fs >= floor {
            Ok(())
        } else {
            Err(Error::Undersampled {
                fs: self.fs.to_f64().unwrap_or(f64::NAN),
                floor: floor.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    fn panels(&self, length: T) -> usize {
        let n = (self.fs * length).ceil().to_usize().unwrap_or(2).max(2);
        match self.rule {
            QuadRule::Midpoint => n,
            QuadRule::Simpson => n + n % 2,
        }
    }
}

/// `int_a^b f(t) dt` with `panels` fixed steps.
pub(crate) fn integrate<T, F>(rule: QuadRule, a: T, b: T, panels: usize, f: F) -> Complex<T>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let h = (b - a) / from_usize(panels);
    let mut acc = Complex::new(T::zero(), T::zero());
    match rule {
        QuadRule::Midpoint => {
            for i in 0..panels {
                acc = acc + f(a + (from_usize::<T>(i) + lit(0.5)) * h);
            }
            acc * h
        }
        QuadRule::Simpson => {
            debug_assert!(panels % 2 == 0);
            acc = f(a) + f(b);
            for i in 1..panels {
                let w: T = if i % 2 == 1 { lit(4.0) } else { lit(2.0) };
                acc = acc + f(a + from_usize::<T>(i) * h) * w;
            }
            acc * (h / lit::<T>(3.0))
        }
    }
}

pub(crate) fn real_integral<T, F>(rule: QuadRule, a: T, b: T, panels: usize, f: F) -> T
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate(rule, a, b, panels, |t| Complex::new(f(t), T::zero())).re
}

/// `chi(tau, nu) = int s(t - tau/2) s*(t + tau/2) e^{j 2 pi nu t} dt` over the
/// overlap `|t| <= (T - |tau|)/2`.
pub fn af_numeric<T: Real>(spec: &WaveformSpec<T>, tau: T, nu: T, cfg: &OracleConfig<T>) -> Result<Complex<T>> {
    let duration = spec.duration();
    if !(tau.is_finite() && tau.abs() <= duration * lit(1.0 + 1e-12)) {
        return Err(Error::OutOfSupport {
            what: "tau",
            value: tau.to_f64().unwrap_or(f64::NAN),
            limit: duration.to_f64().unwrap_or(f64::NAN),
        });
    }
    cfg.validate(spec)?;
    let overlap = duration - tau.abs();
    if overlap <= T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let half = overlap * lit(0.5);
    let shift = tau * lit(0.5);
    let amp = duration.recip();
    let value = integrate(cfg.rule, -half, half, cfg.panels(overlap), |t| {
        let lead = spec.phase_unchecked(t - shift);
        let lag = spec.phase_unchecked(t + shift);
        Complex::from_polar(amp, lead - lag + T::TAU() * nu * t)
    });
    Ok(value)
}

/// RMS bandwidth `(1/T) int phi'^2 dt - |(1/T) int j phi' dt|^2` (rad^2/s^2).
pub fn rms_bandwidth_numeric<T: Real>(spec: &WaveformSpec<T>, cfg: &OracleConfig<T>) -> Result<T> {
    cfg.validate(spec)?;
    let duration = spec.duration();
    let half = duration * lit(0.5);
    let panels = cfg.panels(duration);
    let rate = |t: T| T::TAU() * spec.freq_mod_unchecked(t);
    let mean_square = real_integral(cfg.rule, -half, half, panels, |t| rate(t).powi(2)) / duration;
    let mean = integrate(cfg.rule, -half, half, panels, |t| Complex::new(T::zero(), rate(t))) / duration;
    Ok(mean_square - mean.norm_sqr())
}

/// Range-Doppler coupling `rho = -2 pi Im{ int t s(t) s'*(t) dt }` with
/// `s' = j phi' s`.
pub fn rdcf_numeric<T: Real>(spec: &WaveformSpec<T>, cfg: &OracleConfig<T>) -> Result<T> {
    cfg.validate(spec)?;
    let duration = spec.duration();
    let half = duration * lit(0.5);
    let amp = duration.sqrt().recip();
    let j = Complex::new(T::zero(), T::one());
    let value = integrate(cfg.rule, -half, half, cfg.panels(duration), |t| {
        let s = Complex::from_polar(amp, spec.phase_unchecked(t));
        let ds = j * s * (T::TAU() * spec.freq_mod_unchecked(t));
        s * ds.conj() * t
    });
    Ok(-T::TAU() * value.im)
}

/// RMS pulse length `4 pi^2 int t^2 |s(t)|^2 dt` (rad^2 s^2), with `t_0 = 0`.
pub fn rms_pulselength_numeric<T: Real>(spec: &WaveformSpec<T>, cfg: &OracleConfig<T>) -> Result<T> {
    cfg.validate(spec)?;
    let duration = spec.duration();
    let half = duration * lit(0.5);
    let amp = duration.sqrt().recip();
    let moment = real_integral(cfg.rule, -half, half, cfg.panels(duration), |t| {
        let s = Complex::from_polar(amp, spec.phase_unchecked(t));
        t * t * s.norm_sqr()
    });
    Ok(lit::<T>(4.0) * T::PI() * T::PI() * moment)
}

/// Spectrum of the sampled waveform, `S(f) ~ dt sum_n s_n e^{-j 2 pi f t_n}`.
///
/// Evaluated at arbitrary frequencies, which is the limit of an
/// infinitely zero-padded DFT of [`WaveformSpec::sample`] at `cfg.fs`.
pub fn spectrum_numeric<T: Real>(spec: &WaveformSpec<T>, cfg: &OracleConfig<T>, f_grid: &[T]) -> Result<SpectrumSamples<T>> {
    let series = spec.sample(cfg.fs)?;
    let values = f_grid
        .iter()
        .map(|&f| {
            let rot = Complex::from_polar(T::one(), -T::TAU() * f * series.dt);
            let mut phase = Complex::from_polar(T::one(), -T::TAU() * f * series.start);
            let mut acc = Complex::new(T::zero(), T::zero());
            for (n, s) in series.values.iter().enumerate() {
                // refresh the rotating phasor periodically to cap drift
                if n % 1024 == 0 {
                    phase = Complex::from_polar(T::one(), -T::TAU() * f * series.time(n));
                }
                acc = acc + s * phase;
                phase = phase * rot;
            }
            acc * series.dt
        })
        .collect();
    Ok(SpectrumSamples {
        freq: f_grid.to_vec(),
        values,
        spec_hash: spec_hash(spec),
    })
}

/// Autocorrelation on `tau_i = i T / intervals` by the midpoint rule on a
/// lattice `oversample` times finer than the output grid.
///
/// With midpoint registration the overlap `[-T/2, T/2 - tau]` holds exactly
/// `N - k` cells at lag `k`, so `R(k dt) ~ dt sum_n s_n s*_{n+k}`. All lags are
/// produced by one zero-padded FFT correlation.
pub fn acf_numeric_lattice<T: Real>(spec: &WaveformSpec<T>, intervals: usize, oversample: usize) -> Result<AcfProfile<T>> {
    if intervals == 0 || oversample == 0 {
        return Err(Error::InvalidArgument("lattice needs positive sizes".into()));
    }
    let count = intervals * oversample;
    let fs = from_usize::<T>(count) / spec.duration();
    let floor = spec.oversample_floor();
    if fs < floor {
        return Err(Error::Undersampled {
            fs: fs.to_f64().unwrap_or(f64::NAN),
            floor: floor.to_f64().unwrap_or(f64::NAN),
        });
    }
    let series = spec.sample_count(count);
    let size = (2 * count).next_power_of_two();
    let zero = Complex::new(T::zero(), T::zero());
    let mut buf = series.values.clone();
    buf.resize(size, zero);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    // |S_k|^2 inverts to the circular autocorrelation sum_n s_{n+k} s*_n
    for v in &mut buf {
        *v = Complex::new(v.norm_sqr(), T::zero());
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let scale = series.dt / from_usize(size);

    let step = spec.duration() / from_usize(intervals);
    let mut tau = Vec::with_capacity(intervals + 1);
    let mut values = Vec::with_capacity(intervals + 1);
    for i in 0..=intervals {
        let lag = i * oversample;
        tau.push(if i == intervals { spec.duration() } else { step * from_usize(i) });
        // R(tau) = int s(u) s*(u + tau) du is the conjugate of the FFT lag sum
        let r = if lag < count { buf[lag].conj() * scale } else { zero };
        values.push(r);
    }
    Ok(AcfProfile { tau, values })
}

/// One closed-form vs numerical comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub numeric: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub fs: f64,
    pub rule: QuadRule,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, closed_form: f64, numeric: f64, fs: f64, rule: QuadRule) -> Self {
        let abs_err = (closed_form - numeric).abs();
        let rel_err = if closed_form != 0.0 { abs_err / closed_form.abs() } else { abs_err };
        Self {
            quantity: quantity.into(),
            closed_form,
            numeric,
            abs_err,
            rel_err,
            fs,
            rule,
        }
    }

    pub fn passes(&self, rel_tol: f64) -> bool {
        self.rel_err <= rel_tol
    }
}
