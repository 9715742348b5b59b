//! Linear FM reference pulse `rect(t/T)/sqrt(T) e^{j pi (delta_f/T) t^2}`.

use num_complex::Complex;

use crate::closed_form::SpectrumSamples;
use crate::error::{Error, Result};
use crate::oracle::{real_integral, QuadRule};
use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lfm<T> {
    duration: T,
    sweep: T,
}

impl<T: Real> Lfm<T> {
    /// Pulse of length `duration` sweeping `sweep` Hz.
    pub fn new(duration: T, sweep: T) -> Result<Self> {
        if !(duration > T::zero() && sweep > T::zero() && duration.is_finite() && sweep.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "LFM needs positive duration and sweep (T = {duration}, delta_f = {sweep})"
            )));
        }
        Ok(Self { duration, sweep })
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    pub fn sweep(&self) -> T {
        self.sweep
    }

    pub fn phase_at(&self, t: T) -> T {
        T::PI() * self.sweep / self.duration * t * t
    }

    /// Instantaneous frequency in Hz, `delta_f t / T`.
    pub fn freq_at(&self, t: T) -> T {
        self.sweep * t / self.duration
    }

    pub fn envelope_at(&self, t: T) -> Complex<T> {
        if t.abs() > self.duration * lit(0.5) {
            Complex::new(T::zero(), T::zero())
        } else {
            Complex::from_polar(self.duration.sqrt().recip(), self.phase_at(t))
        }
    }

    /// Sample count giving at least 16 samples per `1/delta_f` and 4096 per pulse.
    fn default_count(&self) -> usize {
        let n = (lit::<T>(16.0) * self.sweep * self.duration).ceil().to_usize().unwrap_or(0);
        n.max(4096)
    }

    /// Spectrum by direct DTFT of midpoint samples, `S(f) ~ dt sum_n s_n e^{-j 2 pi f t_n}`.
    pub fn spectrum_numeric(&self, f_grid: &[T]) -> SpectrumSamples<T> {
        let count = self.default_count();
        let dt = self.duration / from_usize(count);
        let start = -self.duration * lit(0.5) + dt * lit(0.5);
        let samples: Vec<Complex<T>> = (0..count)
            .map(|n| self.envelope_at(start + dt * from_usize(n)))
            .collect();
        let values = f_grid
            .iter()
            .map(|&f| {
                samples.iter().enumerate().fold(Complex::new(T::zero(), T::zero()), |acc, (n, s)| {
                    let t = start + dt * from_usize(n);
                    acc + s * Complex::from_polar(T::one(), -T::TAU() * f * t)
                }) * dt
            })
            .collect();
        SpectrumSamples {
            freq: f_grid.to_vec(),
            values,
            spec_hash: String::new(),
        }
    }

    /// RMS bandwidth `(1/T) int phi'^2 dt` by Simpson quadrature (rad^2/s^2).
    pub fn rms_bandwidth_numeric(&self, panels: usize) -> T {
        let panels = panels.max(2) + panels % 2;
        let half = self.duration * lit(0.5);
        let rate = |t: T| T::TAU() * self.freq_at(t);
        real_integral(QuadRule::Simpson, -half, half, panels, |t| rate(t) * rate(t)) / self.duration
    }
}
