//! Closed-form spectrum, ambiguity function and autocorrelation.
//!
//! Every expression is a finite sum over the GBF coefficients `c_m` of
//! [`GbfCoefficients`]:
//!
//! ```text
//! S(f)       = sqrt(T) sum_m c_m sinc[pi T (f - m/T)]
//! chi(tau,nu) = a sum_{m,n} c_m c_n* e^{sigma j pi (m+n) tau/T} sinc[pi a (nu T + m - n)],  a = (T-|tau|)/T
//! R(tau)     = chi(tau, 0)
//! ```
//!
//! `sinc(x) = sin(x)/x`. The sign `sigma` is [`PHASE_SIGN`].

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fftutil::{convolve, correlate};
use crate::gbf::GbfCoefficients;
use crate::io::write_rows;
use crate::scalar::{from_i64, from_usize, lit, sinc, Real};

/// Sign of the `(m+n)` delay phase in the ambiguity sum.
///
/// Direct integration of `s(t - tau/2) s*(t + tau/2)` produces
/// `e^{-j pi (m+n) tau / T}`; the test suite re-derives this against the
/// numerical oracle and checks that the opposite sign disagrees.
pub const PHASE_SIGN: i32 = -1;

fn to64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Spectrum samples `S(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSamples<T> {
    pub freq: Vec<T>,
    pub values: Vec<Complex<T>>,
    pub spec_hash: String,
}

impl<T: Real> SpectrumSamples<T> {
    /// Trapezoidal `integral |S(f)|^2 df` over the grid.
    pub fn energy(&self) -> T {
        self.freq
            .windows(2)
            .zip(self.values.windows(2))
            .fold(T::zero(), |acc, (f, v)| {
                acc + (f[1] - f[0]) * (v[0].norm_sqr() + v[1].norm_sqr()) * lit(0.5)
            })
    }

    /// Trapezoidal energy restricted to `|f| <= half_band`.
    pub fn energy_within(&self, half_band: T) -> T {
        self.freq
            .windows(2)
            .zip(self.values.windows(2))
            .filter(|(f, _)| f[0].abs() <= half_band && f[1].abs() <= half_band)
            .fold(T::zero(), |acc, (f, v)| {
                acc + (f[1] - f[0]) * (v[0].norm_sqr() + v[1].norm_sqr()) * lit(0.5)
            })
    }

    /// Writes `f,re,im,abs2` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_rows(
            out,
            ["f", "re", "im", "abs2"],
            self.freq.iter().zip(&self.values).map(|(&f, v)| {
                [to64(f), to64(v.re), to64(v.im), to64(v.norm_sqr())]
            }),
        )
    }
}

/// `S(f) = sqrt(T) sum_m c_m sinc[pi (f T - m)]` on `f_grid`.
pub fn spectrum<T: Real>(coeffs: &GbfCoefficients<T>, duration: T, f_grid: &[T]) -> SpectrumSamples<T> {
    let root = duration.sqrt();
    let values = f_grid
        .iter()
        .map(|&f| {
            let ft = f * duration;
            coeffs.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (m, c)| {
                acc + c * sinc(T::PI() * (ft - from_i64::<T>(m as i64)))
            }) * root
        })
        .collect();
    SpectrumSamples {
        freq: f_grid.to_vec(),
        values,
        spec_hash: coeffs.spec_hash().to_string(),
    }
}

fn check_delay<T: Real>(tau: T, duration: T) -> Result<()> {
    if tau.is_finite() && tau.abs() <= duration * lit(1.0 + 1e-12) {
        Ok(())
    } else {
        Err(Error::OutOfSupport {
            what: "tau",
            value: to64(tau),
            limit: to64(duration),
        })
    }
}

/// Per-delay regrouping of the ambiguity double sum by `k = m - n`.
///
/// `G_k(tau) = sum_n c_{n+k} c_n* e^{sigma j pi (2n + k) tau / T}` collects all
/// pairs sharing a sinc argument, so each Doppler value costs `O(M)` once the
/// kernel is built.
#[derive(Debug, Clone)]
pub struct DelayKernel<T> {
    duration: T,
    overlap: T,
    order: usize,
    lags: Vec<Complex<T>>,
}

impl<T: Real> DelayKernel<T> {
    pub fn new(coeffs: &GbfCoefficients<T>, duration: T, tau: T) -> Result<Self> {
        check_delay(tau, duration)?;
        let tau = tau.max(-duration).min(duration);
        let sigma = from_i64::<T>(PHASE_SIGN as i64);
        let order = coeffs.order();
        let base = T::PI() * sigma * tau / duration;
        let c = coeffs.as_slice();
        let weighted: Vec<Complex<T>> = coeffs
            .iter()
            .map(|(n, cn)| cn.conj() * Complex::from_polar(T::one(), base * lit(2.0) * from_i64(n as i64)))
            .collect();
        let mut lags = correlate(c, &weighted);
        let span = 2 * order as isize;
        for (idx, g) in lags.iter_mut().enumerate() {
            let k = idx as isize - span;
            *g = *g * Complex::from_polar(T::one(), base * from_i64(k as i64));
        }
        Ok(Self {
            duration,
            overlap: (duration - tau.abs()) / duration,
            order,
            lags,
        })
    }

    /// `chi(tau, nu)` at this kernel's delay.
    pub fn eval(&self, nu: T) -> Complex<T> {
        if self.overlap <= T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        let span = 2 * self.order as isize;
        let nut = nu * self.duration;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (idx, g) in self.lags.iter().enumerate() {
            let k = from_i64::<T>(idx as i64 - span as i64);
            acc = acc + *g * sinc(T::PI() * self.overlap * (nut + k));
        }
        acc * self.overlap
    }
}

/// Ambiguity function `chi(tau, nu)` for `|tau| <= T`.
pub fn ambiguity<T: Real>(coeffs: &GbfCoefficients<T>, duration: T, tau: T, nu: T) -> Result<Complex<T>> {
    Ok(DelayKernel::new(coeffs, duration, tau)?.eval(nu))
}

/// The ambiguity double sum evaluated term by term, `O(M^2)` per point, with
/// an explicit delay-phase sign. Reference for the regrouped evaluation.
pub fn ambiguity_double_sum<T: Real>(
    coeffs: &GbfCoefficients<T>,
    duration: T,
    tau: T,
    nu: T,
    sign: i32,
) -> Result<Complex<T>> {
    check_delay(tau, duration)?;
    let overlap = (duration - tau.abs()).max(T::zero()) / duration;
    let sigma = from_i64::<T>(sign as i64);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (m, cm) in coeffs.iter() {
        for (n, cn) in coeffs.iter() {
            let phase = sigma * T::PI() * from_i64::<T>((m + n) as i64) * tau / duration;
            let s = sinc(T::PI() * overlap * (nu * duration + from_i64::<T>((m - n) as i64)));
            acc = acc + cm * cn.conj() * Complex::from_polar(s, phase);
        }
    }
    Ok(acc * overlap)
}

/// Autocorrelation `R(tau) = chi(tau, 0)`.
pub fn acf<T: Real>(coeffs: &GbfCoefficients<T>, duration: T, tau: T) -> Result<Complex<T>> {
    ambiguity(coeffs, duration, tau, T::zero())
}

/// Ambiguity samples on a delay-Doppler grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguitySurface<T> {
    pub tau_grid: Vec<T>,
    pub nu_grid: Vec<T>,
    /// Row-major: `chi[i * nu_grid.len() + j] = chi(tau_i, nu_j)`.
    pub chi: Vec<Complex<T>>,
    pub spec_hash: String,
}

impl<T: Real> AmbiguitySurface<T> {
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.chi[i * self.nu_grid.len() + j]
    }

    /// `(i, j, |chi|^2)` of the largest sample; ties go to the first.
    pub fn peak(&self) -> (usize, usize, T) {
        let cols = self.nu_grid.len();
        let (idx, val) = self
            .chi
            .iter()
            .map(|c| c.norm_sqr())
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        (idx / cols, idx % cols, val)
    }

    /// Trapezoidal `integral integral |chi|^2 dtau dnu` over the grid.
    pub fn volume(&self) -> T {
        let weights = |grid: &[T]| -> Vec<T> {
            let n = grid.len();
            (0..n)
                .map(|i| {
                    let left = if i > 0 { grid[i] - grid[i - 1] } else { T::zero() };
                    let right = if i + 1 < n { grid[i + 1] - grid[i] } else { T::zero() };
                    (left + right) * lit(0.5)
                })
                .collect()
        };
        let wt = weights(&self.tau_grid);
        let wn = weights(&self.nu_grid);
        let cols = self.nu_grid.len();
        self.chi
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (idx, c)| acc + wt[idx / cols] * wn[idx % cols] * c.norm_sqr())
    }

    /// Writes `tau,nu,re,im,abs2` rows, delay-major.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let cols = self.nu_grid.len();
        write_rows(
            out,
            ["tau", "nu", "re", "im", "abs2"],
            self.chi.iter().enumerate().map(|(idx, c)| {
                [
                    to64(self.tau_grid[idx / cols]),
                    to64(self.nu_grid[idx % cols]),
                    to64(c.re),
                    to64(c.im),
                    to64(c.norm_sqr()),
                ]
            }),
        )
    }
}

/// Ambiguity function on the Cartesian product of `tau_grid` and `nu_grid`.
///
/// Delay rows are evaluated in parallel; each sample depends only on its own
/// coordinates, so the output does not depend on scheduling.
pub fn af_surface<T: Real>(
    coeffs: &GbfCoefficients<T>,
    duration: T,
    tau_grid: &[T],
    nu_grid: &[T],
) -> Result<AmbiguitySurface<T>> {
    for &tau in tau_grid {
        check_delay(tau, duration)?;
    }
    if let Some(nu) = nu_grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("Doppler value {nu} is not finite")));
    }
    let rows: Vec<Vec<Complex<T>>> = tau_grid
        .par_iter()
        .map(|&tau| {
            let kernel = DelayKernel::new(coeffs, duration, tau).expect("delay validated above");
            nu_grid.iter().map(|&nu| kernel.eval(nu)).collect()
        })
        .collect();
    Ok(AmbiguitySurface {
        tau_grid: tau_grid.to_vec(),
        nu_grid: nu_grid.to_vec(),
        chi: rows.into_iter().flatten().collect(),
        spec_hash: coeffs.spec_hash().to_string(),
    })
}

/// Autocorrelation sampled at `tau_i = i T / intervals`, `i = 0..=intervals`.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfProfile<T> {
    pub tau: Vec<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> AcfProfile<T> {
    pub fn abs2(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Writes `tau,re,im,abs2` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_rows(
            out,
            ["tau", "re", "im", "abs2"],
            self.tau.iter().zip(&self.values).map(|(&t, v)| {
                [to64(t), to64(v.re), to64(v.im), to64(v.norm_sqr())]
            }),
        )
    }
}

/// Autocorrelation on a uniform grid over `[0, T]`, exact to rounding.
///
/// Integrating the truncated series over the overlap region in closed form
/// and regrouping the double sum gives, with `d_q = (-1)^q c_q`,
///
/// ```text
/// T R(tau) = (T - tau) sum_q |c_q|^2 e^{-j 2 pi q tau/T}
///          + T/(j 2 pi) sum_q (d_q A_q - d_q* B_q) e^{-j 2 pi q tau/T}
/// A_m = sum_{n != m} d_n* / (m - n),   B_n = sum_{m != n} d_m / (m - n)
/// ```
///
/// Both sums are trigonometric polynomials in `tau`, so one FFT of length
/// `intervals` evaluates the whole grid. The result equals
/// [`acf`] at every grid point.
pub fn acf_uniform<T: Real>(coeffs: &GbfCoefficients<T>, duration: T, intervals: usize) -> AcfProfile<T> {
    assert!(intervals > 0, "grid needs at least one interval");
    let order = coeffs.order() as isize;
    let zero = Complex::new(T::zero(), T::zero());
    let d: Vec<Complex<T>> = coeffs
        .iter()
        .map(|(q, c)| if q % 2 == 0 { c } else { -c })
        .collect();
    let d_conj: Vec<Complex<T>> = d.iter().map(|x| x.conj()).collect();
    // h_k = 1/k for k = -2M..=2M, h_0 = 0
    let hilbert: Vec<Complex<T>> = (-2 * order..=2 * order)
        .map(|k| {
            if k == 0 {
                zero
            } else {
                Complex::new(from_i64::<T>(k as i64).recip(), T::zero())
            }
        })
        .collect();
    let conv_a = convolve(&d_conj, &hilbert);
    let conv_b = convolve(&d, &hilbert);
    let offset = 3 * order;

    let mut p = vec![zero; intervals];
    let mut q = vec![zero; intervals];
    let j2pi = Complex::new(T::zero(), T::TAU());
    for (q_idx, (m, c)) in coeffs.iter().enumerate() {
        let a_m = conv_a[(m + offset) as usize];
        let b_m = -conv_b[(m + offset) as usize];
        let dm = d[q_idx];
        let bin = m.rem_euclid(intervals as isize) as usize;
        p[bin] = p[bin] + Complex::new(c.norm_sqr(), T::zero());
        q[bin] = q[bin] + (dm * a_m - dm.conj() * b_m) * duration / j2pi;
    }
    let fft = FftPlanner::new().plan_fft_forward(intervals);
    fft.process(&mut p);
    fft.process(&mut q);

    let step = duration / from_usize(intervals);
    let mut tau = Vec::with_capacity(intervals + 1);
    let mut values = Vec::with_capacity(intervals + 1);
    for i in 0..=intervals {
        let t = if i == intervals { duration } else { step * from_usize(i) };
        let bin = i % intervals;
        tau.push(t);
        values.push((p[bin] * (duration - t) + q[bin]) / duration);
    }
    AcfProfile { tau, values }
}
