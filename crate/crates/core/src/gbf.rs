//! Fourier coefficients of the CE-OFDM time series.
//!
//! Over one period the waveform factors as
//!
//! ```text
//! exp(j sum_l z_l cos(l theta + phi_l)) = sum_m c_m e^{j m theta},   z_l = 2 pi h |Gamma_l|
//! ```
//!
//! with `c_m = j^m e^{j m phi_1} J_m({z_l}; {gamma_l})`, the multi-dimensional
//! generalized Bessel function of the Jacobi-Anger expansion. The coefficients
//! are extracted by FFT of the left-hand side, which avoids nested products of
//! one-dimensional Bessel series and any dependence on how the `gamma_l`
//! parameters are signed. The stored values are the full `c_m`, phase factors
//! included.

use std::io::Write;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::io::write_rows;
use crate::scalar::{from_usize, lit, Real};
use crate::waveform::{spec_hash, WaveformSpec};

/// Largest truncation order the doubling schedule may reach.
pub const M_CAP: usize = 1 << 20;

/// Smallest order the schedule starts from beyond the bandwidth estimate.
const SCHEDULE_PAD: usize = 8;

/// Truncated coefficient sequence `c_m`, `m = -M..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GbfCoefficients<T> {
    order: usize,
    coeffs: Vec<Complex<T>>,
    residual: T,
    tail_magnitude: T,
    spec_hash: String,
}

impl<T: Real> GbfCoefficients<T> {
    /// Truncation order `M`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `c_m`; zero outside the stored range.
    pub fn get(&self, m: isize) -> Complex<T> {
        let idx = m + self.order as isize;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// All `2M + 1` coefficients, `c_{-M}` first.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Iterator over `(m, c_m)`.
    pub fn iter(&self) -> impl Iterator<Item = (isize, Complex<T>)> + '_ {
        let base = self.order as isize;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as isize - base, *c))
    }

    /// Energy outside the retained band, `1 - sum |c_m|^2`.
    ///
    /// Measured directly as the sum of the discarded FFT bins, which by the
    /// discrete Parseval identity equals `1 - sum |c_m|^2` without the
    /// cancellation of subtracting from one.
    pub fn residual(&self) -> T {
        self.residual
    }

    /// `sum_{M < |m| <= 2M} |c_m|`, which dominates the pointwise resynthesis
    /// error once `M` exceeds the modulation bandwidth.
    pub fn tail_magnitude(&self) -> T {
        self.tail_magnitude
    }

    /// `sum |c_m|^2` over the retained coefficients.
    pub fn energy(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn spec_hash(&self) -> &str {
        &self.spec_hash
    }

    /// `sum_m c_m e^{j 2 pi m t / T}`, the periodic extension of `e^{j phi(t)}`.
    pub fn resynthesize(&self, t: T, duration: T) -> Complex<T> {
        let step = Complex::from_polar(T::one(), T::TAU() * t / duration);
        // Horner in e^{j 2 pi t/T}, then shift by e^{-j 2 pi M t/T}
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * step + c;
        }
        let shift = Complex::from_polar(
            T::one(),
            -T::TAU() * from_usize::<T>(self.order) * t / duration,
        );
        acc * shift
    }

    /// Writes `m,re,im,abs2` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_rows(
            out,
            ["m", "re", "im", "abs2"],
            self.iter().map(|(m, c)| {
                let c64 = to_c64(c);
                [m as f64, c64.re, c64.im, c64.norm_sqr()]
            }),
        )
    }
}

fn to_c64<T: Real>(c: Complex<T>) -> Complex<f64> {
    Complex::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if tol > T::zero() && tol <= lit(1e-3) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1e-3], got {tol}")))
    }
}

/// First order tried: `ceil(e pi h L (L+1) / 2) + 8`.
pub fn schedule_start<T: Real>(spec: &WaveformSpec<T>) -> usize {
    let carriers = from_usize::<T>(spec.carriers());
    let estimate = T::E() * T::PI() * spec.mod_index() * carriers * (carriers + T::one()) * lit(0.5);
    estimate.ceil().to_usize().unwrap_or(M_CAP) + SCHEDULE_PAD
}

/// Coefficients at a fixed order, with their tail energy and tail magnitude.
fn coefficients_at_order<T: Real>(
    spec: &WaveformSpec<T>,
    order: usize,
) -> (Vec<Complex<T>>, T, T) {
    let size = (4 * (2 * order + 1)).next_power_of_two();
    let z: Vec<T> = spec
        .code()
        .gamma()
        .iter()
        .map(|&g| T::TAU() * spec.mod_index() * g)
        .collect();
    let phi = spec.code().phi();
    let mut buf: Vec<Complex<T>> = (0..size)
        .map(|k| {
            let theta = T::TAU() * from_usize::<T>(k) / from_usize(size);
            let mut arg = T::zero();
            for (l, (&zl, &pl)) in z.iter().zip(phi).enumerate() {
                arg = arg + zl * (from_usize::<T>(l + 1) * theta + pl).cos();
            }
            Complex::from_polar(T::one(), arg)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(size).process(&mut buf);
    let scale = from_usize::<T>(size).recip();

    let coeffs: Vec<Complex<T>> = (0..=2 * order)
        .map(|i| {
            let m = i as isize - order as isize;
            buf[m.rem_euclid(size as isize) as usize] * scale
        })
        .collect();
    // bins order+1 ..= size-order-1 hold the discarded harmonics
    let tail_energy = buf[order + 1..size - order]
        .iter()
        .fold(T::zero(), |acc, c| acc + (*c * scale).norm_sqr());
    // Magnitudes only over the next band, order < |m| <= 2 order: past the
    // modulation bandwidth the true coefficients fall off faster than
    // geometrically, while per-bin rounding noise summed over the whole FFT
    // grows with its size and would eventually swamp a 1e-12 tolerance.
    let near = buf[order + 1..=2 * order]
        .iter()
        .chain(&buf[size - 2 * order..size - order]);
    let tail_magnitude = near.fold(T::zero(), |acc, c| acc + (*c * scale).norm());
    (coeffs, tail_energy, tail_magnitude)
}

/// Smallest order of the schedule `M_0, 2 M_0, 4 M_0, ...` whose discarded
/// coefficients have energy below `tol` and whose next `M` harmonics on each
/// side have summed magnitude below `tol`.
///
/// The magnitude condition is the stronger one; it bounds the pointwise error
/// of the truncated series, not just its energy.
pub fn truncation_order<T: Real>(spec: &WaveformSpec<T>, tol: T) -> Result<usize> {
    compute_coefficients(spec, tol).map(|c| c.order)
}

/// Fourier coefficients of the CE-OFDM time series at the order chosen by
/// [`truncation_order`].
pub fn compute_coefficients<T: Real>(spec: &WaveformSpec<T>, tol: T) -> Result<GbfCoefficients<T>> {
    check_tol(tol)?;
    let mut order = schedule_start(spec);
    loop {
        if order > M_CAP {
            return Err(Error::TruncationFailure {
                cap: M_CAP,
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (coeffs, residual, tail_magnitude) = coefficients_at_order(spec, order);
        if residual < tol && tail_magnitude < tol {
            return Ok(GbfCoefficients {
                order,
                coeffs,
                residual,
                tail_magnitude,
                spec_hash: spec_hash(spec),
            });
        }
        order *= 2;
    }
}
