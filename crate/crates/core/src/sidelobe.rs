//! Mainlobe null, PSLR and ISL of sampled autocorrelations, and the
//! two-carrier metric surface over `(phi_1, phi_2)`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::acf_uniform;
use crate::eoa::eoa_closed_form;
use crate::error::{Error, Result};
use crate::gbf::{compute_coefficients, GbfCoefficients};
use crate::io::write_rows;
use crate::scalar::{lit, Real};
use crate::waveform::{PskCode, WaveformSpec};

/// Reported in place of `-inf` when the sidelobe region holds no energy.
pub const DB_FLOOR: f64 = -300.0;

/// Fewest delay intervals on `[0, T]` used by [`default_intervals`].
pub const MIN_INTERVALS: usize = 4096;

/// Delay samples per `1/delta_f` required by [`default_intervals`].
pub const SAMPLES_PER_MAINLOBE: usize = 32;

/// Smallest grid accepted by [`metric_surface`].
pub const MIN_SURFACE_GRID: usize = 32;

/// First local minimum of `|R|^2` for `tau > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainlobeNull<T> {
    /// Refined location.
    pub tau: T,
    /// Grid index of the sampled minimum (last index when none was found).
    pub index: usize,
    /// `false` when `|R|^2` never turns upward; `tau` is then the grid end.
    pub found: bool,
}

fn grid_step<T: Real>(tau: &[T]) -> T {
    tau[1] - tau[0]
}

/// Location of the first local minimum of `abs2` after `tau = 0`, refined by a
/// parabola through the neighbouring samples. Expects a uniform grid starting
/// at zero. Ties resolve to the smallest delay.
pub fn mainlobe_null<T: Real>(abs2: &[T], tau: &[T]) -> MainlobeNull<T> {
    assert!(abs2.len() == tau.len() && abs2.len() >= 3, "need at least three samples");
    let last = abs2.len() - 1;
    for i in 1..last {
        let (y0, y1, y2) = (abs2[i - 1], abs2[i], abs2[i + 1]);
        if y1 <= y0 && y1 < y2 {
            let curv = y0 - lit::<T>(2.0) * y1 + y2;
            let offset = if curv > T::zero() {
                ((y0 - y2) / (lit::<T>(2.0) * curv)).max(lit(-0.5)).min(lit(0.5))
            } else {
                T::zero()
            };
            return MainlobeNull {
                tau: tau[i] + offset * grid_step(tau),
                index: i,
                found: true,
            };
        }
    }
    MainlobeNull {
        tau: tau[last],
        index: last,
        found: false,
    }
}

/// Peak of the parabola through three equally spaced samples, if the middle
/// one is a local maximum.
fn parabolic_peak<T: Real>(y0: T, y1: T, y2: T) -> T {
    let curv = y0 - lit::<T>(2.0) * y1 + y2;
    if y1 > y0 && y1 > y2 && curv < T::zero() {
        y1 - (y0 - y2) * (y0 - y2) / (lit::<T>(8.0) * curv)
    } else {
        y1
    }
}

fn to_db<T: Real>(ratio: T) -> T {
    if ratio > T::zero() {
        (lit::<T>(10.0) * ratio.log10()).max(lit(DB_FLOOR))
    } else {
        lit(DB_FLOOR)
    }
}

/// Peak sidelobe level in dB: `max |R|^2` over `null.tau <= tau <= T`, the
/// mainlobe peak being 1. Reported as 0 dB when no null exists.
pub fn pslr<T: Real>(abs2: &[T], null: &MainlobeNull<T>) -> T {
    if !null.found {
        return T::zero();
    }
    let last = abs2.len() - 1;
    let (mut best, mut at) = (abs2[null.index + 1], null.index + 1);
    for (i, &v) in abs2.iter().enumerate().skip(null.index + 2) {
        if v > best {
            best = v;
            at = i;
        }
    }
    let peak = if at < last {
        parabolic_peak(abs2[at - 1], abs2[at], abs2[at + 1])
    } else {
        best
    };
    to_db(peak)
}

/// `int` of the quadratic through `(x_{-1}, x_0, x_1)` over `[u_a, u_b]`, in
/// units of the grid step relative to the middle node.
fn quadratic_integral<T: Real>(y: [T; 3], ua: T, ub: T) -> T {
    let [y0, y1, y2] = y;
    let anti = |u: T| {
        y1 * u + (y2 - y0) * u * u / lit(4.0) + (y2 - lit::<T>(2.0) * y1 + y0) * u * u * u / lit(6.0)
    };
    anti(ub) - anti(ua)
}

/// Composite Simpson over uniformly spaced samples; an odd interval count
/// closes with the 3/8 rule, a single interval with the trapezoid.
fn simpson<T: Real>(y: &[T], step: T) -> T {
    let n = y.len().saturating_sub(1);
    match n {
        0 => T::zero(),
        1 => (y[0] + y[1]) * step * lit(0.5),
        _ => {
            let even = if n % 2 == 0 { n } else { n - 3 };
            let mut acc = T::zero();
            for k in (0..even).step_by(2) {
                acc = acc + (y[k] + lit::<T>(4.0) * y[k + 1] + y[k + 2]) * step / lit(3.0);
            }
            if even < n {
                let k = even;
                acc = acc
                    + (y[k] + lit::<T>(3.0) * (y[k + 1] + y[k + 2]) + y[k + 3]) * step * lit(3.0)
                        / lit(8.0);
            }
            acc
        }
    }
}

/// `(A_0, A_tau)`: energy of `|R|^2` on `[0, null]` and `[null, T]`.
fn split_areas<T: Real>(abs2: &[T], tau: &[T], null: &MainlobeNull<T>) -> (T, T) {
    let step = grid_step(tau);
    if !null.found {
        return (simpson(abs2, step), T::zero());
    }
    let k = null.index;
    let y = [abs2[k - 1], abs2[k], abs2[k + 1]];
    let u = (null.tau - tau[k]) / step;
    // signed area between tau_k and the refined null, from the local parabola
    let piece = quadratic_integral(y, T::zero(), u) * step;
    let head = simpson(&abs2[..=k], step);
    let tail = simpson(&abs2[k..], step);
    ((head + piece).max(T::zero()), (tail - piece).max(T::zero()))
}

/// Integrated sidelobe level in dB, `10 log10(A_tau / A_0)`, positive delays only.
pub fn isl<T: Real>(abs2: &[T], tau: &[T], null: &MainlobeNull<T>) -> T {
    let (a0, at) = split_areas(abs2, tau, null);
    if a0 > T::zero() {
        to_db(at / a0)
    } else {
        lit(DB_FLOOR)
    }
}

/// Delay grid size: at least [`MIN_INTERVALS`], and at least
/// [`SAMPLES_PER_MAINLOBE`] samples per `1/delta_f`, where `delta_f` is the
/// LFM sweep with the same RMS bandwidth.
pub fn default_intervals<T: Real>(spec: &WaveformSpec<T>) -> usize {
    let p = eoa_closed_form(spec);
    let delta_f = (lit::<T>(3.0) * p.beta2).sqrt() / T::PI();
    let tbp = (delta_f * spec.duration()).to_f64().unwrap_or(0.0);
    let wanted = (tbp * SAMPLES_PER_MAINLOBE as f64).ceil() as usize;
    let n = wanted.max(MIN_INTERVALS);
    n + n % 2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidelobeReport<T> {
    pub delta_tau: T,
    pub pslr_db: T,
    pub isl_db: T,
    pub null_found: bool,
    pub intervals: usize,
    pub tau_grid: Vec<T>,
    pub acf_abs2: Vec<T>,
}

impl<T: Real> SidelobeReport<T> {
    /// Metrics of an already sampled `|R|^2`.
    pub fn from_samples(tau_grid: Vec<T>, acf_abs2: Vec<T>) -> Self {
        let null = mainlobe_null(&acf_abs2, &tau_grid);
        Self {
            delta_tau: null.tau,
            pslr_db: pslr(&acf_abs2, &null),
            isl_db: isl(&acf_abs2, &tau_grid, &null),
            null_found: null.found,
            intervals: tau_grid.len() - 1,
            tau_grid,
            acf_abs2,
        }
    }
}

/// Sidelobe metrics of the closed-form ACF on `intervals` uniform steps over `[0, T]`.
pub fn sidelobe_report<T: Real>(coeffs: &GbfCoefficients<T>, duration: T, intervals: usize) -> SidelobeReport<T> {
    let acf = acf_uniform(coeffs, duration, intervals);
    let abs2 = acf.abs2();
    SidelobeReport::from_samples(acf.tau, abs2)
}

/// ISL and PSLR over `phi_l = -pi + 2 pi i / n` for two unit carriers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSurface {
    pub grid_n: usize,
    pub duration: f64,
    pub h: f64,
    pub intervals: usize,
    pub phases: Vec<f64>,
    /// Row-major, `phi_1` outer.
    pub isl_db: Vec<f64>,
    pub pslr_db: Vec<f64>,
}

impl MetricSurface {
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.grid_n + j
    }

    /// Index of `(-phi_1, -phi_2)` given that of `(phi_1, phi_2)`.
    pub fn mirror(&self, i: usize, j: usize) -> (usize, usize) {
        let n = self.grid_n;
        ((n - i) % n, (n - j) % n)
    }

    /// Writes `phi1,phi2,isl_db,pslr_db` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let n = self.grid_n;
        write_rows(
            out,
            ["phi1", "phi2", "isl_db", "pslr_db"],
            (0..n * n).map(|k| {
                let (i, j) = (k / n, k % n);
                [self.phases[i], self.phases[j], self.isl_db[k], self.pslr_db[k]]
            }),
        )
    }
}

/// Closed-form sidelobe metrics over an `n x n` grid of two-carrier codes.
pub fn metric_surface(duration: f64, h: f64, grid_n: usize, tol: f64) -> Result<MetricSurface> {
    if grid_n < MIN_SURFACE_GRID {
        return Err(Error::InvalidArgument(format!(
            "surface grid must have at least {MIN_SURFACE_GRID} points per axis, got {grid_n}"
        )));
    }
    let phases: Vec<f64> = (0..grid_n)
        .map(|i| -std::f64::consts::PI + std::f64::consts::TAU * i as f64 / grid_n as f64)
        .collect();
    let probe = WaveformSpec::new(duration, h, PskCode::unit(vec![0.0; 2])?)?;
    let intervals = default_intervals(&probe);
    let cells: Vec<(f64, f64)> = (0..grid_n * grid_n)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64)> {
            let phi = vec![phases[k / grid_n], phases[k % grid_n]];
            let spec = WaveformSpec::new(duration, h, PskCode::unit(phi)?)?;
            let coeffs = compute_coefficients(&spec, tol)?;
            let r = sidelobe_report(&coeffs, duration, intervals);
            Ok((r.isl_db, r.pslr_db))
        })
        .collect::<Result<_>>()?;
    let (isl_db, pslr_db) = cells.into_iter().unzip();
    Ok(MetricSurface {
        grid_n,
        duration,
        h,
        intervals,
        phases,
        isl_db,
        pslr_db,
    })
}
