//! Constant-envelope OFDM radar waveforms.
//!
//! The phase of a CE-OFDM pulse is a short Fourier series,
//! `phi(t) = 2 pi h sum_l Gamma_l cos(2 pi l t / T + phi_l)`. Expanding
//! `e^{j phi(t)}` into its own Fourier series turns the spectrum, ambiguity
//! function and autocorrelation into finite sums ([`closed_form`]), and the
//! second-order mainlobe shape into a handful of polynomials in `L`
//! ([`eoa`]). Every closed form has a brute-force counterpart in [`oracle`].
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below cover the common case.

pub mod bessel;
pub mod closed_form;
pub mod eoa;
pub mod error;
mod fftutil;
pub mod gbf;
pub mod io;
pub mod lfm;
pub mod oracle;
pub mod scalar;
pub mod sidelobe;
pub mod waveform;

pub use closed_form::{
    acf, acf_uniform, af_surface, ambiguity, spectrum, AcfProfile, AmbiguitySurface, DelayKernel, SpectrumSamples,
};
pub use eoa::{eoa_closed_form, h_for_tbp, max_coupling_code, rho_norm_max, EoaParameters, EoaReport};
pub use error::{Error, Result};
pub use gbf::{compute_coefficients, truncation_order, GbfCoefficients};
pub use lfm::Lfm;
pub use oracle::{OracleConfig, OracleReport, QuadRule};
pub use scalar::Real;
pub use sidelobe::{metric_surface, sidelobe_report, MetricSurface, SidelobeReport};
pub use waveform::{PskCode, SampledSeries, WaveformFile, WaveformSpec};

pub type WaveformSpecF64 = WaveformSpec<f64>;
pub type WaveformSpecF32 = WaveformSpec<f32>;
pub type PskCodeF64 = PskCode<f64>;
pub type GbfCoefficientsF64 = GbfCoefficients<f64>;
pub type EoaParametersF64 = EoaParameters<f64>;
pub type AmbiguitySurfaceF64 = AmbiguitySurface<f64>;
pub type AcfProfileF64 = AcfProfile<f64>;
pub type SidelobeReportF64 = SidelobeReport<f64>;
pub type OracleConfigF64 = OracleConfig<f64>;
