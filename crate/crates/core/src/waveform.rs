//! CE-OFDM waveform model.
//!
//! A waveform is a unit-energy, constant-envelope pulse of duration `T`
//!
//! ```text
//! s(t) = rect(t/T) / sqrt(T) * exp(j phi(t))
//! phi(t) = 2 pi h sum_{l=1..L} |Gamma_l| cos(2 pi l t / T + phi_l)
//! ```
//!
//! whose phase is a real Fourier series carrying one PSK symbol per harmonic.
//! [`PskCode`] keeps the amplitude/phase pairs; in PSK mode every amplitude is
//! one, otherwise the same type describes a general multi-tone sinusoidal FM
//! phase.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Amplitudes within this distance of one count as PSK.
pub const PSK_UNIT_TOL: f64 = 1e-12;

/// Largest imaginary residue tolerated when converting complex symbols.
pub const REAL_RESIDUE_TOL: f64 = 1e-10;

/// Grid used by [`WaveformSpec::oversample_floor`] to search for the peak
/// instantaneous frequency.
const FLOOR_SEARCH_POINTS: usize = 4096;

/// Wraps an angle into `(-pi, pi]`.
pub fn canonical_phase<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x - two_pi * (x / two_pi).round();
    if y <= -T::PI() {
        y = y + two_pi;
    } else if y > T::PI() {
        y = y - two_pi;
    }
    y
}

/// Phase of symbol `k` in an `m_psk`-ary alphabet: `2 pi k / m_psk`, wrapped.
pub fn psk_phase<T: Real>(k: u32, m_psk: u32) -> T {
    assert!(m_psk > 0, "PSK alphabet must be non-empty");
    let k = k % m_psk;
    canonical_phase(T::TAU() * lit::<T>(k as f64) / lit(m_psk as f64))
}

/// Carrier amplitudes and phases of the phase-modulation Fourier series.
#[derive(Debug, Clone, PartialEq)]
pub struct PskCode<T> {
    gamma: Vec<T>,
    phi: Vec<T>,
    m_psk: Option<u32>,
}

impl<T: Real> PskCode<T> {
    /// General amplitude/phase code. Phases are stored wrapped into `(-pi, pi]`.
    pub fn new(gamma: Vec<T>, phi: Vec<T>, m_psk: Option<u32>) -> Result<Self> {
        if phi.is_empty() {
            return Err(Error::InvalidSpec("code needs at least one carrier".into()));
        }
        if gamma.len() != phi.len() {
            return Err(Error::InvalidSpec(format!(
                "{} amplitudes for {} phases",
                gamma.len(),
                phi.len()
            )));
        }
        if let Some(i) = phi.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidSpec(format!("phase of carrier {} is not finite", i + 1)));
        }
        if let Some(i) = gamma.iter().position(|g| !g.is_finite() || *g < T::zero()) {
            return Err(Error::InvalidSpec(format!(
                "amplitude of carrier {} must be finite and nonnegative",
                i + 1
            )));
        }
        if m_psk == Some(0) {
            return Err(Error::InvalidSpec("PSK alphabet size must be positive".into()));
        }
        let phi = phi.into_iter().map(canonical_phase).collect();
        Ok(Self { gamma, phi, m_psk })
    }

    /// Unit-amplitude (PSK) code.
    pub fn unit(phi: Vec<T>) -> Result<Self> {
        Self::new(vec![T::one(); phi.len()], phi, None)
    }

    /// Code built from alphabet indices, `phi_l = 2 pi k_l / m_psk`.
    pub fn from_alphabet(indices: &[u32], m_psk: u32) -> Result<Self> {
        if m_psk == 0 {
            return Err(Error::InvalidSpec("PSK alphabet size must be positive".into()));
        }
        let phi = indices.iter().map(|&k| psk_phase(k, m_psk)).collect();
        Self::new(vec![T::one(); indices.len()], phi, Some(m_psk))
    }

    /// Pseudo-random PSK code.
    ///
    /// The generator is ChaCha8 seeded with `seed`; carrier `l` takes the
    /// `l`-th draw of `gen_range(0..m_psk)` as its alphabet index. The mapping
    /// is fixed so that a seed identifies a code across runs and platforms.
    pub fn random(carriers: usize, m_psk: u32, seed: u64) -> Result<Self> {
        if m_psk == 0 {
            return Err(Error::InvalidSpec("PSK alphabet size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let indices: Vec<u32> = (0..carriers).map(|_| rng.gen_range(0..m_psk)).collect();
        Self::from_alphabet(&indices, m_psk)
    }

    pub fn carriers(&self) -> usize {
        self.phi.len()
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn m_psk(&self) -> Option<u32> {
        self.m_psk
    }

    /// True when every amplitude is one within [`PSK_UNIT_TOL`].
    pub fn is_psk(&self) -> bool {
        self.gamma
            .iter()
            .all(|g| (*g - T::one()).abs() <= lit(PSK_UNIT_TOL))
    }

    /// Code with every phase negated; the resulting phase function is `phi(-t)`.
    pub fn time_reversed(&self) -> Self {
        Self {
            gamma: self.gamma.clone(),
            phi: self.phi.iter().map(|p| canonical_phase(-*p)).collect(),
            m_psk: self.m_psk,
        }
    }

    /// Real Fourier coefficients `(alpha_l, beta_l)` with
    /// `alpha cos(x) + beta sin(x) = |Gamma| cos(x + phi)`.
    pub fn real_coefficients(&self) -> Vec<(T, T)> {
        self.gamma
            .iter()
            .zip(&self.phi)
            .map(|(&g, &p)| (g * p.cos(), -g * p.sin()))
            .collect()
    }
}

/// Complex symbols `c_l` for `l = -L..=L`, stored with `c_{-L}` first.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSymbolVector<T> {
    symbols: Vec<Complex<T>>,
}

impl<T: Real> ComplexSymbolVector<T> {
    pub fn new(symbols: Vec<Complex<T>>) -> Result<Self> {
        if symbols.len() < 3 || symbols.len() % 2 == 0 {
            return Err(Error::InvalidSpec(format!(
                "symbol vector needs odd length 2L+1 >= 3, got {}",
                symbols.len()
            )));
        }
        Ok(Self { symbols })
    }

    /// Conjugate-symmetric symbols whose real series equals `code`:
    /// `c_l = |Gamma_l| e^{j phi_l}`, `c_{-l} = c_l*`, `c_0 = 0`.
    pub fn from_code(code: &PskCode<T>) -> Self {
        let carriers = code.carriers();
        let mut symbols = vec![Complex::new(T::zero(), T::zero()); 2 * carriers + 1];
        for (i, (&g, &p)) in code.gamma.iter().zip(&code.phi).enumerate() {
            let c = Complex::from_polar(g, p);
            symbols[carriers + 1 + i] = c;
            symbols[carriers - 1 - i] = c.conj();
        }
        Self { symbols }
    }

    pub fn carriers(&self) -> usize {
        self.symbols.len() / 2
    }

    /// Symbol `c_l` for `l` in `-L..=L`.
    pub fn get(&self, l: isize) -> Complex<T> {
        let idx = l + self.carriers() as isize;
        self.symbols[idx as usize]
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.symbols
    }

    /// Phase evaluated directly from the complex series,
    /// `pi h sum_{l=-L..L} c_l e^{j 2 pi l t / T}`.
    ///
    /// The factor `pi h` (rather than `2 pi h`) matches the real coefficients
    /// `alpha = (c_l + c_-l)/2`, `beta = j (c_l - c_-l)/2`, under which a
    /// unit-modulus symbol yields a unit-amplitude carrier. Returns the full
    /// complex value so callers can check that the imaginary part vanishes.
    pub fn series_phase(&self, t: T, duration: T, mod_index: T) -> Complex<T> {
        let carriers = self.carriers() as isize;
        let mut acc = Complex::new(T::zero(), T::zero());
        for l in -carriers..=carriers {
            let arg = T::TAU() * lit::<T>(l as f64) * t / duration;
            acc = acc + self.get(l) * Complex::from_polar(T::one(), arg);
        }
        acc * (T::PI() * mod_index)
    }
}

/// Converts complex PSK symbols to the amplitude-phase representation.
///
/// `alpha_l = (c_l + c_-l)/2`, `beta_l = j (c_l - c_-l)/2`,
/// `|Gamma_l| = sqrt(alpha^2 + beta^2)` and `phi_l = atan2(-beta, alpha)`, so
/// that `alpha cos(x) + beta sin(x) = |Gamma_l| cos(x + phi_l)`. For unit
/// symbols this is simply `phi_l = arg(c_l)`. A carrier with zero amplitude
/// gets phase zero.
pub fn code_from_symbols<T: Real>(symbols: &ComplexSymbolVector<T>) -> Result<PskCode<T>> {
    let dc = symbols.get(0).norm();
    if dc > T::zero() {
        return Err(Error::ZeroDcViolation {
            magnitude: dc.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = lit::<T>(0.5);
    let j = Complex::new(T::zero(), T::one());
    let carriers = symbols.carriers();
    let mut gamma = Vec::with_capacity(carriers);
    let mut phi = Vec::with_capacity(carriers);
    for l in 1..=carriers {
        let plus = symbols.get(l as isize);
        let minus = symbols.get(-(l as isize));
        let alpha = (plus + minus) * half;
        let beta = j * (plus - minus) * half;
        let residue = alpha.im.abs().max(beta.im.abs());
        if residue > lit(REAL_RESIDUE_TOL) {
            return Err(Error::NonRealCoefficients {
                carrier: l,
                residue: residue.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (a, b) = (alpha.re, beta.re);
        let g = a.hypot(b);
        gamma.push(g);
        phi.push(if g == T::zero() { T::zero() } else { (-b).atan2(a) });
    }
    PskCode::new(gamma, phi, None)
}

/// One CE-OFDM pulse: duration, modulation index and carrier code.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformSpec<T> {
    duration: T,
    mod_index: T,
    code: PskCode<T>,
}

impl<T: Real> WaveformSpec<T> {
    /// `duration` must be positive and `mod_index` nonnegative; `h = 0` gives
    /// the unmodulated rectangular pulse.
    pub fn new(duration: T, mod_index: T, code: PskCode<T>) -> Result<Self> {
        if !(duration.is_finite() && duration > T::zero()) {
            return Err(Error::InvalidSpec(format!("duration must be positive, got {duration}")));
        }
        if !(mod_index.is_finite() && mod_index >= T::zero()) {
            return Err(Error::InvalidSpec(format!(
                "modulation index must be nonnegative, got {mod_index}"
            )));
        }
        Ok(Self {
            duration,
            mod_index,
            code,
        })
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    pub fn mod_index(&self) -> T {
        self.mod_index
    }

    pub fn code(&self) -> &PskCode<T> {
        &self.code
    }

    pub fn carriers(&self) -> usize {
        self.code.carriers()
    }

    /// Same waveform with a different modulation index.
    pub fn with_mod_index(&self, mod_index: T) -> Result<Self> {
        Self::new(self.duration, mod_index, self.code.clone())
    }

    /// Same waveform played backwards in time (all code phases negated).
    pub fn time_reversed(&self) -> Self {
        Self {
            duration: self.duration,
            mod_index: self.mod_index,
            code: self.code.time_reversed(),
        }
    }

    fn check_support(&self, t: T) -> Result<()> {
        let half = self.duration * lit(0.5);
        // one part in 1e12 of slack absorbs rounding in grid construction
        if t.is_finite() && t.abs() <= half * lit(1.0 + 1e-12) {
            Ok(())
        } else {
            Err(Error::OutOfSupport {
                what: "t",
                value: t.to_f64().unwrap_or(f64::NAN),
                limit: half.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// Phase modulation function `phi(t)` in radians.
    pub fn phase_at(&self, t: T) -> Result<T> {
        self.check_support(t)?;
        Ok(self.phase_unchecked(t))
    }

    /// Instantaneous frequency `m(t) = phi'(t) / 2 pi` in Hz.
    pub fn freq_mod_at(&self, t: T) -> Result<T> {
        self.check_support(t)?;
        Ok(self.freq_mod_unchecked(t))
    }

    pub(crate) fn phase_unchecked(&self, t: T) -> T {
        let w = T::TAU() * t / self.duration;
        let mut acc = T::zero();
        for (l, (&g, &p)) in self.code.gamma.iter().zip(&self.code.phi).enumerate() {
            acc = acc + g * (from_usize::<T>(l + 1) * w + p).cos();
        }
        T::TAU() * self.mod_index * acc
    }

    pub(crate) fn freq_mod_unchecked(&self, t: T) -> T {
        let w = T::TAU() * t / self.duration;
        let mut acc = T::zero();
        for (l, (&g, &p)) in self.code.gamma.iter().zip(&self.code.phi).enumerate() {
            let order = from_usize::<T>(l + 1);
            acc = acc + order * g * (order * w + p).sin();
        }
        -T::TAU() * self.mod_index / self.duration * acc
    }

    /// Complex envelope `s(t)`; zero outside the support.
    pub fn envelope_at(&self, t: T) -> Complex<T> {
        if self.check_support(t).is_err() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.duration.sqrt().recip(), self.phase_unchecked(t))
    }

    /// Minimum sampling rate accepted by [`WaveformSpec::sample`] and the
    /// numerical oracles: eight times the peak `|m(t)|` found on a 4096-point
    /// grid, but never below `16 L / T`.
    pub fn oversample_floor(&self) -> T {
        let half = self.duration * lit(0.5);
        let step = self.duration / from_usize(FLOOR_SEARCH_POINTS);
        let peak = (0..FLOOR_SEARCH_POINTS)
            .map(|n| {
                let t = -half + (from_usize::<T>(n) + lit(0.5)) * step;
                self.freq_mod_unchecked(t).abs()
            })
            .fold(T::zero(), T::max);
        let hard_min = lit::<T>(16.0) * from_usize(self.carriers()) / self.duration;
        (lit::<T>(8.0) * peak).max(hard_min)
    }

    /// Samples `s(t)` at midpoint-registered instants.
    ///
    /// `N = round(fs T)` samples are taken at `t_n = -T/2 + (n + 1/2) dt` with
    /// `dt = T / N`, which is exactly `1/fs` whenever `fs T` is an integer.
    /// The cells tile the support, so `sum |s_n|^2 dt = 1`.
    pub fn sample(&self, fs: T) -> Result<SampledSeries<T>> {
        let floor = self.oversample_floor();
        if !(fs.is_finite() && fs >= floor) {
            return Err(Error::Undersampled {
                fs: fs.to_f64().unwrap_or(f64::NAN),
                floor: floor.to_f64().unwrap_or(f64::NAN),
            });
        }
        let count = (fs * self.duration)
            .round()
            .to_usize()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidArgument("sample count overflow".into()))?;
        Ok(self.sample_count(count))
    }

    /// Midpoint-registered samples with an explicit count and no floor check.
    pub(crate) fn sample_count(&self, count: usize) -> SampledSeries<T> {
        let dt = self.duration / from_usize(count);
        let start = -self.duration * lit(0.5) + dt * lit(0.5);
        let amp = self.duration.sqrt().recip();
        let values = (0..count)
            .map(|n| Complex::from_polar(amp, self.phase_unchecked(start + from_usize::<T>(n) * dt)))
            .collect();
        SampledSeries { start, dt, values }
    }
}

/// Uniformly sampled complex series.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSeries<T> {
    /// Time of the first sample.
    pub start: T,
    /// Sample spacing.
    pub dt: T,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> SampledSeries<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, n: usize) -> T {
        self.start + from_usize::<T>(n) * self.dt
    }

    /// `sum |s_n|^2 dt`.
    pub fn energy(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr())
            * self.dt
    }

    /// Writes `t,re,im` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,re,im")?;
        for (n, v) in self.values.iter().enumerate() {
            writeln!(
                out,
                "{},{},{}",
                crate::io::fmt_real(self.time(n)),
                crate::io::fmt_real(v.re),
                crate::io::fmt_real(v.im)
            )?;
        }
        Ok(())
    }
}

/// On-disk waveform description.
///
/// ```json
/// {"T": 1.0, "h": 0.1856, "L": 24, "phi": [...], "gamma": [...], "m_psk": 32}
/// ```
///
/// `gamma` defaults to all ones and `m_psk` is optional metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformFile {
    #[serde(rename = "T")]
    pub duration: f64,
    #[serde(rename = "h")]
    pub mod_index: f64,
    #[serde(rename = "L")]
    pub carriers: usize,
    pub phi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_psk: Option<u32>,
}

impl WaveformFile {
    pub fn from_spec<T: Real>(spec: &WaveformSpec<T>) -> Self {
        let to64 = |x: &T| x.to_f64().unwrap_or(f64::NAN);
        let code = spec.code();
        Self {
            duration: to64(&spec.duration()),
            mod_index: to64(&spec.mod_index()),
            carriers: code.carriers(),
            phi: code.phi().iter().map(to64).collect(),
            gamma: if code.is_psk() {
                None
            } else {
                Some(code.gamma().iter().map(to64).collect())
            },
            m_psk: code.m_psk(),
        }
    }

    pub fn to_spec<T: Real>(&self) -> Result<WaveformSpec<T>> {
        if self.phi.len() != self.carriers {
            return Err(Error::InvalidSpec(format!(
                "L = {} but {} phases given",
                self.carriers,
                self.phi.len()
            )));
        }
        let phi = self.phi.iter().map(|&p| lit::<T>(p)).collect();
        let gamma = match &self.gamma {
            Some(g) => g.iter().map(|&x| lit::<T>(x)).collect(),
            None => vec![T::one(); self.carriers],
        };
        let code = PskCode::new(gamma, phi, self.m_psk)?;
        WaveformSpec::new(lit(self.duration), lit(self.mod_index), code)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let reader = BufReader::new(File::open(path)?);
        Ok(serde_json::from_reader(reader)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut writer = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut writer, self)?;
        writer.write_all(b"\n")?;
        writer.flush()?;
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("waveform file serializes");
        let digest = Sha256::digest(&bytes);
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Identifier of a waveform, stable across runs.
pub fn spec_hash<T: Real>(spec: &WaveformSpec<T>) -> String {
    WaveformFile::from_spec(spec).hash()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn spec(h: f64, phi: Vec<f64>) -> WaveformSpec<f64> {
        WaveformSpec::new(1.0, h, PskCode::unit(phi).unwrap()).unwrap()
    }

    #[test]
    fn canonical_range() {
        assert_eq!(canonical_phase(-PI), PI);
        assert_eq!(canonical_phase(PI), PI);
        assert!((canonical_phase(3.0 * PI) - PI).abs() < 1e-15);
        assert!((canonical_phase(-FRAC_PI_2) + FRAC_PI_2).abs() < 1e-15);
        assert!((psk_phase::<f64>(3, 4) + FRAC_PI_2).abs() < 1e-15);
        assert!((psk_phase::<f64>(2, 4) - PI).abs() < 1e-15);
    }

    #[test]
    fn zero_symbols_give_zero_code() {
        let zero = Complex::new(0.0, 0.0);
        let c = ComplexSymbolVector::new(vec![zero; 3]).unwrap();
        let code = code_from_symbols(&c).unwrap();
        assert_eq!(code.gamma(), &[0.0]);
        assert_eq!(code.phi(), &[0.0]);
    }

    #[test]
    fn quarter_pi_symbol() {
        let c1 = Complex::from_polar(1.0, FRAC_PI_4);
        let c = ComplexSymbolVector::new(vec![c1.conj(), Complex::new(0.0, 0.0), c1]).unwrap();
        let code = code_from_symbols(&c).unwrap();
        let (alpha, beta) = code.real_coefficients()[0];
        assert!((alpha - FRAC_PI_4.cos()).abs() < 1e-15);
        assert!((beta + FRAC_PI_4.sin()).abs() < 1e-15);
        assert!((code.gamma()[0] - 1.0).abs() < 1e-15);
        // the phase consistent with alpha cos + beta sin = cos(x + phi)
        assert!((code.phi()[0] - FRAC_PI_4).abs() < 1e-15);

        let wf = WaveformSpec::new(1.0, 0.7, code).unwrap();
        for n in 0..1000 {
            let t = -0.5 + (n as f64 + 0.5) / 1000.0;
            let series = c.series_phase(t, 1.0, 0.7);
            assert!(series.im.abs() < 1e-12);
            assert!((series.re - wf.phase_at(t).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn symbol_errors() {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        let dc = ComplexSymbolVector::new(vec![zero, one, zero]).unwrap();
        assert!(matches!(code_from_symbols(&dc), Err(Error::ZeroDcViolation { .. })));

        // c_{-1} != c_1*: alpha picks up an imaginary part
        let j = Complex::new(0.0, 1.0);
        let skew = ComplexSymbolVector::new(vec![j, zero, j]).unwrap();
        assert!(matches!(
            code_from_symbols(&skew),
            Err(Error::NonRealCoefficients { carrier: 1, .. })
        ));
        assert!(ComplexSymbolVector::new(vec![one, one]).is_err());
    }

    #[test]
    fn code_validation() {
        assert!(PskCode::<f64>::unit(vec![]).is_err());
        assert!(PskCode::new(vec![1.0], vec![0.0, 1.0], None).is_err());
        assert!(PskCode::new(vec![-1.0], vec![0.0], None).is_err());
        assert!(PskCode::new(vec![1.0], vec![f64::NAN], None).is_err());
        assert!(WaveformSpec::new(0.0, 1.0, PskCode::unit(vec![0.0]).unwrap()).is_err());
        assert!(WaveformSpec::new(1.0, -1.0, PskCode::unit(vec![0.0]).unwrap()).is_err());
    }

    #[test]
    fn phase_examples() {
        let s = spec(3.3, vec![FRAC_PI_2; 5]);
        assert!(s.phase_at(0.0).unwrap().abs() < 1e-13);
        let s = spec(0.5, vec![0.0]);
        assert!((s.phase_at(0.0).unwrap() - PI).abs() < 1e-15);

        // L=2, h=5.81, phi=(pi, 0), t=T/4: 2 pi h (cos(pi/2 + pi) + cos(pi))
        let s = spec(5.81, vec![PI, 0.0]);
        let expected = 2.0 * PI * 5.81 * ((0.5 * PI + PI).cos() + PI.cos());
        assert!((s.phase_at(0.25).unwrap() - expected).abs() < 1e-12);
        assert!((expected + 36.505_306_634_713_4).abs() < 1e-9);

        assert!(matches!(s.phase_at(0.51), Err(Error::OutOfSupport { .. })));
        assert!(s.freq_mod_at(-0.6).is_err());
    }

    #[test]
    fn freq_mod_examples() {
        let s = spec(2.0, vec![0.0; 4]);
        assert!(s.freq_mod_at(0.0).unwrap().abs() < 1e-14);
        let s = spec(1.0, vec![FRAC_PI_2]);
        assert!((s.freq_mod_at(0.0).unwrap() + 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn sampling() {
        let s = spec(0.0, vec![0.3, -1.0]);
        let series = s.sample(64.0).unwrap();
        assert_eq!(series.len(), 64);
        for v in &series.values {
            assert!((v.re - 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
        assert!((series.time(0) + 0.5 - 0.5 / 64.0).abs() < 1e-15);

        let s = spec(0.1856, vec![0.4; 24]);
        let fs = s.oversample_floor() * 1.5;
        let series = s.sample(fs).unwrap();
        assert!((series.energy() - 1.0).abs() < 1e-9);
        for v in &series.values {
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
        assert!(matches!(s.sample(fs / 4.0), Err(Error::Undersampled { .. })));
    }

    #[test]
    fn floor_hard_minimum() {
        let s = spec(0.0, vec![0.0; 3]);
        assert_eq!(s.oversample_floor(), 48.0);
    }

    #[test]
    fn random_code_is_reproducible() {
        let a = PskCode::<f64>::random(24, 32, 7).unwrap();
        let b = PskCode::<f64>::random(24, 32, 7).unwrap();
        let c = PskCode::<f64>::random(24, 32, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.m_psk(), Some(32));
        for p in a.phi() {
            let k = p / (2.0 * PI / 32.0);
            assert!((k - k.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn file_round_trip() {
        let s = WaveformSpec::new(2.0, 0.3, PskCode::random(5, 8, 1).unwrap()).unwrap();
        let file = WaveformFile::from_spec(&s);
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"T\":2.0") && text.contains("\"L\":5"));
        assert!(!text.contains("gamma"));
        let back: WaveformSpec<f64> = serde_json::from_str::<WaveformFile>(&text)
            .unwrap()
            .to_spec()
            .unwrap();
        assert_eq!(back, s);
        assert_eq!(spec_hash(&back), spec_hash(&s));
        assert_eq!(spec_hash(&s).len(), 16);

        let bad = WaveformFile { carriers: 4, ..file };
        assert!(bad.to_spec::<f64>().is_err());
    }

    #[test]
    fn single_precision_phase() {
        let s = WaveformSpec::new(1.0_f32, 0.5, PskCode::unit(vec![0.0]).unwrap()).unwrap();
        assert!((s.phase_at(0.0).unwrap() - std::f32::consts::PI).abs() < 1e-6);
    }
}
