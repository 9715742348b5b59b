//! Linear convolution and correlation through zero-padded FFTs.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::{from_usize, Real};

/// `out[i + j] += a[i] * b[j]`, length `a.len() + b.len() - 1`.
pub(crate) fn convolve<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    let size = len.next_power_of_two();
    let zero = Complex::new(T::zero(), T::zero());
    let mut fa = a.to_vec();
    fa.resize(size, zero);
    let mut fb = b.to_vec();
    fb.resize(size, zero);

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y;
    }
    inv.process(&mut fa);
    let scale = from_usize::<T>(size).recip();
    fa.truncate(len);
    for x in &mut fa {
        *x = *x * scale;
    }
    fa
}

/// `r_k = sum_n a_{n+k} b_n` for `k = -(b.len()-1) ..= a.len()-1`,
/// stored with the most negative lag first.
pub(crate) fn correlate<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let reversed: Vec<Complex<T>> = b.iter().rev().copied().collect();
    convolve(a, &reversed)
}
