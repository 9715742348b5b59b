//! Ordinary Bessel functions of the first kind, integer order.
//!
//! Used as an independent reference for the one-carrier case of the
//! generalized Bessel coefficients, where `c_m = j^m J_m(2 pi h)`.

use crate::scalar::{from_usize, lit, Real};

/// Switch from the ascending series to Miller's backward recurrence.
const SERIES_LIMIT: f64 = 12.0;

/// `J_m(z)` for integer `m` and `|z| < 700`.
///
/// Ascending power series for `|z| <= 12`, backward recurrence normalized by
/// `J_0 + 2 sum_k J_2k = 1` beyond that. Negative orders and arguments use
/// `J_-m = (-1)^m J_m` and `J_m(-z) = (-1)^m J_m(z)`.
pub fn ordinary_bessel<T: Real>(m: i32, z: T) -> T {
    debug_assert!(z.abs() < lit(700.0), "argument outside supported range");
    let order = m.unsigned_abs() as usize;
    let mut sign = if m < 0 && order % 2 == 1 { -T::one() } else { T::one() };
    if z < T::zero() && order % 2 == 1 {
        sign = -sign;
    }
    let x = z.abs();
    let value = if x == T::zero() {
        if order == 0 {
            T::one()
        } else {
            T::zero()
        }
    } else if x <= lit(SERIES_LIMIT) {
        ascending_series(order, x)
    } else {
        miller(order, x)
    };
    sign * value
}

fn ascending_series<T: Real>(order: usize, x: T) -> T {
    let half = x * lit(0.5);
    // (x/2)^m / m!, built incrementally to stay in range
    let mut term = T::one();
    for k in 1..=order {
        term = term * half / from_usize(k);
    }
    if term == T::zero() {
        return T::zero();
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 1usize;
    loop {
        term = term * q / (from_usize::<T>(k) * from_usize(k + order));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * lit(0.01) && from_usize::<T>(k) > half {
            break;
        }
        k += 1;
        if k > 500 {
            break;
        }
    }
    sum
}

fn miller<T: Real>(order: usize, x: T) -> T {
    let reach = order.max(x.to_usize().unwrap_or(0));
    let mut start = reach + 30 + (40.0 * reach as f64).sqrt() as usize;
    start += start % 2;
    let big = lit::<T>(1e250);
    let mut next = T::zero(); // J_{k+1}
    let mut cur = lit::<T>(1e-30); // J_k
    let mut norm = T::zero();
    let mut result = T::zero();
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let prev = lit::<T>(2.0) * from_usize::<T>(k) / x * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx == order {
            result = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm = norm + lit::<T>(2.0) * cur;
        }
        if cur.abs() > big {
            let scale = big.recip();
            cur = cur * scale;
            next = next * scale;
            norm = norm * scale;
            result = result * scale;
        }
    }
    norm = norm + cur;
    result / norm
}
