//! Standard normal distribution helpers.

use core::f64::consts::SQRT_2;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    (0.5 * libm::erfc(-x / SQRT_2)).clamp(0.0, 1.0)
}

/// `Phi(hi) - Phi(lo)` for `lo <= hi`, computed on the side of the origin
/// where the subtraction does not cancel.
pub fn normal_interval(lo: f64, hi: f64) -> f64 {
    let p = if lo > 0.0 {
        normal_cdf(-lo) - normal_cdf(-hi)
    } else {
        normal_cdf(hi) - normal_cdf(lo)
    };
    p.clamp(0.0, 1.0)
}

/// Inverse of `cdf` by bisection over `[lo, hi]`. `cdf` must be nondecreasing.
pub(crate) fn invert_cdf(cdf: impl Fn(f64) -> f64, p: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * libm::fmax(1.0, libm::fabs(mid)) {
            break;
        }
    }
    0.5 * (lo + hi)
}
