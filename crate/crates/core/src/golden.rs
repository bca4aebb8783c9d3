//! Golden-section search for unimodal scalar functions.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Minimizes a unimodal `f` on `[lo, hi]`, stopping once the bracket is no
/// wider than `tol`. Returns the best abscissa seen and its value. The
/// endpoints themselves are never evaluated.
pub fn minimize<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizing counterpart of [`minimize`].
pub fn maximize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = minimize(|x| -f(x), lo, hi, tol);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let (x, v) = minimize(|x| (x - 0.3) * (x - 0.3) + 0.25, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn minimum_at_boundary_approaches_it() {
        let (x, _) = minimize(|x| x, 0.0, 1.0, 1e-8);
        assert!(x < 1e-8);
    }

    #[test]
    fn maximize_flips() {
        let (x, v) = maximize(|x| -(x + 2.0).abs(), -5.0, 5.0, 1e-9);
        assert!((x + 2.0).abs() < 1e-8);
        assert!(v.abs() < 1e-8);
    }
}
