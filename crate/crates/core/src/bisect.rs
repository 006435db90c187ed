/// Iteration cap shared by every root finder in the crate.
pub(crate) const MAX_ITER: usize = 200;

/// Root of `f` on `[lo, hi]` given a sign change, as `(x, |f(x)|, iterations)`.
///
/// Stops once `|f| <= tol` or the bracket stops shrinking in floating point.
/// Returns `None` when the endpoints have the same strict sign.
pub(crate) fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Option<(f64, f64, usize)> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some((lo, 0.0, 0));
    }
    if f_hi == 0.0 {
        return Some((hi, 0.0, 0));
    }
    if (f_lo > 0.0) == (f_hi > 0.0) || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo.abs()) } else { (hi, f_hi.abs()) };
    for it in 1..=MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.abs() < best.1 {
            best = (mid, f_mid.abs());
        }
        if f_mid.abs() <= tol || mid <= lo || mid >= hi {
            return Some((best.0, best.1, it));
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some((best.0, best.1, MAX_ITER))
}
