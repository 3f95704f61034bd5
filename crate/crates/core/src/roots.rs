//! Sign-change bracketing and bisection.

/// Indices `i` where `values[i]` and `values[i + 1]` fall on opposite sides of
/// zero (zero counts as non-positive).
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0] > 0.0) != (w[1] > 0.0))
        .map(|(i, _)| i)
        .collect()
}

/// Bisects a bracketed sign change of `f` on `[lo, hi]` until the bracket is
/// narrower than `tol`, returning its midpoint.
///
/// The caller guarantees `f(lo) > 0` and `f(hi) > 0` disagree.
pub fn bisect<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64, E> {
    let lo_positive = f(lo)? > 0.0;
    // 200 halvings exhaust any f64 bracket.
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid)? > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
