//! One-dimensional minimization.

/// 1/φ, the golden-section contraction ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimizer of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `tol`. Returns `(argmin, min)`.
///
/// `f` is assumed unimodal on the bracket; kinks are fine.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
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
        if x1 >= x2 {
            break;
        }
    }
    let (mut best_x, mut best_f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
    }
    (best_x, best_f)
}

/// Maximizer counterpart of [`golden_section_min`].
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_section_min(|x| -f(x), lo, hi, tol);
    (x, -v)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, iterated until the bracket
/// stops shrinking in floating point or `max_iter` is reached.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, max_iter: usize) -> Option<f64> {
    let flo = f(lo);
    if flo == 0.0 {
        return Some(lo);
    }
    let neg_lo = flo < 0.0;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v) = golden_section_min(|x| (x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_handles_kinks_and_endpoints() {
        let (x, _) = golden_section_min(|x| (x - 0.7).abs(), 0.0, 1.0, 1e-12);
        assert!((x - 0.7).abs() < 1e-11);
        let (x, _) = golden_section_min(|x| x, 0.0, 1.0, 1e-12);
        assert_eq!(x, 0.0);
        let (x, v) = golden_section_max(|x| -(x - 1.5).powi(2), 0.0, 3.0, 1e-10);
        assert!((x - 1.5).abs() < 1e-9 && v.abs() < 1e-15);
    }

    #[test]
    fn bisect_to_machine_precision() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|x| x - 0.3, 0.0, 1.0, 3).is_none());
    }
}
