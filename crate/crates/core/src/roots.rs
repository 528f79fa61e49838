//! One-dimensional root isolation: sign-change scan on a grid, then bisection.

use crate::tol;

/// Shrink a sign-change bracket until its width is at most `width` and then on to adjacent
/// floats. Returns `None` if an evaluation fails inside the bracket.
pub fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, width: f64) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let mut flo = f(lo)?;
    if flo == 0.0 {
        return Some(lo);
    }
    let fhi = f(hi)?;
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    debug_assert!(hi - lo <= width.max(f64::EPSILON * hi.abs()));
    Some(0.5 * (lo + hi))
}

/// All roots of `f` on the given sample parameters, in increasing order.
///
/// Consecutive samples where `f` is finite and changes sign are bisected to
/// [`tol::BISECTION_WIDTH`]. Failed evaluations break the scan so that sign changes across a
/// hole are never reported.
pub fn scan_roots<F>(f: F, ts: &[f64]) -> Vec<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let g = |t: f64| f(t).filter(|v| v.is_finite());
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &t in ts {
        let Some(v) = g(t) else {
            prev = None;
            continue;
        };
        if v == 0.0 {
            roots.push(t);
        } else if let Some((tp, vp)) = prev {
            if vp != 0.0 && vp.signum() != v.signum() {
                if let Some(r) = bisect(&g, tp, t, tol::BISECTION_WIDTH) {
                    roots.push(r);
                }
            }
        }
        prev = Some((t, v));
    }
    roots
}

/// `n` evenly spaced points strictly inside `(lo, hi)`, plus two points a tiny fraction of the
/// width in from each end.
pub fn interior_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let w = hi - lo;
    if !(w > 0.0) {
        return Vec::new();
    }
    let inset = 1e-9 * w;
    let mut ts = Vec::with_capacity(n + 2);
    ts.push(lo + inset);
    for i in 1..=n {
        ts.push(lo + w * i as f64 / (n + 1) as f64);
    }
    ts.push(hi - inset);
    ts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sine_roots() {
        let ts = interior_grid(0.5, 10.0, 100);
        let r = scan_roots(|t| Some(t.sin()), &ts);
        assert_eq!(r.len(), 3);
        for (k, root) in r.iter().enumerate() {
            assert!((root - (k + 1) as f64 * std::f64::consts::PI).abs() <= 1e-12);
        }
    }

    #[test]
    fn holes_break_scans() {
        let ts = interior_grid(-1.0, 1.0, 50);
        let r = scan_roots(|t| if t.abs() < 0.1 { None } else { Some(t) }, &ts);
        assert!(r.is_empty());
    }

    #[test]
    fn bisect_rejects_same_sign() {
        assert_eq!(bisect(&|t: f64| Some(t * t + 1.0), -1.0, 1.0, 1e-12), None);
    }
}
