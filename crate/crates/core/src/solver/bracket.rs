use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interval on which the determinant changes sign. `lo == hi` marks a grid
/// point where the determinant is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub det_lo: f64,
    pub det_hi: f64,
}

impl RootBracket {
    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Samples `det` on `steps + 1` equally spaced points of `[lo, hi]` and
/// returns one bracket per sign change between neighbours.
pub fn scan_brackets<F>(mut det: F, lo: f64, hi: f64, steps: usize) -> Result<Vec<RootBracket>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if steps < 2 {
        return Err(Error::InvalidRange { lo, hi, reason: format!("scan needs at least 2 steps (got {steps})") });
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidRange { lo, hi, reason: "range must be finite with lo < hi".into() });
    }
    let width = hi - lo;
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=steps {
        let x = if i == steps { hi } else { lo + width * (i as f64 / steps as f64) };
        let f = det(x)?;
        if !f.is_finite() {
            return Err(Error::NonFinite { at: x, value: f });
        }
        if f == 0.0 {
            brackets.push(RootBracket { lo: x, hi: x, det_lo: 0.0, det_hi: 0.0 });
        } else if let Some((px, pf)) = prev {
            if pf != 0.0 && pf.signum() != f.signum() {
                brackets.push(RootBracket { lo: px, hi: x, det_lo: pf, det_hi: f });
            }
        }
        prev = Some((x, f));
    }
    Ok(brackets)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Stop once the bracket is narrower than `x_rel_tol · max(1, |x|)`.
    /// Zero bisects to the limit of double precision.
    pub x_rel_tol: f64,
    /// Stop once `|det| <= f_tol`.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { x_rel_tol: 0.0, f_tol: 0.0, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootEstimate {
    pub value: f64,
    /// Determinant at `value`.
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection inside a sign-change bracket. The returned abscissa is whichever
/// end of the final bracket has the smaller determinant magnitude.
pub fn refine_root<F>(mut det: F, bracket: &RootBracket, opts: &RefineOptions) -> Result<RootEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if bracket.is_degenerate() {
        let residual = det(bracket.lo)?;
        return Ok(RootEstimate { value: bracket.lo, residual, iterations: 0 });
    }
    let RootBracket { mut lo, mut hi, det_lo: mut f_lo, det_hi: mut f_hi } = *bracket;
    if !(lo < hi) || !(f_lo * f_hi < 0.0) {
        return Err(Error::InvalidBracket { lo, hi, f_lo, f_hi });
    }
    let best = |lo: f64, f_lo: f64, hi: f64, f_hi: f64| {
        if f_lo.abs() <= f_hi.abs() {
            (lo, f_lo)
        } else {
            (hi, f_hi)
        }
    };
    for iter in 1..=opts.max_iter {
        let mid = split(lo, hi);
        if mid <= lo || mid >= hi {
            let (value, residual) = best(lo, f_lo, hi, f_hi);
            return Ok(RootEstimate { value, residual, iterations: iter - 1 });
        }
        let f_mid = det(mid)?;
        if !f_mid.is_finite() {
            return Err(Error::NonFinite { at: mid, value: f_mid });
        }
        if f_mid == 0.0 || f_mid.abs() <= opts.f_tol {
            return Ok(RootEstimate { value: mid, residual: f_mid, iterations: iter });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if hi - lo <= opts.x_rel_tol * mid.abs().max(1.0) {
            let (value, residual) = best(lo, f_lo, hi, f_hi);
            return Ok(RootEstimate { value, residual, iterations: iter });
        }
    }
    Err(Error::NoConvergence(opts.max_iter))
}

/// Arithmetic midpoint, except across zero (try zero itself) and across
/// several binades (geometric mean), so roots at or near zero are reached in
/// a bounded number of halvings.
fn split(lo: f64, hi: f64) -> f64 {
    if lo < 0.0 && hi > 0.0 {
        return 0.0;
    }
    let (a, b) = (lo.abs().max(f64::MIN_POSITIVE), hi.abs().max(f64::MIN_POSITIVE));
    if a.max(b) > 4.0 * a.min(b) {
        let g = (a.sqrt() * b.sqrt()).clamp(lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
        return if hi <= 0.0 { -g } else { g };
    }
    lo + 0.5 * (hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ident(x: f64) -> Result<f64> {
        Ok(x)
    }

    #[test]
    fn sine_has_one_bracket_around_pi() {
        let b = scan_brackets(|x| Ok(x.sin()), 0.1, 2.0 * PI - 0.1, 1000).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].contains(PI));
        let r = refine_root(|x| Ok(x.sin()), &b[0], &RefineOptions::default()).unwrap();
        assert!((r.value - PI).abs() < 1e-15);
    }

    #[test]
    fn identity_root_at_zero() {
        let b = scan_brackets(ident, -1.0, 1.0, 3).unwrap();
        assert_eq!(b.len(), 1);
        let r = refine_root(ident, &b[0], &RefineOptions::default()).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn tiny_root_in_few_steps() {
        let b = RootBracket { lo: -1.0, hi: 0.0, det_lo: -1.0, det_hi: 1e-200 };
        let r = refine_root(|x: f64| Ok(x + 1e-200), &b, &RefineOptions::default()).unwrap();
        assert!((r.value + 1e-200).abs() <= 1e-215);
        assert!(r.iterations < 100);
    }

    #[test]
    fn exact_zero_on_grid_is_degenerate() {
        let b = scan_brackets(ident, -1.0, 1.0, 4).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].is_degenerate());
        assert_eq!(b[0].lo, 0.0);
        let r = refine_root(ident, &b[0], &RefineOptions::default()).unwrap();
        assert_eq!((r.value, r.residual, r.iterations), (0.0, 0.0, 0));
    }

    #[test]
    fn steep_jumps_still_bracket() {
        let f = |x: f64| Ok(if x < 0.3 { -1e-30 } else { 1e30 });
        let b = scan_brackets(f, 0.0, 1.0, 10).unwrap();
        assert_eq!(b.len(), 1);
        let r = refine_root(f, &b[0], &RefineOptions::default()).unwrap();
        assert!((r.value - 0.3).abs() < 1e-15);
    }

    #[test]
    fn non_finite_values_are_reported() {
        let err = scan_brackets(|x| Ok(1.0 / (x - 0.5)), 0.0, 1.0, 2).unwrap_err();
        assert!(matches!(err, Error::NonFinite { at, .. } if at == 0.5));
    }

    #[test]
    fn bad_inputs() {
        assert!(scan_brackets(ident, 1.0, 0.0, 10).is_err());
        assert!(scan_brackets(ident, 0.0, 1.0, 1).is_err());
        let same_sign = RootBracket { lo: 0.0, hi: 1.0, det_lo: 1.0, det_hi: 2.0 };
        assert!(matches!(refine_root(ident, &same_sign, &RefineOptions::default()), Err(Error::InvalidBracket { .. })));
        let tiny_cap = RefineOptions { max_iter: 3, ..Default::default() };
        let b = RootBracket { lo: 0.5, hi: 2.0, det_lo: -0.2, det_hi: 1.3 };
        assert_eq!(refine_root(|x| Ok(x - 0.7), &b, &tiny_cap), Err(Error::NoConvergence(3)));
    }

    #[test]
    fn tolerance_stops_early() {
        let b = RootBracket { lo: 0.0, hi: 2.0, det_lo: -2.0, det_hi: 2.0 };
        let opts = RefineOptions { x_rel_tol: 1e-3, ..Default::default() };
        let r = refine_root(|x: f64| Ok(x * x - 2.0), &b, &opts).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 2e-3);
        assert!(r.iterations < 30);
    }
}
