//! Bracketing root finder: regula falsi with the Illinois modification and a
//! periodic bisection step to rule out stagnation.

use crate::error::{Error, Result};

/// An interval [lo, hi] known to enclose a sign change of a function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && f_lo.is_finite() && f_hi.is_finite()) {
            return Err(Error::domain(format!(
                "bracket endpoints must be finite, got [{lo}, {hi}] with f = [{f_lo}, {f_hi}]"
            )));
        }
        if lo >= hi {
            return Err(Error::domain(format!(
                "bracket requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        if f_lo * f_hi > 0.0 {
            return Err(Error::Bracket(format!(
                "no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
            )));
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }

    /// Evaluates `f` at both endpoints and forms the bracket.
    pub fn evaluate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<Self> {
        let f_lo = f(lo);
        let f_hi = f(hi);
        Bracket::new(lo, hi, f_lo, f_hi)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn f_lo(&self) -> f64 {
        self.f_lo
    }

    pub fn f_hi(&self) -> f64 {
        self.f_hi
    }
}

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const DEFAULT_ROOT_MAX_ITER: usize = 200;

/// Finds x in the bracket with |f(x)| <= tol or enclosing width <= tol.
///
/// Regula falsi with Illinois weighting keeps the bracket shrinking even on
/// one-sided convexity; every eighth step bisects outright. Deterministic
/// for a given (f, bracket, tol, max_iter).
pub fn solve_root<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Bracket,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::domain("max_iter must be at least 1".to_string()));
    }
    let (mut lo, mut f_lo) = (bracket.lo, bracket.f_lo);
    let (mut hi, mut f_hi) = (bracket.hi, bracket.f_hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    // +1 when the last replaced endpoint was hi, -1 when lo, 0 initially.
    let mut last_kept = 0i8;
    for iter in 0..max_iter {
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if iter % 8 == 7 || !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx.is_nan() {
            return Err(Error::Domain(format!("function returned NaN at x = {x}")));
        }
        if fx.abs() <= tol {
            return Ok(x);
        }
        if (fx > 0.0) == (f_hi > 0.0) {
            hi = x;
            f_hi = fx;
            if last_kept == -1 {
                f_lo *= 0.5;
            }
            last_kept = -1;
        } else {
            lo = x;
            f_lo = fx;
            if last_kept == 1 {
                f_hi *= 0.5;
            }
            last_kept = 1;
        }
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Convergence(format!(
        "root finder did not converge within {max_iter} iterations; bracket [{lo}, {hi}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::normal::cdf_raw;

    #[test]
    fn linear_function_root() {
        let bracket = Bracket::evaluate(|x| x - 1.0, 0.0, 2.0).unwrap();
        let root = solve_root(|x| x - 1.0, bracket, 1e-12, 100).unwrap();
        assert!((root - 1.0).abs() < 1e-10);
    }

    #[test]
    fn recovers_normal_quantile() {
        let f = |x: f64| cdf_raw(x) - 0.975;
        let bracket = Bracket::evaluate(f, 0.0, 4.0).unwrap();
        let root = solve_root(f, bracket, 1e-12, 200).unwrap();
        assert!((root - 1.959_963_984_540_054).abs() < 1e-8);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        assert!(matches!(
            Bracket::evaluate(|x| x * x + 1.0, -1.0, 1.0),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn endpoint_root_is_returned_directly() {
        let bracket = Bracket::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(solve_root(|x| x, bracket, 1e-12, 10).unwrap(), 0.0);
    }

    #[test]
    fn iteration_budget_is_enforced() {
        // One iteration cannot reduce a unit bracket below 1e-15.
        let f = |x: f64| x.powi(3) - 0.7;
        let bracket = Bracket::evaluate(f, 0.0, 1.0).unwrap();
        assert!(matches!(
            solve_root(f, bracket, 1e-15, 1),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn invalid_tolerance_is_domain_error() {
        let bracket = Bracket::new(0.0, 1.0, -1.0, 1.0).unwrap();
        assert!(solve_root(|x| x, bracket, 0.0, 10).is_err());
    }
}
