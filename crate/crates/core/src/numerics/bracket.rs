//! Bracketing bisection.

use crate::error::{Error, Result};

/// An interval `[lo, hi]` on which a function changes sign (or vanishes at
/// an end point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `f` at both ends and checks the sign condition.
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<Self> {
        let b = Bracket { lo, hi, f_lo: f(lo), f_hi: f(hi) };
        b.check()?;
        Ok(b)
    }

    /// Builds a bracket from already computed end values.
    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        let b = Bracket { lo, hi, f_lo, f_hi };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<()> {
        let signs_ok = self.f_lo * self.f_hi <= 0.0 && !self.f_lo.is_nan() && !self.f_hi.is_nan();
        if !(self.lo < self.hi) || !signs_ok {
            return Err(Error::NoSignChange {
                lo: self.lo,
                hi: self.hi,
                f_lo: self.f_lo,
                f_hi: self.f_hi,
            });
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisection on a valid bracket.
///
/// Stops as soon as `|f(x)| <= tol_f` at a midpoint or the bracket is
/// narrower than `tol_x`, in which case the midpoint is returned.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Bracket,
    tol_x: f64,
    tol_f: f64,
    max_iter: usize,
) -> Result<f64> {
    bracket.check()?;
    let Bracket { mut lo, mut hi, mut f_lo, f_hi } = bracket;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol_x || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid.abs() <= tol_f {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= tol_x {
        Ok(0.5 * (lo + hi))
    } else {
        Err(Error::MaxIterExceeded { iterations: max_iter })
    }
}

/// Starting from `[lo, hi]`, multiplies `hi` by `factor` until `f` changes
/// sign relative to `f(lo)` or `hi` passes `cap`.
pub fn grow_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    factor: f64,
    cap: f64,
) -> Result<Bracket> {
    let f_lo = f(lo);
    let mut hi = hi;
    let mut f_hi = f(hi);
    while f_lo * f_hi > 0.0 {
        if hi >= cap {
            return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
        }
        hi = (hi * factor).min(cap);
        f_hi = f(hi);
    }
    Bracket::from_values(lo, hi, f_lo, f_hi)
}
