//! Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step magnitude; `0` picks `|t1 - t0| / 100`.
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-12, h_init: 0.0, h_min: 1e-14, max_steps: 1_000_000 }
    }
}

/// Whether the observer wants the integration to go on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct OdeEnd<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    /// True when the observer stopped the run before `t1`.
    pub stopped: bool,
    /// Last accepted step size, handy for restarting on the next segment.
    pub h_last: f64,
    pub steps: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth minus fourth order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (either direction).
///
/// `observer` sees every accepted state, the initial one included, and may
/// stop the run early.
pub fn integrate<const N: usize, F, O>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &OdeOptions,
    mut observer: O,
) -> Result<OdeEnd<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]) -> Control,
{
    let span = t1 - t0;
    if observer(t0, &y0) == Control::Stop {
        return Ok(OdeEnd { t: t0, y: y0, stopped: true, h_last: 0.0, steps: 0 });
    }
    if span == 0.0 {
        return Ok(OdeEnd { t: t0, y: y0, stopped: false, h_last: 0.0, steps: 0 });
    }
    let dir = span.signum();
    let mut h = if opts.h_init > 0.0 { opts.h_init } else { span.abs() / 100.0 };
    h = h.min(span.abs()) * dir;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut steps = 0usize;
    let mut h_last = h;

    while (t1 - t) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let remaining = t1 - t;
        let last = h.abs() >= remaining.abs();
        if last {
            h = remaining;
        }
        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(t + h, &y_new);

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if err.is_nan() {
            err = f64::INFINITY;
        }

        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = k7;
            steps += 1;
            h_last = h;
            if observer(t, &y) == Control::Stop {
                return Ok(OdeEnd { t, y, stopped: true, h_last, steps });
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h.abs() < opts.h_min {
                return Err(Error::StepSizeUnderflow { t, h });
            }
        }
    }
    Ok(OdeEnd { t, y, stopped: false, h_last, steps })
}
