//! Composite Gauss-Legendre quadrature.

use alloc::vec::Vec;
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

const NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Panels used by the wave solvers unless told otherwise.
pub const DEFAULT_PANELS: usize = 64;

/// Weight applied to the integrand on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    One,
    /// Integrate `s·f(s)`.
    S,
}

/// Four-point Gauss rule on one panel `[a, b]`.
#[inline]
pub(crate) fn gauss4<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (node, w) in NODES.iter().zip(WEIGHTS.iter()) {
        acc += w * f(mid + half * node);
    }
    acc * half
}

/// Composite four-point Gauss rule with `n_panels` equal panels on `[a, b]`.
pub(crate) fn gauss_composite<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, n_panels: usize) -> f64 {
    let n = n_panels.max(1);
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { lo + h };
            gauss4(f, lo, hi)
        })
        .sum()
}

/// `∫₀¹ f(s) ds` or `∫₀¹ s f(s) ds` by composite Gauss-Legendre.
pub fn quad01<F: FnMut(f64) -> f64>(mut f: F, weight: Weight, n_panels: usize) -> f64 {
    match weight {
        Weight::One => gauss_composite(&mut f, 0.0, 1.0, n_panels),
        Weight::S => gauss_composite(&mut |s| s * f(s), 0.0, 1.0, n_panels),
    }
}

/// Like [`quad01`] but splits `[0, 1]` at the given interior points first, so
/// that jumps or kinks of the integrand sit on panel boundaries. The panel
/// budget is shared out in proportion to the sub-interval lengths.
pub fn quad01_split<F: FnMut(f64) -> f64>(mut f: F, weight: Weight, n_panels: usize, breaks: &[f64]) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| *b > 0.0 && *b < 1.0).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    cuts.dedup();
    let mut g = |s: f64| match weight {
        Weight::One => f(s),
        Weight::S => s * f(s),
    };
    let mut total = 0.0;
    let mut a = 0.0;
    for b in cuts.into_iter().chain(core::iter::once(1.0)) {
        let len = b - a;
        if len > 0.0 {
            let panels = ((n_panels as f64 * len).ceil() as usize).max(1);
            total += gauss_composite(&mut g, a, b, panels);
        }
        a = b;
    }
    total
}

/// Adaptive bisection of panels until one- and two-panel Gauss estimates
/// agree to `tol` (absolute, shared across panels). The first few levels are
/// always split so that narrow features between the initial nodes are seen.
const MIN_DEPTH: u32 = 5;

pub(crate) fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    let whole = gauss4(&mut f, a, b);
    stack.push((a, b, whole, 0));
    let span = (b - a).abs();
    let mut total = 0.0;
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gauss4(&mut f, lo, mid);
        let right = gauss4(&mut f, mid, hi);
        let fine = left + right;
        let local_tol = tol * ((hi - lo).abs() / span).max(1e-3);
        if (depth >= MIN_DEPTH && (fine - coarse).abs() <= local_tol) || depth >= max_depth {
            total += fine;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    total
}
