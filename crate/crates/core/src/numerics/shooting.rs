//! Shooting integrator for the necrotic-tail nutrient problem.
//!
//! Behind the tumor (`x < 0`) the density is `n = e^{g₋x/σ}` and the
//! nutrient solves `c'' = ψ(n) c`. With `y = -e^{g₋x/σ}`, `c̃ = c/c₀` and
//! `ũ = c'/c₀` this becomes a Cauchy problem on `[-1, 0)`:
//!
//! ```text
//! dc̃/dy = σ ũ / (g₋ y),   dũ/dy = σ ψ(-y) c̃ / (g₋ y),   c̃(-1) = 1, ũ(-1) = slope0.
//! ```
//!
//! The `1/y` coefficients are removed by integrating in `τ = ln(-y)`, where
//! the system reads `dc̃/dτ = κ ũ`, `dũ/dτ = κ ψ(e^τ) c̃` with `κ = σ/g₋`,
//! from `τ = 0` down to `τ = ln δ`.

use super::ode::{integrate, Control, OdeOptions};
use crate::error::{Error, Result};
use crate::model::ConsumptionSpec;
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

/// Cutoff `δ` near the singular end point `y = 0` used by default.
pub const DEFAULT_DELTA: f64 = 1e-60;

/// Point of the transformed Cauchy problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingState {
    pub y: f64,
    pub c_tilde: f64,
    pub u_tilde: f64,
}

impl ShootingState {
    pub fn initial(slope0: f64) -> Self {
        ShootingState { y: -1.0, c_tilde: 1.0, u_tilde: slope0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShootOutcome {
    /// `ũ` reached zero at `y_cross ∈ [-1, -δ]`: the slope was too small.
    TypeI { y_cross: f64 },
    /// `ũ` stayed positive up to the cutoff: the slope was too large.
    TypeII { u_terminal: f64, terminal: ShootingState },
}

impl ShootOutcome {
    pub fn is_type_ii(&self) -> bool {
        matches!(self, ShootOutcome::TypeII { .. })
    }
}

pub(crate) fn shooting_options() -> OdeOptions {
    OdeOptions { rtol: 1e-12, atol: 1e-15, h_init: 1e-3, h_min: 1e-13, max_steps: 2_000_000 }
}

/// Classifies the shot with initial slope `slope0` for a consumption law
/// given as a closure. See [`integrate_shooting`].
pub fn integrate_shooting_with<P: Fn(f64) -> f64>(
    sigma: f64,
    g_minus: f64,
    psi: P,
    slope0: f64,
    delta: f64,
) -> Result<ShootOutcome> {
    if !(sigma > 0.0) || !(g_minus > 0.0) {
        return Err(Error::InvalidParams(alloc::format!(
            "shooting needs sigma > 0 and g_minus > 0 (got {sigma}, {g_minus})"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParams(alloc::format!("cutoff delta = {delta} outside (0, 1)")));
    }
    if slope0 <= 0.0 {
        // dũ/dy < 0 as soon as y > -1, so ũ goes negative immediately.
        return Ok(ShootOutcome::TypeI { y_cross: -1.0 });
    }
    let kappa = sigma / g_minus;
    let tau_end = delta.ln();
    let mut prev = (0.0f64, slope0);
    let mut crossing: Option<f64> = None;
    let mut went_negative = false;
    let end = integrate(
        |tau, s: &[f64; 2]| [kappa * s[1], kappa * psi(tau.exp()) * s[0]],
        0.0,
        [1.0, slope0],
        tau_end,
        &shooting_options(),
        |tau, s| {
            if s[1] <= 0.0 {
                // Linear interpolation of the zero of ũ in τ.
                let (tp, up) = prev;
                let t_cross = if up > 0.0 { tp + (tau - tp) * up / (up - s[1]) } else { tau };
                crossing = Some(-t_cross.exp());
                return Control::Stop;
            }
            if s[0] < 0.0 {
                // ũ > 0 and c̃ < 0: ũ only grows from here on.
                went_negative = true;
                return Control::Stop;
            }
            prev = (tau, s[1]);
            Control::Continue
        },
    )?;
    if let Some(y_cross) = crossing {
        return Ok(ShootOutcome::TypeI { y_cross });
    }
    let terminal = ShootingState { y: -end.t.exp(), c_tilde: end.y[0], u_tilde: end.y[1] };
    if went_negative {
        return Ok(ShootOutcome::TypeII { u_terminal: end.y[1], terminal });
    }
    // Below the cutoff ψ is frozen at ψ(δ): the bounded continuation has
    // ũ = √ψ(δ)·c̃, so anything steeper is on the Type II side. When ψ
    // vanishes at the cutoff this is the plain test ũ > 0.
    let psi_cut = psi(delta).max(0.0);
    let excess = end.y[1] - psi_cut.sqrt() * end.y[0];
    if excess > 0.0 {
        Ok(ShootOutcome::TypeII { u_terminal: end.y[1], terminal })
    } else {
        Ok(ShootOutcome::TypeI { y_cross: -delta })
    }
}

/// Integrates the transformed tail problem from `y = -1` to `y = -δ` and
/// classifies the shot.
pub fn integrate_shooting(
    sigma: f64,
    g_minus: f64,
    psi: &ConsumptionSpec,
    slope0: f64,
    delta: f64,
) -> Result<ShootOutcome> {
    if psi.is_step() {
        return Err(Error::StepPsiUnsupported);
    }
    integrate_shooting_with(sigma, g_minus, |n| psi.eval(n), slope0, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_psi() -> ConsumptionSpec {
        ConsumptionSpec::linear(2.0).unwrap()
    }

    #[test]
    fn zero_slope_is_type_one() {
        for sigma in [0.1, 1.0, 10.0] {
            let out = integrate_shooting(sigma, 30.0, &linear_psi(), 0.0, DEFAULT_DELTA).unwrap();
            assert!(matches!(out, ShootOutcome::TypeI { .. }));
        }
    }

    #[test]
    fn slope_above_integral_bound_is_type_two() {
        let psi = linear_psi();
        for sigma in [0.1, 1.0, 10.0] {
            let bound = sigma / 30.0 * psi.integral_over_n();
            let out = integrate_shooting(sigma, 30.0, &psi, bound * 1.01, DEFAULT_DELTA).unwrap();
            assert!(out.is_type_ii(), "sigma = {sigma}");
        }
    }

    #[test]
    fn vanishing_consumption_keeps_slope() {
        let out = integrate_shooting_with(1.0, 30.0, |_| 0.0, 0.7, 1e-8).unwrap();
        match out {
            ShootOutcome::TypeII { u_terminal, .. } => assert!((u_terminal - 0.7).abs() < 1e-14),
            other => panic!("expected Type II, got {other:?}"),
        }
    }

    #[test]
    fn constant_consumption_separatrix_is_sqrt_rate() {
        // ψ ≡ 0.5 on (0, 1): the bounded solution is e^{√0.5 x}.
        let xi = 0.5f64.sqrt();
        let below = integrate_shooting_with(5.0, 30.0, |_| 0.5, xi * (1.0 - 1e-6), 1e-8).unwrap();
        let above = integrate_shooting_with(5.0, 30.0, |_| 0.5, xi * (1.0 + 1e-6), 1e-8).unwrap();
        assert!(!below.is_type_ii());
        assert!(above.is_type_ii());
    }

    #[test]
    fn step_consumption_rejected() {
        let step = ConsumptionSpec::step(2.0, 0.5).unwrap();
        assert_eq!(integrate_shooting(1.0, 30.0, &step, 0.5, 1e-8), Err(Error::StepPsiUnsupported));
    }

    #[test]
    fn bad_cutoff_rejected() {
        assert!(integrate_shooting(1.0, 30.0, &linear_psi(), 0.5, 1.5).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
        #[test]
        fn classification_monotone_in_slope(sigma in 0.05f64..20.0, a in 0.0f64..1.5, b in 0.0f64..1.5) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let psi = linear_psi();
            let low = integrate_shooting(sigma, 30.0, &psi, lo, DEFAULT_DELTA).unwrap();
            let high = integrate_shooting(sigma, 30.0, &psi, hi, DEFAULT_DELTA).unwrap();
            if low.is_type_ii() {
                proptest::prop_assert!(high.is_type_ii());
            }
        }
    }
}
