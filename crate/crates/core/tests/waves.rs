#![allow(clippy::excessive_precision)]

use proptest::prelude::*;
use tumorwave::{analytic, general, ConsumptionSpec, Error, GrowthSpec, NutrientModel, SolverKind, WaveParameters};

// Values from oracles/golden.py, digits kept as printed.
const R_VITRO: f64 = 0.54193486314920256070;
const SIGMA_VITRO: f64 = 4.9398524853566208448;
const R_VITRO_CB2: f64 = 1.1745143662291780580;

fn step(c_b: f64, c_bar: f64, model: NutrientModel) -> WaveParameters {
    WaveParameters::new(
        c_b,
        GrowthSpec::step(21.0, 30.0, c_bar).unwrap(),
        ConsumptionSpec::step(2.0, 0.5).unwrap(),
        50.0,
        model,
    )
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn reference_wave_matches_oracle() {
    let w = analytic::solve(&WaveParameters::reference(NutrientModel::InVitro)).unwrap();
    assert!(rel(w.r, R_VITRO) < 1e-13);
    assert!(rel(w.sigma, SIGMA_VITRO) < 1e-13);
    assert_eq!(w.solver, SolverKind::Analytic);
    assert_eq!(w.a, 1.0);
}

#[test]
fn threshold_and_boundary_scale_together() {
    // Only c_bar / c_B enters the in vitro matching equation.
    let a = analytic::solve(&step(2.0, 0.6, NutrientModel::InVitro)).unwrap();
    let b = analytic::solve(&step(1.0, 0.3, NutrientModel::InVitro)).unwrap();
    assert!(rel(a.r, R_VITRO_CB2) < 1e-13);
    assert!(rel(a.r, b.r) < 1e-14);
}

#[test]
fn vivo_needs_threshold_below_half_the_boundary_value() {
    match analytic::solve(&step(1.0, 0.6, NutrientModel::InVivo)) {
        Err(e) => assert!(e.is_no_wave(), "{e}"),
        Ok(w) => panic!("unexpected wave with sigma {}", w.sigma),
    }
    assert!(analytic::solve(&step(1.0, 0.49, NutrientModel::InVivo)).is_ok());
}

#[test]
fn profile_is_continuous_and_monotone_in_the_rim() {
    let w = analytic::solve(&WaveParameters::reference(NutrientModel::InVitro)).unwrap();
    let p = &w.profile;
    assert!(p.x.windows(2).all(|s| s[0] < s[1]));
    assert!(p.c.windows(2).all(|s| s[0] <= s[1] + 1e-15), "nutrient increases towards the healthy side");
    let i0 = p.index_of(0.0).unwrap();
    let ir = p.index_of(w.r).unwrap();
    assert!(p.n[i0..=ir].iter().all(|n| *n == 1.0));
    assert!((p.c[i0] - w.c0).abs() < 1e-14);
    assert!(p.n[ir + 1..].iter().all(|n| *n == 0.0));
    assert!(p.n[..i0].iter().all(|n| *n > 0.0 && *n < 1.0));
}

#[test]
fn general_solver_reproduces_closed_form_for_mollified_steps() {
    let params = WaveParameters::reference(NutrientModel::InVitro);
    let smooth = general::mollified_reference(&params, 1e-3).unwrap();
    let sol = general::solve_sigma(&smooth).unwrap();
    assert_eq!(sol.wave.solver, SolverKind::General);
    assert!(rel(sol.wave.sigma, SIGMA_VITRO) < 1e-3, "{}", sol.wave.sigma);
    assert!(rel(sol.wave.r, R_VITRO) < 1e-3);
    assert!(sol.wave.residuals.fixed_point < 1e-6 * sol.wave.sigma);
    assert!(sol.wave.r <= sol.wave.r_b.unwrap());
}

#[test]
fn invalid_laws_are_rejected() {
    assert!(matches!(GrowthSpec::step(-1.0, 30.0, 0.6), Err(Error::InvalidParams(_))));
    assert!(matches!(ConsumptionSpec::step(2.0, 1.5), Err(Error::InvalidParams(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn speed_is_rim_width_times_the_growth_factor(c_b in 0.7f64..5.0, c_bar in 0.05f64..0.65) {
        prop_assume!(c_bar < c_b);
        let w = analytic::solve(&step(c_b, c_bar, NutrientModel::InVitro)).unwrap();
        let factor = ((21.0f64 + 30.0) * 30.0).sqrt() - 30.0;
        prop_assert!(rel(w.sigma, w.r * factor) < 1e-14);
        prop_assert!(w.residuals.matching < 1e-10);
        prop_assert!(w.x1 > 0.0 && w.x1 < w.r);
    }

    #[test]
    fn richer_boundary_means_faster_wave(c_b in 1.0f64..4.0, bump in 0.05f64..1.0) {
        let slow = analytic::solve(&step(c_b, 0.6, NutrientModel::InVitro)).unwrap();
        let fast = analytic::solve(&step(c_b + bump, 0.6, NutrientModel::InVitro)).unwrap();
        prop_assert!(fast.sigma > slow.sigma);
    }

    #[test]
    fn vivo_is_never_faster_than_vitro(c_b in 1.3f64..5.0) {
        let cmp = analytic::compare_models(&step(c_b, 0.6, NutrientModel::InVitro)).unwrap();
        prop_assert!(cmp.ordering_ok);
    }
}
