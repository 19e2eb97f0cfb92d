//! Closed-form traveling waves for step nonlinearities.
//!
//! With `ψ = λ n_c` in the necrotic tail and `G = ±g` the nutrient slope
//! ratio at the transition is `A = ξ = √(λ n_c)`, the point where `c = c̄`
//! sits at `x₁ = (1 - α) R` with `α = √(g₋/(g₊+g₋))`, and everything reduces
//! to one scalar equation for `R`. The speed follows as
//! `σ = R (√((g₊+g₋) g₋) - g₋)`.

use crate::error::{Error, Result};
use crate::model::{ConsumptionSpec, GrowthSpec, NutrientModel, WaveParameters};
use crate::numerics::{bisect, grow_bracket};
use crate::wave::{Profile, ProfileGrid, Residuals, SolverKind, TravelingWave};
use alloc::vec::Vec;
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

/// Step-law constants pulled out of a [`WaveParameters`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLaws {
    pub lambda: f64,
    pub n_c: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    pub c_bar: f64,
    pub c_b: f64,
}

impl StepLaws {
    pub fn from_params(params: &WaveParameters) -> Result<Self> {
        let (g_plus, g_minus, c_bar) = match params.growth {
            GrowthSpec::Step { g_plus, g_minus, c_bar } => (g_plus, g_minus, c_bar),
            GrowthSpec::Smooth(_) => {
                return Err(Error::InvalidParams("analytic solver needs a step growth law".into()))
            }
        };
        let (lambda, n_c) = match params.consumption {
            ConsumptionSpec::Step { lambda, n_c } => (lambda, n_c),
            ConsumptionSpec::Smooth(_) => {
                return Err(Error::InvalidParams("analytic solver needs a step consumption law".into()))
            }
        };
        Ok(StepLaws { lambda, n_c, g_plus, g_minus, c_bar, c_b: params.c_b })
    }

    pub fn alpha(&self) -> f64 {
        alpha(self.g_plus, self.g_minus)
    }

    /// `ξ = √(λ n_c)`, the decay rate of the nutrient in the necrotic tail.
    pub fn xi(&self) -> f64 {
        (self.lambda * self.n_c).sqrt()
    }
}

/// `α = √(g₋/(g₊+g₋))`.
pub fn alpha(g_plus: f64, g_minus: f64) -> f64 {
    (g_minus / (g_plus + g_minus)).sqrt()
}

/// Speed of the step-law wave with rim width `r`.
pub fn sigma_from_r(r: f64, g_plus: f64, g_minus: f64) -> f64 {
    r * (((g_plus + g_minus) * g_minus).sqrt() - g_minus)
}

/// In vitro matching function
/// `F(R) = (c̄/c_B)(cosh √λR + √n_c sinh √λR) - √n_c sinh √λ(1-α)R - cosh √λ(1-α)R`.
pub fn invitro_residual(r: f64, laws: &StepLaws) -> f64 {
    let k = laws.lambda.sqrt();
    let a = k * r;
    let b = k * (1.0 - laws.alpha()) * r;
    let sn = laws.n_c.sqrt();
    laws.c_bar / laws.c_b * (a.cosh() + sn * a.sinh()) - sn * b.sinh() - b.cosh()
}

/// `F(R) e^{-√λR}`, same sign as [`invitro_residual`] but free of overflow.
fn invitro_residual_scaled(r: f64, laws: &StepLaws) -> f64 {
    let k = laws.lambda.sqrt();
    let a = k * r;
    let b = k * (1.0 - laws.alpha()) * r;
    let sn = laws.n_c.sqrt();
    let e2a = (-2.0 * a).exp();
    let lead = laws.c_bar / laws.c_b * 0.5 * ((1.0 + sn) + (1.0 - sn) * e2a);
    let tail = 0.5 * ((1.0 + sn) * (b - a).exp() + (1.0 - sn) * (-b - a).exp());
    lead - tail
}

/// In vivo matching function
/// `F(R) = (c_B/2)(e^{-α√λR} + q e^{(α-2)√λR})`, `q = (1-√n_c)/(1+√n_c)`;
/// the rim width solves `F(R) = c̄`.
pub fn invivo_level(r: f64, laws: &StepLaws) -> f64 {
    let k = laws.lambda.sqrt();
    let al = laws.alpha();
    let sn = laws.n_c.sqrt();
    let q = (1.0 - sn) / (1.0 + sn);
    0.5 * laws.c_b * ((-al * k * r).exp() + q * ((al - 2.0) * k * r).exp())
}

/// Rim width of the in vitro wave.
pub fn solve_r_invitro(params: &WaveParameters) -> Result<f64> {
    let laws = StepLaws::from_params(params)?;
    if laws.c_bar >= laws.c_b {
        return Err(Error::InvalidParams(alloc::format!(
            "c_bar >= c_B ({} >= {}): no admissible in vitro wave",
            laws.c_bar,
            laws.c_b
        )));
    }
    let cap = 1e3 / laws.lambda.sqrt();
    let f = |r: f64| invitro_residual_scaled(r, &laws);
    let bracket = grow_bracket(f, 1e-8, 1.0, 2.0, cap)?;
    bisect(f, bracket, 0.0, 0.0, 200)
}

/// Rim width of the in vivo wave; needs `c̄ < c_B/2`.
pub fn solve_r_invivo(params: &WaveParameters) -> Result<f64> {
    let laws = StepLaws::from_params(params)?;
    if laws.c_bar >= 0.5 * laws.c_b {
        return Err(Error::NoWave("c_bar >= c_B/2".into()));
    }
    let cap = 1e3 / laws.lambda.sqrt();
    let f = |r: f64| invivo_level(r, &laws) - laws.c_bar;
    let bracket = grow_bracket(f, 0.0, 1.0, 2.0, cap)?;
    bisect(f, bracket, 0.0, 0.0, 200)
}

/// Piecewise closed-form wave for given `R` and `σ`.
#[derive(Debug, Clone, Copy)]
struct Shape {
    model: NutrientModel,
    laws: StepLaws,
    k: f64,
    xi: f64,
    r: f64,
    x1: f64,
    sigma: f64,
    c_r_prime: f64,
    c0: f64,
    /// Second root of the rim pressure parabola on `[x₁, R]`.
    r2: f64,
}

impl Shape {
    fn new(laws: StepLaws, model: NutrientModel, r: f64, sigma: f64) -> Self {
        let k = laws.lambda.sqrt();
        let xi = laws.xi();
        let x1 = (1.0 - laws.alpha()) * r;
        let c_r_prime = match model {
            NutrientModel::InVitro => {
                let e = (-2.0 * k * r).exp();
                laws.c_b * ((xi + k) + (xi - k) * e) / ((xi + k) + (k - xi) * e)
            }
            NutrientModel::InVivo => {
                let sn = laws.n_c.sqrt();
                let q = (1.0 - sn) / (1.0 + sn);
                0.5 * laws.c_b * (1.0 - q * (-2.0 * k * r).exp())
            }
        };
        let r2 = x1 - laws.g_minus * x1 * x1 / (laws.g_plus * (r - x1));
        let mut shape = Shape { model, laws, k, xi, r, x1, sigma, c_r_prime, c0: 0.0, r2 };
        shape.c0 = shape.c_rim(0.0);
        shape
    }

    fn c_rim(&self, x: f64) -> f64 {
        let z = self.k * (x - self.r);
        match self.model {
            NutrientModel::InVitro => self.laws.c_b * z.cosh() + self.c_r_prime * z.sinh(),
            NutrientModel::InVivo => self.laws.c_b * z.cosh() - self.c_r_prime * (-z).exp(),
        }
    }

    fn n(&self, x: f64) -> f64 {
        if x < 0.0 {
            (self.laws.g_minus * x / self.sigma).exp()
        } else if x <= self.r {
            1.0
        } else {
            0.0
        }
    }

    fn c(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.c0 * (self.xi * x).exp()
        } else if x <= self.r {
            self.c_rim(x)
        } else {
            match self.model {
                NutrientModel::InVitro => self.laws.c_b,
                NutrientModel::InVivo => self.laws.c_b - self.c_r_prime * (self.k * (self.r - x)).exp(),
            }
        }
    }

    fn p(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= self.r {
            0.0
        } else if x <= self.x1 {
            0.5 * self.laws.g_minus * x * x
        } else {
            // -(g₊/2)(x-x₁)² + g₋x₁(x-x₁) + (g₋/2)x₁², factored through its roots.
            0.5 * self.laws.g_plus * (self.r - x) * (x - self.r2)
        }
    }
}

/// Samples the closed-form wave on `grid`.
pub fn build_profile(params: &WaveParameters, r: f64, sigma: f64, grid: &ProfileGrid) -> Result<TravelingWave> {
    let laws = StepLaws::from_params(params)?;
    let shape = Shape::new(laws, params.model, r, sigma);
    let xs = grid.points(r, shape.x1);
    let mut profile = Profile {
        n: Vec::with_capacity(xs.len()),
        c: Vec::with_capacity(xs.len()),
        p: Vec::with_capacity(xs.len()),
        x: Vec::new(),
    };
    for &x in &xs {
        profile.n.push(shape.n(x));
        profile.c.push(shape.c(x));
        profile.p.push(shape.p(x));
    }
    profile.x = xs;
    Ok(TravelingWave {
        model: params.model,
        solver: SolverKind::Analytic,
        sigma,
        r,
        x1: shape.x1,
        c_r_prime: shape.c_r_prime,
        c0: shape.c0,
        c0_prime: shape.xi * shape.c0,
        a: shape.xi,
        alpha: Some(laws.alpha()),
        r_b: None,
        residuals: Residuals {
            matching: match params.model {
                NutrientModel::InVitro => invitro_residual(r, &laws).abs(),
                NutrientModel::InVivo => (invivo_level(r, &laws) - laws.c_bar).abs(),
            },
            ..Residuals::default()
        },
        profile,
    })
}

/// Solves the step-law wave for `params.model` and samples it on `grid`.
pub fn solve_with_grid(params: &WaveParameters, grid: &ProfileGrid) -> Result<TravelingWave> {
    let laws = StepLaws::from_params(params)?;
    let r = match params.model {
        NutrientModel::InVitro => solve_r_invitro(params)?,
        NutrientModel::InVivo => solve_r_invivo(params)?,
    };
    let sigma = sigma_from_r(r, laws.g_plus, laws.g_minus);
    build_profile(params, r, sigma, grid)
}

/// [`solve_with_grid`] on the default 4096-point grid.
pub fn solve(params: &WaveParameters) -> Result<TravelingWave> {
    solve_with_grid(params, &ProfileGrid::default())
}

/// Rim width and speed only, without sampling a profile.
pub fn solve_r_sigma(params: &WaveParameters) -> Result<(f64, f64)> {
    let laws = StepLaws::from_params(params)?;
    let r = match params.model {
        NutrientModel::InVitro => solve_r_invitro(params)?,
        NutrientModel::InVivo => solve_r_invivo(params)?,
    };
    Ok((r, sigma_from_r(r, laws.g_plus, laws.g_minus)))
}

#[derive(Debug, Clone)]
pub struct ModelComparison {
    pub vitro: TravelingWave,
    pub vivo: TravelingWave,
    /// `R_vivo <= R_vitro` and `σ_vivo <= σ_vitro`.
    pub ordering_ok: bool,
}

/// Solves both nutrient models with the same laws.
pub fn compare_models(params: &WaveParameters) -> Result<ModelComparison> {
    let vitro = solve(&params.clone().with_model(NutrientModel::InVitro))?;
    let vivo = solve(&params.clone().with_model(NutrientModel::InVivo))?;
    let ordering_ok = vivo.r <= vitro.r && vivo.sigma <= vitro.sigma;
    Ok(ModelComparison { vitro, vivo, ordering_ok })
}
