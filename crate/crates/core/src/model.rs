//! Nonlinearities, pressure law and parameter bundle.

use crate::error::{Error, Result};
use crate::numerics::quad::adaptive;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// C¹ smoothstep `3t² - 2t³` on `[0, 1]`, clamped outside.
fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Growth law `G(c)`.
#[derive(Clone)]
pub enum GrowthSpec {
    /// `G = g_plus` above `c_bar`, `-g_minus` at or below it.
    Step { g_plus: f64, g_minus: f64, c_bar: f64 },
    Smooth(SmoothGrowth),
}

#[derive(Clone)]
pub struct SmoothGrowth {
    f: ScalarFn,
    c_bar: f64,
    breakpoints: Vec<f64>,
    label: String,
}

impl GrowthSpec {
    pub fn step(g_plus: f64, g_minus: f64, c_bar: f64) -> Result<Self> {
        for (name, v) in [("g_plus", g_plus), ("g_minus", g_minus), ("c_bar", c_bar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(GrowthSpec::Step { g_plus, g_minus, c_bar })
    }

    /// A smooth growth law with zero at `c_bar`.
    ///
    /// `breakpoints` lists concentrations where `G` changes character (ends
    /// of a transition layer, say); quadratures split their panels there.
    /// Construction samples `G` on `[0, 10 c_bar]` and rejects laws that
    /// decrease somewhere, do not vanish at `c_bar`, or have `G(0) >= 0`.
    pub fn smooth<F>(label: &str, f: F, c_bar: f64, breakpoints: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(c_bar > 0.0 && c_bar.is_finite()) {
            return Err(Error::InvalidParams(format!("c_bar must be positive, got {c_bar}")));
        }
        let g0 = f(0.0);
        if !(g0 < 0.0) {
            return Err(Error::InvalidParams(format!("growth law must be negative at c = 0, got {g0}")));
        }
        let at_bar = f(c_bar);
        if at_bar.abs() > 1e-9 * g0.abs().max(1.0) {
            return Err(Error::InvalidParams(format!("growth law must vanish at c_bar, G(c_bar) = {at_bar}")));
        }
        let samples = 4000;
        let top = 10.0 * c_bar;
        let mut prev = g0;
        for i in 1..=samples {
            let c = top * i as f64 / samples as f64;
            let g = f(c);
            if !g.is_finite() || g < prev - 1e-12 * prev.abs().max(1.0) {
                return Err(Error::InvalidParams(format!("growth law decreases near c = {c}")));
            }
            if c > c_bar && g <= 0.0 && c > c_bar * (1.0 + 1e-9) {
                return Err(Error::InvalidParams(format!("growth law is not positive at c = {c} > c_bar")));
            }
            prev = g;
        }
        let mut breakpoints = breakpoints;
        breakpoints.push(c_bar);
        breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        breakpoints.dedup();
        Ok(GrowthSpec::Smooth(SmoothGrowth { f: Arc::new(f), c_bar, breakpoints, label: label.to_string() }))
    }

    /// `G(c) = slope (c - c_bar)`.
    pub fn linear(slope: f64, c_bar: f64) -> Result<Self> {
        if !(slope > 0.0) {
            return Err(Error::InvalidParams(format!("slope must be positive, got {slope}")));
        }
        Self::smooth(&format!("linear({slope}, {c_bar})"), move |c| slope * (c - c_bar), c_bar, Vec::new())
    }

    /// C¹ version of the step law: `-g_minus` below `c_bar - width`, `g_plus`
    /// above `c_bar + width`, smoothstep ramps to zero at `c_bar` in between.
    pub fn mollified_step(g_plus: f64, g_minus: f64, c_bar: f64, width: f64) -> Result<Self> {
        Self::step(g_plus, g_minus, c_bar)?;
        if !(width > 0.0 && width < c_bar) {
            return Err(Error::InvalidParams(format!("mollification width must lie in (0, c_bar), got {width}")));
        }
        let f = move |c: f64| {
            if c <= c_bar {
                -g_minus * (1.0 - smoothstep((c - c_bar + width) / width))
            } else {
                g_plus * smoothstep((c - c_bar) / width)
            }
        };
        Self::smooth(
            &format!("mollified_step({g_plus}, {g_minus}, {c_bar}, {width})"),
            f,
            c_bar,
            alloc::vec![c_bar - width, c_bar + width],
        )
    }

    #[inline]
    pub fn eval(&self, c: f64) -> f64 {
        match self {
            GrowthSpec::Step { g_plus, g_minus, c_bar } => {
                if c > *c_bar {
                    *g_plus
                } else {
                    -*g_minus
                }
            }
            GrowthSpec::Smooth(s) => (s.f)(c),
        }
    }

    pub fn threshold(&self) -> f64 {
        match self {
            GrowthSpec::Step { c_bar, .. } => *c_bar,
            GrowthSpec::Smooth(s) => s.c_bar,
        }
    }

    /// Death rate `g₋` in the necrotic region; `-G(0)` for smooth laws.
    pub fn necrotic_rate(&self) -> f64 {
        match self {
            GrowthSpec::Step { g_minus, .. } => *g_minus,
            GrowthSpec::Smooth(s) => -(s.f)(0.0),
        }
    }

    pub fn is_step(&self) -> bool {
        matches!(self, GrowthSpec::Step { .. })
    }

    /// Concentrations where `G` jumps or bends sharply.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            GrowthSpec::Step { c_bar, .. } => alloc::vec![*c_bar],
            GrowthSpec::Smooth(s) => s.breakpoints.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GrowthSpec::Step { g_plus, g_minus, c_bar } => format!("step({g_plus}, {g_minus}, {c_bar})"),
            GrowthSpec::Smooth(s) => s.label.clone(),
        }
    }
}

impl fmt::Debug for GrowthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrowthSpec({})", self.label())
    }
}

/// Consumption law `ψ(n)`.
#[derive(Clone)]
pub enum ConsumptionSpec {
    /// `ψ(0) = 0`, `ψ = λ n_c` on `(0, 1)`, `ψ = λ` for `n >= 1`.
    ///
    /// Not C¹, so only the analytic solver accepts it.
    Step { lambda: f64, n_c: f64 },
    Smooth(SmoothConsumption),
}

#[derive(Clone)]
pub struct SmoothConsumption {
    f: ScalarFn,
    rate_at_one: f64,
    integral_over_n: f64,
    label: String,
}

/// Where the mollified step law switches on near `n = 0`. The tail slope of
/// the smoothed law is then `ξ tanh(ξ (σ/g₋) ln(1/onset))` with
/// `ξ = √(λ n_c)`, which is `ξ` to round-off at realistic speeds.
pub const MOLLIFIED_ONSET: f64 = 1e-40;

/// Block length in `ln n` for the `∫ψ(z)/z dz` check (a factor `1e-8` in `n`).
const LOG_BLOCK: f64 = 18.420_680_743_952_367;
const LOG_BLOCKS: usize = 37;

/// `∫₀¹ ψ(z)/z dz` computed as `∫ ψ(e^t) dt` over successive blocks of
/// `t = ln z`. Returns `None` when the last block still contributes, i.e.
/// the integral keeps growing as the lower end is pushed towards zero.
fn integral_over_n<F: Fn(f64) -> f64>(psi: &F) -> Option<f64> {
    let mut total = 0.0;
    let mut last = 0.0;
    for k in 0..LOG_BLOCKS {
        let hi = -(k as f64) * LOG_BLOCK;
        let lo = hi - LOG_BLOCK;
        last = adaptive(|t: f64| psi(t.exp()), lo, hi, 1e-13, 40);
        total += last;
    }
    if !total.is_finite() || last > 1e-9 * total.max(1e-300) {
        None
    } else {
        Some(total)
    }
}

impl ConsumptionSpec {
    pub fn step(lambda: f64, n_c: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParams(format!("lambda must be positive, got {lambda}")));
        }
        if !(n_c > 0.0 && n_c < 1.0) {
            return Err(Error::InvalidParams(format!("n_c must lie in (0, 1), got {n_c}")));
        }
        Ok(ConsumptionSpec::Step { lambda, n_c })
    }

    /// A C¹ consumption law. Checks `ψ(0) = 0`, `0 < ψ(z) <= ψ(1)` on a
    /// sample of `(0, 1)` and that `∫₀¹ ψ(z)/z dz` is finite.
    pub fn smooth<F>(label: &str, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let top = f(1.0);
        if !(top > 0.0 && top.is_finite()) {
            return Err(Error::InvalidParams(format!("psi(1) must be positive, got {top}")));
        }
        let at_zero = f(0.0);
        if at_zero.abs() > 1e-12 * top {
            return Err(Error::InvalidParams(format!("psi(0) must vanish, got {at_zero}")));
        }
        let grid = (1..1000).map(|i| i as f64 / 1000.0).chain((1..=12).map(|k| 10f64.powi(-k)));
        for z in grid {
            let v = f(z);
            if !(v > 0.0) || v > top * (1.0 + 1e-12) {
                return Err(Error::InvalidParams(format!("psi({z}) = {v} outside (0, psi(1)]")));
            }
        }
        let integral = integral_over_n(&f)
            .ok_or_else(|| Error::InvalidParams("integral of psi(z)/z over (0, 1) diverges".to_string()))?;
        Ok(ConsumptionSpec::Smooth(SmoothConsumption {
            f: Arc::new(f),
            rate_at_one: top,
            integral_over_n: integral,
            label: label.to_string(),
        }))
    }

    /// `ψ(n) = rate · n`.
    pub fn linear(rate: f64) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::InvalidParams(format!("rate must be positive, got {rate}")));
        }
        Self::smooth(&format!("linear({rate})"), move |n| rate * n.clamp(0.0, 1.0))
    }

    /// C¹ version of the step law: ramps from `λ n_c` to `λ` over
    /// `[1 - width, 1]` and from `0` to `λ n_c` below [`MOLLIFIED_ONSET`].
    pub fn mollified_step(lambda: f64, n_c: f64, width: f64) -> Result<Self> {
        Self::step(lambda, n_c)?;
        if !(width > 0.0 && width < 0.5) {
            return Err(Error::InvalidParams(format!("mollification width must lie in (0, 0.5), got {width}")));
        }
        let f = move |n: f64| {
            let n = n.clamp(0.0, 1.0);
            if n < MOLLIFIED_ONSET {
                lambda * n_c * smoothstep(n / MOLLIFIED_ONSET)
            } else {
                lambda * n_c + lambda * (1.0 - n_c) * smoothstep((n - 1.0 + width) / width)
            }
        };
        Self::smooth(&format!("mollified_step({lambda}, {n_c}, {width})"), f)
    }

    #[inline]
    pub fn eval(&self, n: f64) -> f64 {
        match self {
            ConsumptionSpec::Step { lambda, n_c } => {
                if n >= 1.0 {
                    *lambda
                } else if n > 0.0 {
                    lambda * n_c
                } else {
                    0.0
                }
            }
            ConsumptionSpec::Smooth(s) => (s.f)(n),
        }
    }

    /// `ψ(1)`, the consumption rate inside the proliferative rim.
    pub fn rim_rate(&self) -> f64 {
        match self {
            ConsumptionSpec::Step { lambda, .. } => *lambda,
            ConsumptionSpec::Smooth(s) => s.rate_at_one,
        }
    }

    /// `∫₀¹ ψ(z)/z dz`; infinite for the step law.
    pub fn integral_over_n(&self) -> f64 {
        match self {
            ConsumptionSpec::Step { .. } => f64::INFINITY,
            ConsumptionSpec::Smooth(s) => s.integral_over_n,
        }
    }

    /// Step laws violate `ψ ∈ C¹`, `ψ(0⁺) = 0`; they are only usable with the
    /// closed-form solver.
    pub fn is_step(&self) -> bool {
        matches!(self, ConsumptionSpec::Step { .. })
    }

    pub fn label(&self) -> String {
        match self {
            ConsumptionSpec::Step { lambda, n_c } => format!("step({lambda}, {n_c})"),
            ConsumptionSpec::Smooth(s) => s.label.clone(),
        }
    }
}

impl fmt::Debug for ConsumptionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConsumptionSpec({})", self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NutrientModel {
    /// Nutrient pinned at `c_B` outside the tumor.
    InVitro,
    /// Nutrient supplied by vasculature in the healthy tissue only.
    InVivo,
}

impl NutrientModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            NutrientModel::InVitro => "vitro",
            NutrientModel::InVivo => "vivo",
        }
    }
}

impl fmt::Display for NutrientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for NutrientModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vitro" | "in_vitro" | "invitro" => Ok(NutrientModel::InVitro),
            "vivo" | "in_vivo" | "invivo" => Ok(NutrientModel::InVivo),
            other => Err(Error::InvalidParams(format!("unknown nutrient model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WaveParameters {
    /// Far-field nutrient concentration.
    pub c_b: f64,
    pub growth: GrowthSpec,
    pub consumption: ConsumptionSpec,
    /// Pressure exponent; only the simulation uses it.
    pub gamma: f64,
    pub model: NutrientModel,
}

impl WaveParameters {
    pub fn new(
        c_b: f64,
        growth: GrowthSpec,
        consumption: ConsumptionSpec,
        gamma: f64,
        model: NutrientModel,
    ) -> Result<Self> {
        if !(c_b > 0.0 && c_b.is_finite()) {
            return Err(Error::InvalidParams(format!("c_B must be positive, got {c_b}")));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidParams(format!("gamma must be >= 1, got {gamma}")));
        }
        Ok(WaveParameters { c_b, growth, consumption, gamma, model })
    }

    /// Step laws `λ = 2`, `n_c = 0.5`, `g₊ = 21`, `g₋ = 30`, `c_B = 1`,
    /// `γ = 50`; the threshold is `0.6` in vitro and `0.3` in vivo.
    pub fn reference(model: NutrientModel) -> Self {
        let c_bar = match model {
            NutrientModel::InVitro => 0.6,
            NutrientModel::InVivo => 0.3,
        };
        WaveParameters {
            c_b: 1.0,
            growth: GrowthSpec::Step { g_plus: 21.0, g_minus: 30.0, c_bar },
            consumption: ConsumptionSpec::Step { lambda: 2.0, n_c: 0.5 },
            gamma: 50.0,
            model,
        }
    }

    pub fn c_bar(&self) -> f64 {
        self.growth.threshold()
    }

    pub fn with_model(mut self, model: NutrientModel) -> Self {
        self.model = model;
        self
    }

    /// The existence condition of the nutrient model: `c̄ < c_B` in vitro,
    /// `c̄ < c_B / 2` in vivo.
    pub fn check_existence(&self) -> Result<()> {
        let c_bar = self.c_bar();
        match self.model {
            NutrientModel::InVitro if c_bar >= self.c_b => {
                Err(Error::InvalidParams(format!("c_bar >= c_B ({c_bar} >= {})", self.c_b)))
            }
            NutrientModel::InVivo if c_bar >= 0.5 * self.c_b => Err(Error::NoWave("c_bar >= c_B/2".to_string())),
            _ => Ok(()),
        }
    }
}

/// Pressure law `p(n) = n^γ`.
#[inline]
pub fn pressure(n: f64, gamma: f64) -> f64 {
    if n <= 0.0 {
        0.0
    } else {
        n.powf(gamma)
    }
}
