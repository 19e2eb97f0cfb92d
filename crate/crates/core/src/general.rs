//! Traveling waves for smooth growth and consumption laws.
//!
//! The construction has three nested levels:
//!
//! 1. for a speed `σ`, shooting on the necrotic-tail problem gives the
//!    logarithmic slope `A(σ) = c'(0⁻)/c(0⁻)`;
//! 2. with `A` fixed, the rim length `R_σ` is the root of the decreasing map
//!    `R ↦ ∫₀¹ s G(γ(R, s)) ds`, where `γ(R, ·)` is the rim nutrient on
//!    the rescaled coordinate `s = 1 - x/R`;
//! 3. `σ` itself solves `σ = R_σ ∫₀¹ G(γ(R_σ, s)) ds`.

use crate::error::{Error, Result};
use crate::model::{ConsumptionSpec, GrowthSpec, NutrientModel, WaveParameters};
use crate::numerics::ode::{integrate, Control, OdeOptions};
use crate::numerics::shooting::DEFAULT_DELTA;
use crate::numerics::{bisect, grow_bracket, integrate_shooting_with, quad01_split, Bracket, ShootOutcome, Weight};
use crate::wave::{Profile, ProfileGrid, Residuals, SolverKind, TravelingWave};
use alloc::vec;
use alloc::vec::Vec;
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

/// Lower end of the speed scan.
pub const SIGMA_LO: f64 = 1e-6;
/// Number of sub-intervals scanned for sign changes of the fixed-point map.
pub const SCAN_INTERVALS: usize = 32;
const SIGMA_CAP: f64 = 1e6;

/// Tuning knobs of the general solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralOptions {
    /// Cutoff `δ` of the shooting problem.
    pub delta: f64,
    /// Final width of the Type I / Type II slope bracket.
    pub slope_tol: f64,
    /// Gauss panels on `[0, 1]` for the rim integrals.
    pub panels: usize,
    /// `|h(σ)| <= fixed_point_tol · max(1, σ)` stops the outer bisection.
    pub fixed_point_tol: f64,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        GeneralOptions { delta: DEFAULT_DELTA, slope_tol: 1e-10, panels: 64, fixed_point_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootResult {
    pub a: f64,
    pub sigma: f64,
    /// Terminal `ũ` of the last Type II shot.
    pub residual: f64,
    pub bound_sqrt_psi1: f64,
    pub bound_integral: f64,
}

fn smooth_laws(params: &WaveParameters) -> Result<()> {
    if params.growth.is_step() {
        return Err(Error::StepGrowthUnsupported);
    }
    if params.consumption.is_step() {
        return Err(Error::StepPsiUnsupported);
    }
    Ok(())
}

/// `A(σ)` by bisection on the initial slope of the tail problem.
pub fn shoot_a(sigma: f64, params: &WaveParameters) -> Result<ShootResult> {
    shoot_a_with(sigma, params, &GeneralOptions::default())
}

pub fn shoot_a_with(sigma: f64, params: &WaveParameters, opts: &GeneralOptions) -> Result<ShootResult> {
    if params.consumption.is_step() {
        return Err(Error::StepPsiUnsupported);
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidParams(alloc::format!("sigma must be positive, got {sigma}")));
    }
    let g_minus = params.growth.necrotic_rate();
    let psi = &params.consumption;
    let bound_sqrt_psi1 = psi.rim_rate().sqrt();
    let bound_integral = sigma / g_minus * psi.integral_over_n();
    // The bounds are sharp in limits, so leave room for integration error.
    let mut hi = bound_sqrt_psi1.min(bound_integral) * 1.01 + 1e-12;
    let mut lo = 0.0;
    let shot = |s: f64| integrate_shooting_with(sigma, g_minus, |n| psi.eval(n), s, opts.delta);
    let mut residual = match shot(hi)? {
        ShootOutcome::TypeII { u_terminal, .. } => u_terminal,
        ShootOutcome::TypeI { .. } => return Err(Error::BracketFailure { slope: hi }),
    };
    while hi - lo > opts.slope_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match shot(mid)? {
            ShootOutcome::TypeII { u_terminal, .. } => {
                hi = mid;
                residual = u_terminal;
            }
            ShootOutcome::TypeI { .. } => lo = mid,
        }
    }
    Ok(ShootResult { a: 0.5 * (lo + hi), sigma, residual, bound_sqrt_psi1, bound_integral })
}

/// Rim nutrient for a given rim length and tail slope.
///
/// Both models share the form `c(x) = W (e^{-k(R-x)} + q e^{-k(R+x)})` on
/// `[0, R]` with `k = √ψ(1)` and `q = (k - A)/(k + A)`; only the weight `W`
/// differs (`c_B/(1 + q e^{-2kR})` in vitro, `c_B/2` in vivo).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaProfile {
    pub model: NutrientModel,
    pub r: f64,
    pub a: f64,
    pub c_b: f64,
    pub k: f64,
    q: f64,
    w: f64,
}

impl GammaProfile {
    pub fn new(model: NutrientModel, r: f64, a: f64, c_b: f64, psi1: f64) -> Self {
        let k = psi1.sqrt();
        let q = (k - a) / (k + a);
        let w = match model {
            NutrientModel::InVitro => c_b / (1.0 + q * (-2.0 * k * r).exp()),
            NutrientModel::InVivo => 0.5 * c_b,
        };
        GammaProfile { model, r, a, c_b, k, q, w }
    }

    pub fn from_params(params: &WaveParameters, r: f64, a: f64) -> Self {
        Self::new(params.model, r, a, params.c_b, params.consumption.rim_rate())
    }

    /// `γ(R, s)`, the nutrient at `x = R(1 - s)`.
    pub fn eval(&self, s: f64) -> f64 {
        let kr = self.k * self.r;
        self.w * ((-kr * s).exp() + self.q * (-kr * (2.0 - s)).exp())
    }

    /// Nutrient at `x ∈ [0, R]`.
    pub fn c_at(&self, x: f64) -> f64 {
        self.w * ((-self.k * (self.r - x)).exp() + self.q * (-self.k * (self.r + x)).exp())
    }

    pub fn dc_at(&self, x: f64) -> f64 {
        self.w * self.k * ((-self.k * (self.r - x)).exp() - self.q * (-self.k * (self.r + x)).exp())
    }

    /// `c'(R)/k` in vitro; in vivo the coefficient of `e^{-k(x-R)}` in the
    /// healthy region. Both reduce to the same expression.
    pub fn c_r_prime(&self) -> f64 {
        self.w * (1.0 - self.q * (-2.0 * self.k * self.r).exp())
    }

    pub fn c0(&self) -> f64 {
        self.eval(1.0)
    }

    /// Nutrient in the healthy region `x >= R`.
    pub fn healthy(&self, x: f64) -> f64 {
        match self.model {
            NutrientModel::InVitro => self.c_b,
            NutrientModel::InVivo => self.c_b - self.c_r_prime() * (self.k * (self.r - x)).exp(),
        }
    }

    /// Points of `[0, 1]` where `γ(R, ·)` crosses the given levels.
    fn crossings(&self, levels: &[f64]) -> Vec<f64> {
        let (top, bottom) = (self.eval(0.0), self.eval(1.0));
        levels
            .iter()
            .filter(|b| **b < top && **b > bottom)
            .filter_map(|b| {
                let br = Bracket::from_values(0.0, 1.0, top - b, bottom - b).ok()?;
                bisect(|s| self.eval(s) - b, br, 1e-15, 0.0, 200).ok()
            })
            .collect()
    }

    fn integral(&self, growth: &GrowthSpec, weight: Weight, panels: usize) -> f64 {
        let breaks = self.crossings(&growth.breakpoints());
        quad01_split(|s| growth.eval(self.eval(s)), weight, panels, &breaks)
    }
}

/// `∫₀¹ s G(γ(R, s)) ds`, nonincreasing in `R`.
pub fn rim_moment(r: f64, a: f64, params: &WaveParameters, panels: usize) -> f64 {
    GammaProfile::from_params(params, r, a).integral(&params.growth, Weight::S, panels)
}

/// `∫₀¹ G(γ(R, s)) ds`.
pub fn rim_growth(r: f64, a: f64, params: &WaveParameters, panels: usize) -> f64 {
    GammaProfile::from_params(params, r, a).integral(&params.growth, Weight::One, panels)
}

fn check_model(params: &WaveParameters) -> Result<()> {
    if params.model == NutrientModel::InVivo && params.c_bar() >= 0.5 * params.c_b {
        return Err(Error::NoWave("c_bar >= c_B/2".into()));
    }
    params.check_existence()
}

fn monotone_root<F: FnMut(f64) -> f64>(mut f: F, k: f64) -> Result<f64> {
    let f0 = f(0.0);
    let start = 1.0 / k.max(1e-3);
    let br = grow_bracket(&mut f, 0.0, start, 2.0, 1e4 * start)?;
    if !(f0 > 0.0) {
        return Err(Error::NoSignChange { lo: br.lo, hi: br.hi, f_lo: br.f_lo, f_hi: br.f_hi });
    }
    bisect(&mut f, br, 1e-14 * br.hi, 0.0, 400)
}

/// Rim length `R_σ` for a tail slope `A`.
pub fn solve_r_sigma(a: f64, params: &WaveParameters) -> Result<f64> {
    solve_r_sigma_with(a, params, &GeneralOptions::default())
}

pub fn solve_r_sigma_with(a: f64, params: &WaveParameters, opts: &GeneralOptions) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParams(alloc::format!("tail slope A must be positive, got {a}")));
    }
    check_model(params)?;
    let k = params.consumption.rim_rate().sqrt();
    monotone_root(|r| rim_moment(r, a, params, opts.panels), k)
}

/// Envelope bound `R_b >= R_σ`, uniform in `σ`.
pub fn compute_r_b(params: &WaveParameters) -> Result<f64> {
    check_model(params)?;
    let k = params.consumption.rim_rate().sqrt();
    let c_b = params.c_b;
    let model = params.model;
    let growth = &params.growth;
    let envelope = move |r: f64, s: f64| match model {
        NutrientModel::InVitro => c_b / (k * r * s).cosh(),
        NutrientModel::InVivo => {
            let e = (-k * r * s).exp();
            0.5 * c_b * e * (1.0 + e)
        }
    };
    monotone_root(
        |r| {
            // The envelope decreases in s; split at its level crossings.
            let breaks: Vec<f64> = growth
                .breakpoints()
                .iter()
                .filter(|b| **b < envelope(r, 0.0) && **b > envelope(r, 1.0))
                .filter_map(|b| {
                    let br = Bracket::from_values(0.0, 1.0, envelope(r, 0.0) - b, envelope(r, 1.0) - b).ok()?;
                    bisect(|s| envelope(r, s) - b, br, 1e-15, 0.0, 200).ok()
                })
                .collect();
            quad01_split(|s| growth.eval(envelope(r, s)), Weight::S, 64, &breaks)
        },
        k,
    )
}

/// One evaluation of the outer map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointEval {
    pub sigma: f64,
    pub shoot: ShootResult,
    pub r: f64,
    pub growth_integral: f64,
    /// `h(σ) = σ - R_σ ∫₀¹ G(γ(R_σ, s)) ds`.
    pub h: f64,
}

pub fn fixed_point_map(sigma: f64, params: &WaveParameters, opts: &GeneralOptions) -> Result<FixedPointEval> {
    let shoot = shoot_a_with(sigma, params, opts)?;
    let r = solve_r_sigma_with(shoot.a, params, opts)?;
    let growth_integral = rim_growth(r, shoot.a, params, opts.panels);
    Ok(FixedPointEval { sigma, shoot, r, growth_integral, h: sigma - r * growth_integral })
}

/// Result of the general solver: the wave at the first root plus every
/// root found by the scan.
#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub wave: TravelingWave,
    pub roots: Vec<f64>,
    pub shoot: ShootResult,
}

pub fn solve_sigma(params: &WaveParameters) -> Result<GeneralSolution> {
    solve_sigma_with(params, &GeneralOptions::default(), &ProfileGrid::default())
}

pub fn solve_sigma_with(params: &WaveParameters, opts: &GeneralOptions, grid: &ProfileGrid) -> Result<GeneralSolution> {
    smooth_laws(params)?;
    check_model(params)?;
    let r_b = compute_r_b(params)?;
    let h = |s: f64| fixed_point_map(s, params, opts);

    let lo_eval = h(SIGMA_LO)?;
    if !(lo_eval.h < 0.0) {
        return Err(Error::NoWave(alloc::format!("fixed-point map is not below the diagonal at sigma = {SIGMA_LO}")));
    }
    let mut sigma_hi = 1.0;
    let mut hi_eval = h(sigma_hi)?;
    while hi_eval.h <= 0.0 {
        if sigma_hi >= SIGMA_CAP {
            return Err(Error::NoWave(alloc::format!("no sign change of the fixed-point map below sigma = {SIGMA_CAP}")));
        }
        sigma_hi *= 2.0;
        hi_eval = h(sigma_hi)?;
    }

    let mut samples = Vec::with_capacity(SCAN_INTERVALS + 1);
    samples.push(lo_eval);
    for i in 1..SCAN_INTERVALS {
        let s = SIGMA_LO + (sigma_hi - SIGMA_LO) * i as f64 / SCAN_INTERVALS as f64;
        samples.push(h(s)?);
    }
    samples.push(hi_eval);

    let mut roots: Vec<FixedPointEval> = Vec::new();
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.h == 0.0 {
            roots.push(*a);
            continue;
        }
        if (a.h < 0.0) == (b.h < 0.0) || b.h == 0.0 {
            continue;
        }
        roots.push(refine_root(*a, *b, params, opts)?);
    }
    if let Some(last) = samples.last() {
        if last.h == 0.0 {
            roots.push(*last);
        }
    }
    let first = *roots.first().ok_or_else(|| Error::NoWave("no sign change of the fixed-point map".into()))?;
    let wave = build_wave(params, &first, r_b, grid)?;
    Ok(GeneralSolution { wave, roots: roots.iter().map(|e| e.sigma).collect(), shoot: first.shoot })
}

fn refine_root(
    mut lo: FixedPointEval,
    mut hi: FixedPointEval,
    params: &WaveParameters,
    opts: &GeneralOptions,
) -> Result<FixedPointEval> {
    for _ in 0..200 {
        let mid = 0.5 * (lo.sigma + hi.sigma);
        if mid <= lo.sigma || mid >= hi.sigma {
            break;
        }
        let e = fixed_point_map(mid, params, opts)?;
        if e.h.abs() <= opts.fixed_point_tol * mid.max(1.0) {
            return Ok(e);
        }
        if (e.h < 0.0) == (lo.h < 0.0) {
            lo = e;
        } else {
            hi = e;
        }
    }
    Ok(if lo.h.abs() <= hi.h.abs() { lo } else { hi })
}

/// Samples the wave for a converged speed.
pub fn build_wave(params: &WaveParameters, e: &FixedPointEval, r_b: f64, grid: &ProfileGrid) -> Result<TravelingWave> {
    let (sigma, r, a) = (e.sigma, e.r, e.shoot.a);
    let gp = GammaProfile::from_params(params, r, a);
    let growth = &params.growth;
    let c_bar = params.c_bar();

    let x1 = if gp.c_at(0.0) >= c_bar {
        0.0
    } else {
        let br = Bracket::new(|x| gp.c_at(x) - c_bar, 0.0, r)?;
        bisect(|x| gp.c_at(x) - c_bar, br, 1e-15 * r.max(1.0), 0.0, 300)?
    };
    let xs = grid.points(r, x1);
    let n_pts = xs.len();
    let mut n = vec![0.0; n_pts];
    let mut c = vec![0.0; n_pts];
    let mut p = vec![0.0; n_pts];

    // Rim: p(x) = ∫₀ˣ (z - x) G(c(z)) dz = I₁(x) - x I₀(x), accumulated
    // panel by panel with the growth breakpoints on panel edges.
    let rim_idx: Vec<usize> = (0..n_pts).filter(|&i| xs[i] >= 0.0 && xs[i] <= r).collect();
    let mut kinks: Vec<f64> = growth
        .breakpoints()
        .iter()
        .filter_map(|b| {
            let br = Bracket::new(|x| gp.c_at(x) - b, 0.0, r).ok()?;
            bisect(|x| gp.c_at(x) - b, br, 1e-15 * r.max(1.0), 0.0, 300).ok()
        })
        .collect();
    kinks.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let (mut i0, mut i1) = (0.0, 0.0);
    let mut prev_x = 0.0;
    for &i in &rim_idx {
        let x = xs[i];
        let mut a_x = prev_x;
        for &kx in kinks.iter().filter(|k| **k > prev_x && **k < x).chain(core::iter::once(&x)) {
            if kx > a_x {
                let mut g0 = |z: f64| growth.eval(gp.c_at(z));
                i0 += crate::numerics::quad::gauss4(&mut g0, a_x, kx);
                let mut g1 = |z: f64| z * growth.eval(gp.c_at(z));
                i1 += crate::numerics::quad::gauss4(&mut g1, a_x, kx);
            }
            a_x = kx;
        }
        prev_x = x;
        n[i] = 1.0;
        c[i] = gp.c_at(x);
        p[i] = if x == 0.0 || x == r { 0.0 } else { i1 - x * i0 };
    }

    for i in 0..n_pts {
        if xs[i] > r {
            c[i] = gp.healthy(xs[i]);
        }
    }

    let tail_idx: Vec<usize> = (0..n_pts).filter(|&i| xs[i] < 0.0).collect();
    let tail_x: Vec<f64> = tail_idx.iter().map(|&i| xs[i]).collect();
    let tail = necrotic_tail(params, sigma, gp.c0(), &tail_x)?;
    for (j, &i) in tail_idx.iter().enumerate() {
        n[i] = tail.n[j];
        c[i] = tail.c[j];
    }

    Ok(TravelingWave {
        model: params.model,
        solver: SolverKind::General,
        sigma,
        r,
        x1,
        c_r_prime: gp.c_r_prime(),
        c0: gp.c0(),
        c0_prime: a * gp.c0(),
        a,
        alpha: None,
        r_b: Some(r_b),
        residuals: Residuals {
            matching: rim_moment(r, a, params, GeneralOptions::default().panels).abs(),
            fixed_point: e.h.abs(),
            shooting: e.shoot.residual,
            tail_slope: (tail.slope_at_zero - a).abs(),
        },
        profile: Profile { x: xs, n, c, p },
    })
}

struct Tail {
    n: Vec<f64>,
    c: Vec<f64>,
    slope_at_zero: f64,
}

/// Density and nutrient behind the rim, on increasing sample points `xs < 0`.
///
/// `c'' = ψ(n) c` is integrated forward from the deepest sample, the
/// direction in which the bounded mode dominates, then scaled to `c(0) = c₀`.
/// `n(x) = exp(∫ₓ⁰ G(c)/σ)` is updated from the new `c` until it settles;
/// for laws with `G ≡ -g₋` below `c̄` one update is exact.
fn necrotic_tail(params: &WaveParameters, sigma: f64, c0: f64, xs: &[f64]) -> Result<Tail> {
    let m = xs.len();
    if m == 0 {
        return Ok(Tail { n: Vec::new(), c: Vec::new(), slope_at_zero: f64::NAN });
    }
    let g_minus = params.growth.necrotic_rate();
    let psi = &params.consumption;
    let growth = &params.growth;
    // Nodes: the samples then x = 0.
    let mut nodes: Vec<f64> = xs.to_vec();
    nodes.push(0.0);
    let mut log_n: Vec<f64> = nodes.iter().map(|x| g_minus * x / sigma).collect();
    let mut c = vec![0.0; nodes.len()];
    let mut slope_at_zero = f64::NAN;
    let opts = OdeOptions { rtol: 1e-11, atol: 1e-300, h_init: 0.0, h_min: 1e-14, max_steps: 1_000_000 };

    for _ in 0..50 {
        let ln = log_n.clone();
        let nodes_ref = &nodes;
        let n_of = |x: f64| -> f64 {
            // Linear interpolation of ln n between nodes.
            let j = match nodes_ref.binary_search_by(|v| v.partial_cmp(&x).unwrap_or(core::cmp::Ordering::Less)) {
                Ok(j) => return ln[j].exp(),
                Err(j) => j,
            };
            if j == 0 {
                let slope = (ln[1] - ln[0]) / (nodes_ref[1] - nodes_ref[0]);
                return (ln[0] + slope * (x - nodes_ref[0])).exp();
            }
            if j >= nodes_ref.len() {
                return ln[ln.len() - 1].exp();
            }
            let t = (x - nodes_ref[j - 1]) / (nodes_ref[j] - nodes_ref[j - 1]);
            (ln[j - 1] + t * (ln[j] - ln[j - 1])).exp()
        };
        // Log form keeps the magnitudes tame: y = ln c, w = c'/c with
        // w' = ψ(n) - w², started on the frozen-coefficient bounded mode.
        let mut state = [0.0, psi.eval(n_of(nodes[0])).sqrt()];
        let mut log_c = vec![0.0; nodes.len()];
        let mut h_next = 0.0;
        for j in 1..nodes.len() {
            let o = OdeOptions { h_init: h_next, ..opts };
            let end = integrate(
                |x, y: &[f64; 2]| [y[1], psi.eval(n_of(x)) - y[1] * y[1]],
                nodes[j - 1],
                state,
                nodes[j],
                &o,
                |_, _| Control::Continue,
            )?;
            state = end.y;
            h_next = end.h_last.abs();
            log_c[j] = state[0];
        }
        slope_at_zero = state[1];
        let shift = c0.ln() - log_c[nodes.len() - 1];
        for j in 0..nodes.len() {
            c[j] = (log_c[j] + shift).exp();
        }
        // ln n(x_j) = (1/σ) ∫_{x_j}^0 G(c) dz by the trapezoid rule.
        let mut new_log_n = vec![0.0; nodes.len()];
        let mut acc = 0.0;
        for j in (0..nodes.len() - 1).rev() {
            let dx = nodes[j + 1] - nodes[j];
            acc += 0.5 * dx * (growth.eval(c[j]) + growth.eval(c[j + 1]));
            new_log_n[j] = acc / sigma;
        }
        let change = new_log_n
            .iter()
            .zip(&log_n)
            .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max);
        log_n = new_log_n;
        if change <= 1e-12 {
            break;
        }
    }
    Ok(Tail {
        n: log_n[..m].iter().map(|v| v.exp()).collect(),
        c: c[..m].to_vec(),
        slope_at_zero,
    })
}

/// Smooth laws close to the step pair `(g₊, g₋, c̄)`, `(λ, n_c)`; used to
/// cross-check the general solver against the closed form.
pub fn mollified_reference(params: &WaveParameters, width: f64) -> Result<WaveParameters> {
    match (&params.growth, &params.consumption) {
        (GrowthSpec::Step { g_plus, g_minus, c_bar }, ConsumptionSpec::Step { lambda, n_c }) => {
            let growth = GrowthSpec::mollified_step(*g_plus, *g_minus, *c_bar, width)?;
            let consumption = ConsumptionSpec::mollified_step(*lambda, *n_c, width)?;
            WaveParameters::new(params.c_b, growth, consumption, params.gamma, params.model)
        }
        _ => Err(Error::InvalidParams("mollification needs step growth and consumption laws".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear_params(model: NutrientModel) -> WaveParameters {
        WaveParameters::new(
            1.0,
            GrowthSpec::linear(200.0, 0.3).unwrap(),
            ConsumptionSpec::linear(2.0).unwrap(),
            50.0,
            model,
        )
        .unwrap()
    }

    #[test]
    fn zero_rim_gives_boundary_value() {
        let p = linear_params(NutrientModel::InVitro);
        let gp = GammaProfile::from_params(&p, 0.0, 0.7);
        for s in [0.0, 0.3, 1.0] {
            assert!((gp.eval(s) - 1.0).abs() < 1e-15);
        }
        let m0 = rim_moment(0.0, 0.7, &p, 64);
        assert!((m0 - p.growth.eval(1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_monotone_in_s_and_r() {
        for model in [NutrientModel::InVitro, NutrientModel::InVivo] {
            let p = linear_params(model);
            for a in [0.1, 0.9, 1.4] {
                for r in [0.1, 1.0, 3.0] {
                    let gp = GammaProfile::from_params(&p, r, a);
                    let gq = GammaProfile::from_params(&p, r * 1.1, a);
                    let mut prev = f64::INFINITY;
                    for i in 0..=50 {
                        let s = i as f64 / 50.0;
                        let v = gp.eval(s);
                        assert!(v <= prev + 1e-15);
                        assert!(gq.eval(s) <= v + 1e-15);
                        prev = v;
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_matches_its_derivative_at_zero() {
        let p = linear_params(NutrientModel::InVitro);
        let gp = GammaProfile::from_params(&p, 0.8, 0.6);
        assert!((gp.dc_at(0.0) / gp.c_at(0.0) - 0.6).abs() < 1e-13);
        // c'(R) = k c'_R in vitro.
        assert!((gp.dc_at(0.8) - gp.k * gp.c_r_prime()).abs() < 1e-13);
        assert!((gp.c_at(0.8) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn invivo_rim_at_zero_length() {
        let p = linear_params(NutrientModel::InVivo);
        let a = 0.5;
        let gp = GammaProfile::from_params(&p, 0.0, a);
        let k = 2f64.sqrt();
        assert!((gp.eval(0.4) - k / (a + k)).abs() < 1e-14);
        assert!(gp.eval(0.4) >= 0.5);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn envelope_bounds_golden() {
        let rb = compute_r_b(&linear_params(NutrientModel::InVitro)).unwrap();
        assert!((rb - 2.2148145453469552701).abs() < 1e-9, "{rb}");
        let rb = compute_r_b(&linear_params(NutrientModel::InVivo)).unwrap();
        assert!((rb - 1.0107468448733716381).abs() < 1e-9, "{rb}");
    }

    #[test]
    fn linear_consumption_bounds() {
        let p = linear_params(NutrientModel::InVitro);
        let g_minus = p.growth.necrotic_rate();
        for sigma in [0.1, 1.0, 10.0] {
            let s = shoot_a(sigma, &p).unwrap();
            let bound = 2f64.sqrt().min(sigma * 2.0 / g_minus);
            assert!(s.a > 0.0 && s.a <= bound * (1.0 + 1e-6), "{sigma}: {}", s.a);
            assert!(s.residual >= 0.0 && s.residual <= 1e-6);
        }
    }

    #[test]
    fn slope_vanishes_with_speed() {
        let p = linear_params(NutrientModel::InVitro);
        let small = shoot_a(1e-4, &p).unwrap().a;
        let big = shoot_a(1.0, &p).unwrap().a;
        assert!(small < 1e-3 && small < big);
    }

    #[test]
    fn step_laws_rejected() {
        let p = WaveParameters::reference(NutrientModel::InVitro);
        assert_eq!(shoot_a(1.0, &p).unwrap_err(), Error::StepPsiUnsupported);
        assert!(solve_sigma(&p).is_err());
    }

    #[test]
    fn invivo_no_wave() {
        let mut p = linear_params(NutrientModel::InVivo);
        p.growth = GrowthSpec::linear(200.0, 0.5).unwrap();
        let e = solve_sigma(&p).unwrap_err();
        assert!(matches!(e, Error::NoWave(_)));
    }

    #[test]
    fn rim_moment_nonincreasing() {
        let p = linear_params(NutrientModel::InVitro);
        let mut prev = f64::INFINITY;
        for i in 0..60 {
            let m = rim_moment(0.05 * i as f64, 0.8, &p, 64);
            assert!(m <= prev + 1e-12);
            prev = m;
        }
    }

    #[test]
    fn linear_wave_within_envelope() {
        for model in [NutrientModel::InVitro, NutrientModel::InVivo] {
            let p = linear_params(model);
            let sol = solve_sigma(&p).unwrap();
            let w = &sol.wave;
            assert!(!sol.roots.is_empty());
            assert!(w.r <= w.r_b.unwrap());
            assert!(w.residuals.fixed_point <= 1e-8 * w.sigma.max(1.0));
            assert!(w.sigma <= w.r_b.unwrap() * p.growth.eval(p.c_b));
            // Tail nutrient is nonnegative and nondecreasing.
            let tail: Vec<f64> = w.profile.x.iter().zip(&w.profile.c).filter(|(x, _)| **x < 0.0).map(|(_, c)| *c).collect();
            assert!(tail.windows(2).all(|q| q[0] <= q[1] * (1.0 + 1e-12)));
            assert!(tail.iter().all(|c| *c >= 0.0));
        }
    }

    #[test]
    fn mollified_steps_reproduce_closed_form() {
        for model in [NutrientModel::InVitro, NutrientModel::InVivo] {
            let step = WaveParameters::reference(model);
            let exact = crate::analytic::solve(&step).unwrap();
            let sol = solve_sigma(&mollified_reference(&step, 1e-3).unwrap()).unwrap();
            let w = &sol.wave;
            assert_eq!(sol.roots.len(), 1);
            assert!((w.sigma / exact.sigma - 1.0).abs() < 1e-3, "{model}: {} vs {}", w.sigma, exact.sigma);
            assert!((w.a - 1.0).abs() < 1e-3, "{}", w.a);
            // The tail is consistent with the shooting slope.
            assert!(w.residuals.tail_slope < 1e-6, "{}", w.residuals.tail_slope);
            for (x, n) in w.profile.x.iter().zip(&w.profile.n).filter(|(x, _)| **x < 0.0) {
                let expected = (30.0 * x / w.sigma).exp();
                assert!((n - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-300, "{x}: {n} vs {expected}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn shooting_slope_within_bounds(sigma in 0.05f64..20.0) {
            let p = linear_params(NutrientModel::InVivo);
            let s = shoot_a(sigma, &p).unwrap();
            prop_assert!(s.a > 0.0);
            prop_assert!(s.a <= s.bound_sqrt_psi1 * (1.0 + 1e-6));
            prop_assert!(s.a <= s.bound_integral * (1.0 + 1e-6));
        }
    }
}
