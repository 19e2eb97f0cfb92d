//! Splitting scheme for the compressible model `∂ₜn = ∂ₓ(n ∂ₓ n^γ) + n G(c)`
//! in one dimension, with the nutrient solved on a tracked tumor region.
//!
//! Each outer step solves the nutrient for the current density, then runs
//! the transport part (explicit finite volumes, sub-stepped to stay stable),
//! then the reaction part exactly, and finally updates the front mask.

use crate::error::{Error, Result};
use crate::model::{NutrientModel, WaveParameters};
use crate::numerics::tridiag_solve;
use alloc::vec;
use alloc::vec::Vec;
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

/// Default front tolerance.
pub const DEFAULT_EPSILON: f64 = 1e-5;
/// Safety factor of the explicit transport step.
pub const CFL_SAFETY: f64 = 0.4;
// Pressures below this are treated as zero in the transport step.
const PRESSURE_FLOOR: f64 = 1e-200;

/// Uniform cell-centered grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dx: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_max > x_min) || n_cells == 0 || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidParams(alloc::format!(
                "grid needs x_min < x_max and n_cells > 0 (got [{x_min}, {x_max}], {n_cells})"
            )));
        }
        Ok(Grid1D { x_min, x_max, n_cells, dx: (x_max - x_min) / n_cells as f64 })
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }
}

/// What happens to the density at the ends of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransportBoundary {
    /// `n = 0` in a ghost cell beyond each end.
    #[default]
    Dirichlet,
    /// No flux through the ends; total mass is conserved.
    ZeroFlux,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub n: Vec<f64>,
    pub c: Vec<f64>,
    /// `n^γ`, refreshed by [`SimState::refresh_pressure`].
    pub p: Vec<f64>,
    /// Latching front mask: true once the cell has held `n > ε`.
    pub h: Vec<bool>,
}

impl SimState {
    /// State with density `n`, nutrient at `c_b` and the mask set from `ε`.
    pub fn new(n: Vec<f64>, c_b: f64, epsilon: f64) -> Self {
        let len = n.len();
        let h = n.iter().map(|v| *v > epsilon).collect();
        SimState { t: 0.0, n, c: vec![c_b; len], p: vec![0.0; len], h }
    }

    pub fn refresh_pressure(&mut self, gamma: f64) {
        for (p, n) in self.p.iter_mut().zip(&self.n) {
            *p = crate::model::pressure(*n, gamma);
        }
    }

    /// `Σ n dx`.
    pub fn mass(&self, dx: f64) -> f64 {
        self.n.iter().sum::<f64>() * dx
    }
}

/// Plateau of height `value` on `(-half_width, half_width)`.
pub fn plateau(grid: &Grid1D, value: f64, half_width: f64) -> Vec<f64> {
    grid.centers().into_iter().map(|x| if x.abs() < half_width { value } else { 0.0 }).collect()
}

/// Largest stable transport step for the density `n`.
pub fn stable_dt(n: &[f64], gamma: f64, dx: f64) -> f64 {
    let n_max = n.iter().fold(0.0f64, |m, v| m.max(*v));
    let d = gamma * n_max.powf(gamma);
    if d > 0.0 {
        CFL_SAFETY * dx * dx / d
    } else {
        f64::INFINITY
    }
}

/// One explicit finite-volume step of `∂ₜn = ∂ₓ(n ∂ₓ n^γ)`.
///
/// Fails with [`Error::CflViolation`] if `dt` exceeds [`stable_dt`].
pub fn transport_substep(n: &mut [f64], gamma: f64, dx: f64, dt: f64, boundary: TransportBoundary) -> Result<()> {
    let dt_max = stable_dt(n, gamma, dx);
    if dt > dt_max * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, dt_max });
    }
    transport_unchecked(n, gamma, dx, dt, boundary);
    Ok(())
}

fn transport_unchecked(n: &mut [f64], gamma: f64, dx: f64, dt: f64, boundary: TransportBoundary) {
    let len = n.len();
    if len == 0 {
        return;
    }
    let n_floor = PRESSURE_FLOOR.powf(1.0 / gamma);
    let (lo, hi) = match (n.iter().position(|v| *v > n_floor), n.iter().rposition(|v| *v > n_floor)) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return,
    };
    // Only faces touching a cell with nonzero pressure carry flux.
    let a = lo.saturating_sub(1);
    let b = (hi + 1).min(len - 1);
    let p: Vec<f64> = n[a..=b].iter().map(|v| if *v > n_floor { v.powf(gamma) } else { 0.0 }).collect();
    let pr = |i: usize| p[i - a];
    let k = dt / (dx * dx);
    // flux[j] is the flux through the left face of cell a + j, j = 0..=b-a+1.
    let mut flux = vec![0.0; b - a + 2];
    for (j, f) in flux.iter_mut().enumerate() {
        let i = a + j;
        *f = if i == 0 {
            match boundary {
                TransportBoundary::ZeroFlux => 0.0,
                TransportBoundary::Dirichlet => 0.5 * n[0] * pr(0),
            }
        } else if i == len {
            match boundary {
                TransportBoundary::ZeroFlux => 0.0,
                TransportBoundary::Dirichlet => -0.5 * n[len - 1] * pr(len - 1),
            }
        } else if i == a {
            // Left neighbour of the window has zero pressure.
            0.5 * (n[i - 1] + n[i]) * pr(i)
        } else if i == b + 1 {
            -0.5 * (n[i - 1] + n[i]) * pr(i - 1)
        } else {
            0.5 * (n[i - 1] + n[i]) * (pr(i) - pr(i - 1))
        };
    }
    // flux here is m ∂ₓp · dx (positive means mass moving left).
    for (v, f) in n[a..=b].iter_mut().zip(flux.windows(2)) {
        *v += k * (f[1] - f[0]);
        if *v < 0.0 {
            *v = 0.0;
        }
    }
}

/// Transport over `dt`, split into stable sub-steps. Returns their number.
pub fn step_transport(state: &mut SimState, gamma: f64, dx: f64, dt: f64, boundary: TransportBoundary) -> usize {
    let mut remaining = dt;
    let mut count = 0;
    while remaining > 0.0 {
        let dt_max = stable_dt(&state.n, gamma, dx);
        let pieces = (remaining / dt_max).ceil().max(1.0);
        let h = if pieces.is_finite() { remaining / pieces } else { remaining };
        transport_unchecked(&mut state.n, gamma, dx, h, boundary);
        count += 1;
        remaining -= h;
        if remaining <= dt * 1e-14 {
            break;
        }
    }
    count
}

/// `n ← n e^{G(c) dt}`, exact for frozen `c`.
pub fn step_reaction(state: &mut SimState, params: &WaveParameters, dt: f64) {
    for (n, c) in state.n.iter_mut().zip(&state.c) {
        if *n > 0.0 {
            *n *= (params.growth.eval(*c) * dt).exp();
        }
    }
}

/// Marks every cell with `n > ε`; marks are never cleared.
pub fn update_front(state: &mut SimState, epsilon: f64) {
    for (h, n) in state.h.iter_mut().zip(&state.n) {
        if *n > epsilon {
            *h = true;
        }
    }
}

/// Nutrient for the current density and mask, Dirichlet `c_B` at both ends.
///
/// In vitro, cells outside the mask are pinned to `c_B` and cells inside
/// solve `-c'' + ψ(n) c = 0`; a face between the two regions uses the
/// inside diffusion coefficient. In vivo, `-c'' + φ c = (1 - H) c_B` holds
/// everywhere with `φ = ψ(n)` inside and `1` outside.
pub fn solve_nutrient(state: &SimState, params: &WaveParameters, dx: f64) -> Result<Vec<f64>> {
    let len = state.n.len();
    let c_b = params.c_b;
    let inv = 1.0 / (dx * dx);
    let mut lower = vec![0.0; len];
    let mut diag = vec![0.0; len];
    let mut upper = vec![0.0; len];
    let mut rhs = vec![0.0; len];
    let vitro = params.model == NutrientModel::InVitro;
    let face = |i: usize, j: usize| -> f64 {
        if vitro {
            if state.h[i] || state.h[j] {
                1.0
            } else {
                0.0
            }
        } else {
            1.0
        }
    };
    for i in 0..len {
        if vitro && !state.h[i] {
            diag[i] = 1.0;
            rhs[i] = c_b;
            continue;
        }
        let (phi, source) = if state.h[i] { (params.consumption.eval(state.n[i]), 0.0) } else { (1.0, c_b) };
        diag[i] = phi;
        rhs[i] = source;
        if i > 0 {
            let a = face(i - 1, i) * inv;
            diag[i] += a;
            lower[i] = -a;
        } else {
            diag[i] += 2.0 * inv;
            rhs[i] += 2.0 * c_b * inv;
        }
        if i + 1 < len {
            let a = face(i, i + 1) * inv;
            diag[i] += a;
            upper[i] = -a;
        } else {
            diag[i] += 2.0 * inv;
            rhs[i] += 2.0 * c_b * inv;
        }
    }
    tridiag_solve(&lower, &diag, &upper, &rhs)
}

/// Rightmost cell center with `n > ε`.
pub fn front_position(grid: &Grid1D, n: &[f64], epsilon: f64) -> Option<f64> {
    n.iter().rposition(|v| *v > epsilon).map(|i| grid.center(i))
}

/// Front positions over time with an optional fitted speed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrontTrace {
    pub samples: Vec<(f64, f64)>,
    pub fitted_speed: Option<f64>,
    pub fit_window: Option<(f64, f64)>,
    pub fit_residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedFit {
    pub speed: f64,
    pub intercept: f64,
    /// Root-mean-square deviation from the fitted line.
    pub residual: f64,
    pub samples: usize,
}

/// Least-squares slope of the front position over `window`.
pub fn estimate_wave_speed(trace: &FrontTrace, window: (f64, f64)) -> Result<SpeedFit> {
    let pts: Vec<(f64, f64)> = trace
        .samples
        .iter()
        .copied()
        .filter(|(t, _)| *t >= window.0 - 1e-12 && *t <= window.1 + 1e-12)
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientSamples { found: pts.len(), needed: 4 });
    }
    let m = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let x_mean = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let stt: f64 = pts.iter().map(|p| (p.0 - t_mean).powi(2)).sum();
    let stx: f64 = pts.iter().map(|p| (p.0 - t_mean) * (p.1 - x_mean)).sum();
    if !(stt > 0.0) {
        return Err(Error::InsufficientSamples { found: 1, needed: 4 });
    }
    let speed = stx / stt;
    let intercept = x_mean - speed * t_mean;
    let ss: f64 = pts.iter().map(|p| (p.1 - intercept - speed * p.0).powi(2)).sum();
    Ok(SpeedFit { speed, intercept, residual: (ss / m).sqrt(), samples: pts.len() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Plateau { value: f64, half_width: f64 },
    Custom(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub params: WaveParameters,
    pub grid: Grid1D,
    /// Outer (splitting) step.
    pub dt: f64,
    pub t_end: f64,
    pub epsilon: f64,
    pub boundary: TransportBoundary,
    pub initial: InitialData,
    /// Times at which full states are kept.
    pub snapshot_times: Vec<f64>,
    /// Front sampling period in outer steps.
    pub trace_stride: usize,
    pub fit_window: Option<(f64, f64)>,
}

impl SimConfig {
    /// Plateau `n = 0.1` on `(-0.5, 0.5)` on `[-5, 5]`, six snapshots.
    pub fn small_domain(params: WaveParameters) -> Self {
        let t_end = 0.8;
        SimConfig {
            params,
            grid: Grid1D { x_min: -5.0, x_max: 5.0, n_cells: 500, dx: 0.02 },
            dt: 1e-4,
            t_end,
            epsilon: DEFAULT_EPSILON,
            boundary: TransportBoundary::Dirichlet,
            initial: InitialData::Plateau { value: 0.1, half_width: 0.5 },
            snapshot_times: (0..6).map(|i| t_end * i as f64 / 5.0).collect(),
            trace_stride: 1,
            fit_window: None,
        }
    }

    /// The speed-validation run on `[-20, 20]` up to `t = 1.5`.
    pub fn large_domain(params: WaveParameters) -> Self {
        SimConfig {
            grid: Grid1D { x_min: -20.0, x_max: 20.0, n_cells: 2000, dx: 0.02 },
            t_end: 1.5,
            snapshot_times: vec![0.75, 1.0, 1.25, 1.5],
            fit_window: Some((0.75, 1.5)),
            ..Self::small_domain(params)
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad("time step must be positive");
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return bad("final time must be nonnegative");
        }
        if !(self.epsilon > 0.0) {
            return bad("front tolerance must be positive");
        }
        if self.trace_stride == 0 {
            return bad("trace stride must be at least 1");
        }
        let expected = (self.grid.x_max - self.grid.x_min) / self.grid.n_cells as f64;
        if self.grid.n_cells == 0 || (self.grid.dx - expected).abs() > 1e-12 * expected.abs() {
            return bad("grid spacing inconsistent with its bounds");
        }
        if let InitialData::Custom(n) = &self.initial {
            if n.len() != self.grid.n_cells {
                return bad("initial density length differs from the cell count");
            }
            if n.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return bad("initial density must be finite and nonnegative");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub snapshots: Vec<SimState>,
    pub trace: FrontTrace,
    pub final_state: SimState,
    pub steps: usize,
    pub transport_substeps: usize,
    /// Extremes of the nutrient over every solve of the run.
    pub c_min: f64,
    pub c_max: f64,
}

/// Runs the splitting loop up to `t_end`.
pub fn run_simulation(config: &SimConfig) -> Result<SimOutput> {
    run_simulation_observed(config, |_| {})
}

/// Like [`run_simulation`], calling `observer` with the state after every
/// nutrient solve.
pub fn run_simulation_observed<O: FnMut(&SimState)>(config: &SimConfig, mut observer: O) -> Result<SimOutput> {
    config.validate()?;
    let grid = &config.grid;
    let params = &config.params;
    let n0 = match &config.initial {
        InitialData::Plateau { value, half_width } => plateau(grid, *value, *half_width),
        InitialData::Custom(n) => n.clone(),
    };
    let mut state = SimState::new(n0, params.c_b, config.epsilon);
    let mut pending: Vec<f64> = config.snapshot_times.iter().copied().filter(|t| *t <= config.t_end + 1e-12).collect();
    pending.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let mut snapshots = Vec::with_capacity(pending.len());
    let mut trace = FrontTrace::default();
    let (mut c_min, mut c_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let total_steps = (config.t_end / config.dt - 1e-9).ceil().max(0.0) as usize;
    let mut substeps = 0;
    let mut step = 0;
    loop {
        state.c = solve_nutrient(&state, params, grid.dx)?;
        for v in &state.c {
            c_min = c_min.min(*v);
            c_max = c_max.max(*v);
        }
        observer(&state);
        if step % config.trace_stride == 0 || step == total_steps {
            if let Some(x) = front_position(grid, &state.n, config.epsilon) {
                trace.samples.push((state.t, x));
            }
        }
        while let Some(ts) = pending.first().copied() {
            let last = step == total_steps;
            if state.t >= ts - 0.5 * config.dt || last {
                let mut snap = state.clone();
                snap.refresh_pressure(params.gamma);
                snapshots.push(snap);
                pending.remove(0);
            } else {
                break;
            }
        }
        if step == total_steps {
            break;
        }
        let dt = config.dt.min(config.t_end - state.t).max(0.0);
        substeps += step_transport(&mut state, params.gamma, grid.dx, dt, config.boundary);
        step_reaction(&mut state, params, dt);
        update_front(&mut state, config.epsilon);
        step += 1;
        state.t = if step == total_steps { config.t_end } else { step as f64 * config.dt };
        if state.n.iter().any(|v| !v.is_finite()) {
            return Err(Error::CflViolation { dt, dt_max: stable_dt(&state.n, params.gamma, grid.dx) });
        }
    }
    if let Some(window) = config.fit_window {
        if let Ok(fit) = estimate_wave_speed(&trace, window) {
            trace.fitted_speed = Some(fit.speed);
            trace.fit_residual = Some(fit.residual);
            trace.fit_window = Some(window);
        }
    }
    state.refresh_pressure(params.gamma);
    Ok(SimOutput { snapshots, trace, final_state: state, steps: step, transport_substeps: substeps, c_min, c_max })
}
