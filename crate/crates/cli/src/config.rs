//! Run configuration, read from TOML. Every field has a default, so an empty
//! file (or no file at all) reproduces the reference experiment:
//! `γ = 50`, `ψ = 2` for `n >= 1` and `1` below, `G = 21` above `c̄ = 0.6`
//! and `-30` below, `c_B = 1`, plateau `n = 0.1` on `(-0.5, 0.5)`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tumorwave::pde::{Grid1D, InitialData, SimConfig, TransportBoundary, DEFAULT_EPSILON};
use tumorwave::{ConsumptionSpec, GrowthSpec, NutrientModel, WaveParameters};

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    pub wave: WaveConfig,
    pub simulation: SimulationConfig,
    pub validation: ValidationConfig,
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub model: String,
    pub c_b: f64,
    pub gamma: f64,
    pub growth: GrowthConfig,
    pub consumption: ConsumptionConfig,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            model: "vitro".into(),
            c_b: 1.0,
            gamma: 50.0,
            growth: GrowthConfig::default(),
            consumption: ConsumptionConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    Step,
    Linear,
    MollifiedStep,
}

/// `step`: `G = g_plus` above `c_bar`, `-g_minus` below. `linear`:
/// `G = slope (c - c_bar)`. `mollified_step`: the step smoothed over `width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrowthConfig {
    pub kind: LawKind,
    pub g_plus: f64,
    pub g_minus: f64,
    pub c_bar: f64,
    pub slope: f64,
    pub width: f64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig { kind: LawKind::Step, g_plus: 21.0, g_minus: 30.0, c_bar: 0.6, slope: 200.0, width: 1e-3 }
    }
}

/// `step`: `ψ = lambda` for `n >= 1`, `lambda * n_c` below. `linear`:
/// `ψ = rate * n`. `mollified_step`: the step smoothed over `width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConsumptionConfig {
    pub kind: LawKind,
    pub lambda: f64,
    pub n_c: f64,
    pub rate: f64,
    pub width: f64,
}

impl Default for ConsumptionConfig {
    fn default() -> Self {
        ConsumptionConfig { kind: LawKind::Step, lambda: 2.0, n_c: 0.5, rate: 2.0, width: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveConfig {
    /// Smoothing width used when step laws are sent to the general solver.
    pub mollify_width: f64,
}

impl Default for WaveConfig {
    fn default() -> Self {
        WaveConfig { mollify_width: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub t_end: f64,
    pub epsilon: f64,
    /// `dirichlet` (`n = 0` beyond the ends) or `zero_flux`.
    pub boundary: String,
    pub initial_value: f64,
    pub initial_half_width: f64,
    pub snapshot_times: Vec<f64>,
    pub trace_stride: usize,
    pub fit_window: Option<[f64; 2]>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            x_min: -5.0,
            x_max: 5.0,
            n_cells: 500,
            dt: 1e-4,
            t_end: 0.8,
            epsilon: DEFAULT_EPSILON,
            boundary: "dirichlet".into(),
            initial_value: 0.1,
            initial_half_width: 0.5,
            snapshot_times: vec![0.0, 0.16, 0.32, 0.48, 0.64, 0.8],
            trace_stride: 10,
            fit_window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub t_end: f64,
    pub fit_window: [f64; 2],
    /// Accepted relative gap `σ_numeric/σ_analytic - 1`.
    pub band: [f64; 2],
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            x_min: -20.0,
            x_max: 20.0,
            n_cells: 2000,
            dt: 1e-4,
            t_end: 1.5,
            fit_window: [0.75, 1.5],
            band: [-0.05, 0.20],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub c_b: Vec<f64>,
    pub c_bar: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { c_b: vec![1.0, 2.0], c_bar: vec![0.6] }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), CliError> {
        self.model()?;
        positive("params.c_b", self.params.c_b)?;
        if !(self.params.gamma >= 1.0) {
            return Err(invalid(format!("params.gamma must be at least 1, got {}", self.params.gamma)));
        }
        positive("wave.mollify_width", self.wave.mollify_width)?;
        let s = &self.simulation;
        if !(s.x_max > s.x_min) {
            return Err(invalid("simulation.x_max must exceed simulation.x_min"));
        }
        if s.n_cells == 0 {
            return Err(invalid("simulation.n_cells must be positive"));
        }
        positive("simulation.dt", s.dt)?;
        positive("simulation.epsilon", s.epsilon)?;
        if !(s.t_end >= 0.0) {
            return Err(invalid("simulation.t_end must be nonnegative"));
        }
        if s.trace_stride == 0 {
            return Err(invalid("simulation.trace_stride must be positive"));
        }
        self.boundary()?;
        let v = &self.validation;
        if !(v.x_max > v.x_min) || v.n_cells == 0 {
            return Err(invalid("validation grid is empty"));
        }
        positive("validation.dt", v.dt)?;
        positive("validation.t_end", v.t_end)?;
        if !(v.fit_window[0] < v.fit_window[1]) || !(v.band[0] <= v.band[1]) {
            return Err(invalid("validation.fit_window and validation.band must be increasing pairs"));
        }
        if self.sweep.c_b.is_empty() || self.sweep.c_bar.is_empty() {
            return Err(invalid("sweep lists must be nonempty"));
        }
        for v in self.sweep.c_b.iter().chain(&self.sweep.c_bar) {
            positive("sweep entries", *v)?;
        }
        Ok(())
    }

    pub fn model(&self) -> Result<NutrientModel, CliError> {
        self.params.model.parse().map_err(|_| invalid(format!("unknown model '{}'", self.params.model)))
    }

    fn boundary(&self) -> Result<TransportBoundary, CliError> {
        match self.simulation.boundary.as_str() {
            "dirichlet" => Ok(TransportBoundary::Dirichlet),
            "zero_flux" => Ok(TransportBoundary::ZeroFlux),
            other => Err(invalid(format!("unknown boundary '{other}' (dirichlet or zero_flux)"))),
        }
    }

    /// Wave parameters with the given boundary nutrient and threshold.
    pub fn wave_parameters_at(&self, c_b: f64, c_bar: f64) -> Result<WaveParameters, CliError> {
        let p = &self.params;
        let g = &p.growth;
        let growth = match g.kind {
            LawKind::Step => GrowthSpec::step(g.g_plus, g.g_minus, c_bar),
            LawKind::Linear => GrowthSpec::linear(g.slope, c_bar),
            LawKind::MollifiedStep => GrowthSpec::mollified_step(g.g_plus, g.g_minus, c_bar, g.width),
        }?;
        let q = &p.consumption;
        let consumption = match q.kind {
            LawKind::Step => ConsumptionSpec::step(q.lambda, q.n_c),
            LawKind::Linear => ConsumptionSpec::linear(q.rate),
            LawKind::MollifiedStep => ConsumptionSpec::mollified_step(q.lambda, q.n_c, q.width),
        }?;
        Ok(WaveParameters::new(c_b, growth, consumption, p.gamma, self.model()?)?)
    }

    pub fn wave_parameters(&self) -> Result<WaveParameters, CliError> {
        self.wave_parameters_at(self.params.c_b, self.params.growth.c_bar)
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let s = &self.simulation;
        Ok(SimConfig {
            params: self.wave_parameters()?,
            grid: Grid1D::new(s.x_min, s.x_max, s.n_cells)?,
            dt: s.dt,
            t_end: s.t_end,
            epsilon: s.epsilon,
            boundary: self.boundary()?,
            initial: InitialData::Plateau { value: s.initial_value, half_width: s.initial_half_width },
            snapshot_times: s.snapshot_times.clone(),
            trace_stride: s.trace_stride,
            fit_window: s.fit_window.map(|w| (w[0], w[1])),
        })
    }

    /// The simulation used to measure the front speed.
    pub fn validation_sim_config(&self) -> Result<SimConfig, CliError> {
        let v = &self.validation;
        let mut cfg = self.sim_config()?;
        cfg.grid = Grid1D::new(v.x_min, v.x_max, v.n_cells)?;
        cfg.dt = v.dt;
        cfg.t_end = v.t_end;
        cfg.snapshot_times = vec![v.t_end];
        cfg.trace_stride = 1;
        cfg.fit_window = Some((v.fit_window[0], v.fit_window[1]));
        Ok(cfg)
    }
}
