//! The four workflows behind the subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use tumorwave::pde::{self, Grid1D};
use tumorwave::{analytic, general, Error, NutrientModel, SolverKind, TravelingWave, WaveParameters};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{
    self, ModelOrdering, SimSummary, SnapshotEntry, SweepRow, ValidationReport, WaveSummary,
};

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Options {
    pub out: PathBuf,
    pub quiet: bool,
    pub solver: Option<SolverKind>,
}

impl Options {
    fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }
}

fn both_steps(params: &WaveParameters) -> bool {
    params.growth.is_step() && params.consumption.is_step()
}

/// Solves for the wave with the solver implied by the laws, or the one
/// forced on the command line. Step laws sent to the general solver are
/// mollified first. Returns the wave and every speed found.
pub fn solve_wave(
    params: &WaveParameters,
    solver: Option<SolverKind>,
    mollify_width: f64,
) -> Result<(TravelingWave, Vec<f64>), CliError> {
    let choice = solver.unwrap_or(if both_steps(params) { SolverKind::Analytic } else { SolverKind::General });
    match choice {
        SolverKind::Analytic => {
            if !both_steps(params) {
                return Err(Error::InvalidParams("the analytic solver needs step growth and consumption laws".into()).into());
            }
            let wave = analytic::solve(params)?;
            let roots = vec![wave.sigma];
            Ok((wave, roots))
        }
        SolverKind::General => {
            let smooth;
            let target = if params.growth.is_step() || params.consumption.is_step() {
                if !both_steps(params) {
                    return Err(Error::InvalidParams("mix of step and smooth laws; make both smooth".into()).into());
                }
                smooth = general::mollified_reference(params, mollify_width)?;
                &smooth
            } else {
                params
            };
            let sol = general::solve_sigma(target)?;
            Ok((sol.wave, sol.roots))
        }
    }
}

fn write_wave(dir: &Path, params: &WaveParameters, wave: &TravelingWave, roots: &[f64]) -> Result<WaveSummary, CliError> {
    fs::create_dir_all(dir)?;
    let summary = WaveSummary::new(params, wave, roots);
    output::write_json(&dir.join("wave_summary.json"), &summary)?;
    output::write_profile(&dir.join("wave_profile.csv"), wave)?;
    Ok(summary)
}

pub fn cmd_wave(cfg: &RunConfig, opts: &Options) -> Result<WaveSummary, CliError> {
    let params = cfg.wave_parameters()?;
    let (wave, roots) = solve_wave(&params, opts.solver, cfg.wave.mollify_width)?;
    let summary = write_wave(&opts.out, &params, &wave, &roots)?;
    opts.say(format!(
        "{} wave ({} solver): sigma = {:.12}, R = {:.12}, x1 = {:.12}",
        summary.model, summary.solver, summary.sigma, summary.r, summary.x1
    ));
    if roots.len() > 1 {
        opts.say(format!("note: {} speeds found: {:?}", roots.len(), roots));
    }
    Ok(summary)
}

pub fn cmd_simulate(cfg: &RunConfig, opts: &Options) -> Result<SimSummary, CliError> {
    let sim = cfg.sim_config()?;
    let out = pde::run_simulation(&sim)?;
    fs::create_dir_all(&opts.out)?;
    let x = sim.grid.centers();
    let mut snapshots = Vec::with_capacity(out.snapshots.len());
    for (k, state) in out.snapshots.iter().enumerate() {
        let file = format!("snapshot_{k:03}.csv");
        output::write_snapshot(&opts.out.join(&file), &x, state)?;
        snapshots.push(SnapshotEntry { file, t: state.t });
    }
    output::write_trace(&opts.out.join("front_trace.csv"), &out.trace)?;
    let summary = SimSummary {
        model: sim.params.model.as_str().into(),
        gamma: sim.params.gamma,
        c_b: sim.params.c_b,
        x_min: sim.grid.x_min,
        x_max: sim.grid.x_max,
        n_cells: sim.grid.n_cells,
        dt: sim.dt,
        t_end: sim.t_end,
        epsilon: sim.epsilon,
        steps: out.steps,
        transport_substeps: out.transport_substeps,
        snapshots,
        front_samples: out.trace.samples.len(),
        final_front: out.trace.samples.last().map(|s| s.1),
        fitted_speed: out.trace.fitted_speed,
        fit_window: out.trace.fit_window.map(|w| [w.0, w.1]),
        fit_residual: out.trace.fit_residual,
        c_min: out.c_min,
        c_max: out.c_max,
    };
    output::write_json(&opts.out.join("sim_summary.json"), &summary)?;
    opts.say(format!(
        "simulated to t = {} in {} steps ({} transport sub-steps), {} snapshots",
        sim.t_end,
        out.steps,
        out.transport_substeps,
        summary.snapshots.len()
    ));
    match summary.fitted_speed {
        Some(s) => opts.say(format!("fitted front speed: {s:.6}")),
        None => opts.say("no speed fit (no fit window or too few samples)"),
    }
    Ok(summary)
}

pub fn cmd_validate(cfg: &RunConfig, opts: &Options) -> Result<ValidationReport, CliError> {
    let params = cfg.wave_parameters()?;
    if !both_steps(&params) {
        return Err(Error::InvalidParams("validation needs step laws so that the closed-form speed exists".into()).into());
    }
    let exact = analytic::solve(&params)?;
    let sim = cfg.validation_sim_config()?;
    let out = pde::run_simulation(&sim)?;
    let window = cfg.validation.fit_window;
    let fit = pde::estimate_wave_speed(&out.trace, (window[0], window[1]))?;
    let gap = fit.speed / exact.sigma - 1.0;
    let band = cfg.validation.band;
    let ordering = match analytic::compare_models(&params) {
        Ok(cmp) => Some(ModelOrdering {
            sigma_vitro: cmp.vitro.sigma,
            sigma_vivo: cmp.vivo.sigma,
            r_vitro: cmp.vitro.r,
            r_vivo: cmp.vivo.r,
            ordering_ok: cmp.ordering_ok,
        }),
        Err(e) if e.is_no_wave() => None,
        Err(e) => return Err(e.into()),
    };
    let report = ValidationReport {
        model: params.model.as_str().into(),
        gamma: params.gamma,
        c_b: params.c_b,
        c_bar: params.c_bar(),
        sigma_analytic: exact.sigma,
        sigma_numeric: fit.speed,
        relative_gap: gap,
        band,
        pass: gap >= band[0] && gap <= band[1],
        fit_window: window,
        fit_residual: fit.residual,
        n_cells: sim.grid.n_cells,
        dt: sim.dt,
        ordering,
    };
    fs::create_dir_all(&opts.out)?;
    output::write_json(&opts.out.join("validation_report.json"), &report)?;
    output::write_trace(&opts.out.join("front_trace.csv"), &out.trace)?;
    if let Some(last) = out.snapshots.last() {
        output::write_snapshot(&opts.out.join("final_state.csv"), &Grid1D::centers(&sim.grid), last)?;
    }
    opts.say(format!(
        "sigma analytic = {:.6}, numeric = {:.6}, gap = {:+.2}% (band [{:+.0}%, {:+.0}%]): {}",
        report.sigma_analytic,
        report.sigma_numeric,
        100.0 * gap,
        100.0 * band[0],
        100.0 * band[1],
        if report.pass { "PASS" } else { "FAIL" }
    ));
    if let Some(o) = &report.ordering {
        opts.say(format!("sigma_vivo = {:.6} <= sigma_vitro = {:.6}: {}", o.sigma_vivo, o.sigma_vitro, o.ordering_ok));
    }
    if !report.pass {
        return Err(CliError::Validation { gap, lo: band[0], hi: band[1] });
    }
    Ok(report)
}

pub fn cmd_sweep(cfg: &RunConfig, opts: &Options) -> Result<Vec<SweepRow>, CliError> {
    let points: Vec<(f64, f64)> =
        cfg.sweep.c_b.iter().flat_map(|b| cfg.sweep.c_bar.iter().map(move |c| (*b, *c))).collect();
    let base = opts.out.join("sweep");
    fs::create_dir_all(&base)?;
    let rows: Vec<SweepRow> = points
        .par_iter()
        .enumerate()
        .map(|(index, &(c_b, c_bar))| {
            let dir = base.join(format!("point_{index:03}"));
            let attempt = cfg
                .wave_parameters_at(c_b, c_bar)
                .and_then(|p| solve_wave(&p, opts.solver, cfg.wave.mollify_width).map(|w| (p, w)))
                .and_then(|(p, (wave, roots))| write_wave(&dir, &p, &wave, &roots));
            let mut row = SweepRow { index, c_b, c_bar, status: "ok".into(), sigma: None, r: None, dir: None, message: None };
            match attempt {
                Ok(s) => {
                    row.sigma = Some(s.sigma);
                    row.r = Some(s.r);
                    row.dir = Some(format!("sweep/point_{index:03}"));
                }
                Err(e) => {
                    row.status = if e.exit_code() == 2 { "no_wave" } else { "error" }.into();
                    row.message = Some(e.to_string());
                }
            }
            row
        })
        .collect();
    output::write_json(&opts.out.join("sweep_summary.json"), &rows)?;
    for r in &rows {
        match (r.sigma, r.r) {
            (Some(s), Some(rr)) => opts.say(format!("c_B = {:<6} c_bar = {:<6} sigma = {s:.9}  R = {rr:.9}", r.c_b, r.c_bar)),
            _ => opts.say(format!(
                "c_B = {:<6} c_bar = {:<6} {}: {}",
                r.c_b,
                r.c_bar,
                r.status,
                r.message.as_deref().unwrap_or("")
            )),
        }
    }
    if let Some(bad) = rows.iter().find(|r| r.status == "error") {
        return Err(CliError::Numerical(format!(
            "sweep point {} failed: {}",
            bad.index,
            bad.message.as_deref().unwrap_or("")
        )));
    }
    Ok(rows)
}

/// Resolves the effective model: the command line wins over the file.
pub fn apply_model(cfg: &mut RunConfig, model: Option<NutrientModel>) {
    if let Some(m) = model {
        cfg.params.model = m.as_str().into();
    }
}
