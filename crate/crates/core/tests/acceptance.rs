//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tumorwave::analytic::{self, StepLaws};
use tumorwave::general::{self, mollified_reference};
use tumorwave::pde::{self, Grid1D, SimConfig, SimState, TransportBoundary};
use tumorwave::{ConsumptionSpec, Error, GrowthSpec, NutrientModel, WaveParameters};

const GOLDEN_R_VITRO: f64 = 0.541_934_863_149_202_6;
const SPEED_FACTOR: f64 = 9.115_214_431_215_892;

type Outcome = Result<String, String>;

fn step_params(c_b: f64, c_bar: f64, model: NutrientModel) -> WaveParameters {
    WaveParameters::new(
        c_b,
        GrowthSpec::step(21.0, 30.0, c_bar).unwrap(),
        ConsumptionSpec::step(2.0, 0.5).unwrap(),
        50.0,
        model,
    )
    .unwrap()
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn analytic_in_vitro() -> Outcome {
    let params = WaveParameters::reference(NutrientModel::InVitro);
    // Warm the code path once, then time the solve proper.
    let _ = analytic::solve_r_sigma(&params);
    let start = Instant::now();
    let (r, sigma) = analytic::solve_r_sigma(&params).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let laws = StepLaws::from_params(&params).unwrap();
    let f = analytic::invitro_residual(r, &laws).abs();
    let speed = r * (1530f64.sqrt() - 30.0);
    check(f <= 1e-10, format!("|F(R)| = {f:e}"))?;
    check((sigma / speed - 1.0).abs() <= 1e-9, format!("sigma {sigma} vs R(sqrt(1530)-30) {speed}"))?;
    check((r - GOLDEN_R_VITRO).abs() <= 1e-12, format!("R = {r} vs golden {GOLDEN_R_VITRO}"))?;
    check(elapsed < Duration::from_millis(10), format!("took {elapsed:?}"))?;
    let wave = analytic::solve(&params).map_err(|e| e.to_string())?;
    check((wave.sigma - SPEED_FACTOR * wave.r).abs() <= 1e-12 * wave.sigma, "wave speed factor")?;
    Ok(format!("R = {r:.15}, sigma = {sigma:.12}, |F(R)| = {f:.1e}, {elapsed:?}"))
}

fn analytic_in_vivo() -> Outcome {
    let vivo = analytic::solve(&WaveParameters::reference(NutrientModel::InVivo)).map_err(|e| e.to_string())?;
    match analytic::solve(&step_params(1.0, 0.6, NutrientModel::InVivo)) {
        Err(Error::NoWave(_)) => {}
        other => return Err(format!("c_bar = 0.6 in vivo should have no wave, got {other:?}")),
    }
    let mut worst: f64 = f64::NEG_INFINITY;
    for i in 1..=10 {
        let c_bar = 0.5 * i as f64 / 11.0;
        let (rv, sv) = analytic::solve_r_sigma(&step_params(1.0, c_bar, NutrientModel::InVivo)).map_err(|e| e.to_string())?;
        let (rt, st) = analytic::solve_r_sigma(&step_params(1.0, c_bar, NutrientModel::InVitro)).map_err(|e| e.to_string())?;
        check(rv <= rt + 1e-12 && sv <= st + 1e-12, format!("ordering broken at c_bar = {c_bar}: R {rv} vs {rt}"))?;
        worst = worst.max(rv - rt);
    }
    Ok(format!("R_vivo = {:.12}, sigma_vivo = {:.10}; NoWave at c_bar = 0.6; max(R_vivo - R_vitro) = {worst:.3e}", vivo.r, vivo.sigma))
}

fn monotonicity() -> Outcome {
    let c_bs: Vec<f64> = (0..5).map(|i| 1.0 + 0.25 * i as f64).collect();
    let c_bars: Vec<f64> = (0..5).map(|i| 0.2 + 0.0625 * i as f64).collect();
    let mut checked = 0;
    for model in [NutrientModel::InVitro, NutrientModel::InVivo] {
        let mut table = vec![vec![(0.0, 0.0); 5]; 5];
        for (i, c_b) in c_bs.iter().enumerate() {
            for (j, c_bar) in c_bars.iter().enumerate() {
                table[i][j] = analytic::solve_r_sigma(&step_params(*c_b, *c_bar, model)).map_err(|e| e.to_string())?;
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                if i + 1 < 5 {
                    let (a, b) = (table[i][j], table[i + 1][j]);
                    check(b.0 >= a.0 && b.1 >= a.1, format!("{model}: not nondecreasing in c_B at ({i}, {j})"))?;
                    checked += 1;
                }
                if j + 1 < 5 {
                    let (a, b) = (table[i][j], table[i][j + 1]);
                    check(b.0 <= a.0 && b.1 <= a.1, format!("{model}: not nonincreasing in c_bar at ({i}, {j})"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} neighbour pairs on 5x5 (c_B, c_bar) grids, both models"))
}

fn general_equivalence() -> Outcome {
    let mut parts = Vec::new();
    for model in [NutrientModel::InVitro, NutrientModel::InVivo] {
        let step = WaveParameters::reference(model);
        let exact = analytic::solve(&step).map_err(|e| e.to_string())?;
        let smooth = mollified_reference(&step, 1e-3).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let sol = general::solve_sigma(&smooth).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let rel = (sol.wave.sigma / exact.sigma - 1.0).abs();
        check(rel <= 1e-3, format!("{model}: sigma {} vs {} (rel {rel:.2e})", sol.wave.sigma, exact.sigma))?;
        check((sol.wave.a - 1.0).abs() <= 1e-3, format!("{model}: A = {}", sol.wave.a))?;
        check(elapsed < Duration::from_secs(5), format!("{model}: took {elapsed:?}"))?;
        parts.push(format!("{model}: rel gap {rel:.1e}, A = {:.9}, {elapsed:.2?}", sol.wave.a));
    }
    Ok(parts.join("; "))
}

fn slope_bounds() -> Outcome {
    let params = WaveParameters::new(
        1.0,
        GrowthSpec::mollified_step(21.0, 30.0, 0.6, 1e-3).unwrap(),
        ConsumptionSpec::linear(2.0).unwrap(),
        50.0,
        NutrientModel::InVitro,
    )
    .unwrap();
    let mut prev = 0.0;
    let mut values = Vec::new();
    for sigma in [0.1, 1.0, 10.0] {
        let a = general::shoot_a(sigma, &params).map_err(|e| e.to_string())?.a;
        check(a > 0.0 && a <= 2f64.sqrt(), format!("A({sigma}) = {a} outside (0, sqrt 2]"))?;
        check(a <= sigma * 2.0 / 30.0, format!("A({sigma}) = {a} above sigma*2/30"))?;
        check(a >= prev, format!("A not nondecreasing at sigma = {sigma}"))?;
        prev = a;
        values.push(format!("A({sigma}) = {a:.6}"));
    }
    let small = general::shoot_a(0.001, &params).map_err(|e| e.to_string())?.a;
    check(small < 0.01, format!("A(0.001) = {small}"))?;
    values.push(format!("A(0.001) = {small:.2e}"));
    Ok(values.join(", "))
}

fn profile_invariants() -> Outcome {
    let mut parts = Vec::new();
    for model in [NutrientModel::InVitro, NutrientModel::InVivo] {
        let params = WaveParameters::reference(model);
        let w = analytic::solve(&params).map_err(|e| e.to_string())?;
        let pr = &w.profile;
        check(pr.len() == 4096, format!("{} samples", pr.len()))?;
        check(pr.c.windows(2).all(|q| q[1] >= q[0]), format!("{model}: c not monotone"))?;
        check(pr.p.iter().all(|p| *p >= 0.0), format!("{model}: negative pressure"))?;
        let i0 = pr.index_of(0.0).ok_or("x = 0 not sampled")?;
        let ir = pr.index_of(w.r).ok_or("x = R not sampled")?;
        let i1 = pr.index_of(w.x1).ok_or("x1 not sampled")?;
        check(pr.p[i0] == 0.0 && pr.p[ir] == 0.0, format!("{model}: p(0) = {}, p(R) = {}", pr.p[i0], pr.p[ir]))?;
        let dx = pr.x[ir] - pr.x[ir - 1];
        let slope = (pr.p[ir] - pr.p[ir - 1]) / dx;
        check((slope + w.sigma).abs() <= 2.0 * dx * 21.0, format!("{model}: p'(R-) = {slope} vs -sigma = {}", -w.sigma))?;
        check((pr.c[i1] - params.c_bar()).abs() <= 1e-9, format!("{model}: c(x1) = {}", pr.c[i1]))?;
        let worst = pr
            .x
            .iter()
            .zip(&pr.n)
            .filter(|(x, _)| **x < 0.0)
            .map(|(x, n)| {
                let e = (30.0 * x / w.sigma).exp();
                (n - e).abs() / e
            })
            .fold(0.0, f64::max);
        check(worst <= 1e-12, format!("{model}: tail density rel error {worst:e}"))?;
        parts.push(format!("{model}: p'(R-) + sigma = {:.1e}", slope + w.sigma));
    }
    Ok(parts.join("; "))
}

struct PdeRun {
    sigma_analytic: f64,
    speed: f64,
    c_bounds_ok: bool,
    c_extremes: (f64, f64),
    elapsed: Duration,
    structure: Result<String, String>,
}

fn pde_run() -> Result<PdeRun, String> {
    let params = WaveParameters::reference(NutrientModel::InVitro);
    let sigma_analytic = analytic::solve(&params).map_err(|e| e.to_string())?.sigma;
    let cfg = SimConfig::large_domain(params.clone());
    let c_b = params.c_b;
    let mut c_bounds_ok = true;
    let start = Instant::now();
    let out = pde::run_simulation_observed(&cfg, |s: &SimState| {
        if s.c.iter().any(|c| !(*c >= 0.0 && *c <= c_b)) {
            c_bounds_ok = false;
        }
    })
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let speed = out.trace.fitted_speed.ok_or("no fitted speed")?;
    let structure = plateau_structure(&out.final_state, &cfg.grid, params.gamma, sigma_analytic);
    Ok(PdeRun { sigma_analytic, speed, c_bounds_ok, c_extremes: (out.c_min, out.c_max), elapsed, structure })
}

/// Right-moving half: plateau within 2 % of its peak, monotone tail behind
/// it, small pressure slope at the inner plateau edge.
fn plateau_structure(state: &SimState, grid: &Grid1D, gamma: f64, sigma: f64) -> Result<String, String> {
    let n = &state.n;
    let mid = n.len() / 2;
    let (peak_i, peak) = n[mid..].iter().enumerate().fold((0, 0.0f64), |acc, (i, v)| if *v > acc.1 { (i + mid, *v) } else { acc });
    check(peak >= 1.0 - 5.0 / gamma && peak <= 1.0 + 5.0 / gamma, format!("plateau max n = {peak}"))?;
    let mut inner = peak_i;
    while inner > mid && n[inner - 1] >= 0.98 * peak {
        inner -= 1;
    }
    let mut outer = peak_i;
    while outer + 1 < n.len() && n[outer + 1] >= 0.98 * peak {
        outer += 1;
    }
    check(outer > inner, "plateau is a single cell")?;
    check(n[mid..inner].windows(2).all(|q| q[1] >= q[0]), "tail behind the plateau is not monotone")?;
    // The transition cell is the last one behind the plateau that is still
    // below the compressibility band 1 - 5/γ; the pressure slope there is the
    // discrete counterpart of p'(0+) = 0.
    let mut edge = peak_i;
    while edge > mid && n[edge] >= 1.0 - 5.0 / gamma {
        edge -= 1;
    }
    let p = |i: usize| n[i].powf(gamma);
    let dp = (p(edge + 1) - p(edge - 1)) / (2.0 * grid.dx);
    check(dp.abs() <= 0.1 * sigma, format!("p' at the inner plateau edge = {dp}"))?;
    Ok(format!(
        "plateau [{:.2}, {:.2}], max n = {peak:.4}, p' at inner edge {:.2} = {dp:.3}",
        grid.center(inner),
        grid.center(outer),
        grid.center(edge)
    ))
}

fn pde_cross_validation(run: &Result<PdeRun, String>) -> Outcome {
    let run = run.as_ref().map_err(|e| e.clone())?;
    let gap = run.speed / run.sigma_analytic - 1.0;
    check((-0.05..=0.20).contains(&gap), format!("fitted {} vs analytic {} (gap {:+.2}%)", run.speed, run.sigma_analytic, 100.0 * gap))?;
    check(run.elapsed < Duration::from_secs(120), format!("took {:?}", run.elapsed))?;
    let structure = run.structure.clone()?;
    Ok(format!(
        "fitted {:.4} vs analytic {:.4} (gap {:+.2}%), {structure}, {:.1?}",
        run.speed,
        run.sigma_analytic,
        100.0 * gap,
        run.elapsed
    ))
}

fn nutrient_convergence() -> Outcome {
    let params = WaveParameters::reference(NutrientModel::InVitro);
    let l = 5.0;
    let k = 2f64.sqrt();
    let mut errors = Vec::new();
    for cells in [250, 500, 1000] {
        let grid = Grid1D::new(-l, l, cells).unwrap();
        let mut s = SimState::new(vec![1.0; cells], params.c_b, 1e-5);
        s.h = vec![true; cells];
        let c = pde::solve_nutrient(&s, &params, grid.dx).map_err(|e| e.to_string())?;
        let err = grid
            .centers()
            .iter()
            .zip(&c)
            .map(|(x, v)| (v - (k * x).cosh() / (k * l).cosh()).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    let orders: Vec<f64> = errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect();
    for o in &orders {
        check((o - 2.0).abs() <= 0.3, format!("observed order {o:.3}"))?;
    }
    let errs: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
    Ok(format!("Linf errors [{}] at N = 250, 500, 1000; orders {orders:.3?}", errs.join(", ")))
}

fn conservation(run: &Result<PdeRun, String>) -> Outcome {
    let grid = Grid1D::new(-5.0, 5.0, 500).unwrap();
    let mut s = SimState::new(pde::plateau(&grid, 1.0, 1.0), 1.0, 1e-5);
    // A lumpy start so the flux is far from trivial.
    for (i, v) in s.n.iter_mut().enumerate() {
        *v *= 1.0 + 0.05 * (i as f64 * 0.7).sin();
    }
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let before = s.mass(grid.dx);
        let dt = pde::stable_dt(&s.n, 50.0, grid.dx);
        pde::transport_substep(&mut s.n, 50.0, grid.dx, dt, TransportBoundary::ZeroFlux).map_err(|e| e.to_string())?;
        worst = worst.max((s.mass(grid.dx) - before).abs() / before);
    }
    check(worst <= 1e-12, format!("relative mass drift {worst:e} per step"))?;
    let run = run.as_ref().map_err(|e| e.clone())?;
    check(run.c_bounds_ok, format!("nutrient left [0, c_B]: extremes {:?}", run.c_extremes))?;
    Ok(format!("max mass drift {worst:.1e}/step; c in [{:.3e}, {:.6}] over the whole PDE run", run.c_extremes.0, run.c_extremes.1))
}

fn main() -> ExitCode {
    let run = pde_run();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "analytic in vitro wave", analytic_in_vitro()),
        (2, "analytic in vivo wave", analytic_in_vivo()),
        (3, "monotonicity in c_B and c_bar", monotonicity()),
        (4, "general solver vs closed form", general_equivalence()),
        (5, "tail slope bounds", slope_bounds()),
        (6, "wave profile invariants", profile_invariants()),
        (7, "PDE front speed", pde_cross_validation(&run)),
        (8, "nutrient solver convergence", nutrient_convergence()),
        (9, "conservation and nutrient bounds", conservation(&run)),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {id} [{name}]: PASS - {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} [{name}]: FAIL - {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
