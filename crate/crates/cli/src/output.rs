//! CSV and JSON artifacts.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tumorwave::general::GeneralOptions;
use tumorwave::pde::{FrontTrace, SimState};
use tumorwave::{SolverKind, TravelingWave, WaveParameters};

use crate::error::CliError;

/// Shortest text that parses back to the same `f64`; exponent form only
/// where plain decimals would get long.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Writes equally long columns under `headers`.
pub fn write_columns(path: &Path, headers: &[&str], columns: &[&[f64]]) -> Result<(), CliError> {
    assert_eq!(headers.len(), columns.len());
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != rows) {
        return Err(CliError::Config("columns of different lengths".into()));
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(headers)?;
    let mut record = Vec::with_capacity(columns.len());
    for i in 0..rows {
        record.clear();
        record.extend(columns.iter().map(|c| fmt_f64(c[i])));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric CSV back as (headers, columns).
pub fn read_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let headers: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for rec in r.records() {
        let rec = rec?;
        for (col, field) in columns.iter_mut().zip(rec.iter()) {
            let v = field
                .trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("bad number '{field}' in {}: {e}", path.display())))?;
            col.push(v);
        }
    }
    Ok((headers, columns))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

pub fn write_profile(path: &Path, wave: &TravelingWave) -> Result<(), CliError> {
    let p = &wave.profile;
    write_columns(path, &["x", "n", "c", "p"], &[&p.x, &p.n, &p.c, &p.p])
}

pub fn write_snapshot(path: &Path, x: &[f64], state: &SimState) -> Result<(), CliError> {
    let h: Vec<f64> = state.h.iter().map(|v| if *v { 1.0 } else { 0.0 }).collect();
    write_columns(path, &["x", "n", "c", "p", "H"], &[x, &state.n, &state.c, &state.p, &h])
}

pub fn write_trace(path: &Path, trace: &FrontTrace) -> Result<(), CliError> {
    let t: Vec<f64> = trace.samples.iter().map(|s| s.0).collect();
    let x: Vec<f64> = trace.samples.iter().map(|s| s.1).collect();
    write_columns(path, &["t", "x_front"], &[&t, &x])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub matching: f64,
    pub fixed_point: f64,
    pub shooting: f64,
    pub tail_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSummary {
    /// Target of the scalar root solve for `R` (relative to the bracket).
    pub root_rel: f64,
    pub slope_bracket: Option<f64>,
    pub fixed_point_rel: Option<f64>,
    pub shooting_cutoff: Option<f64>,
    pub quadrature_panels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveSummary {
    pub model: String,
    pub solver: String,
    pub c_b: f64,
    pub c_bar: f64,
    pub growth: String,
    pub consumption: String,
    pub sigma: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub x1: f64,
    #[serde(rename = "c_R_prime")]
    pub c_r_prime: f64,
    pub c0: f64,
    pub c0_prime: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: Option<f64>,
    #[serde(rename = "R_b")]
    pub r_b: Option<f64>,
    /// Every speed found by the general solver's scan.
    pub roots: Vec<f64>,
    pub residuals: ResidualSummary,
    pub tolerances: ToleranceSummary,
    pub samples: usize,
}

impl WaveSummary {
    pub fn new(params: &WaveParameters, wave: &TravelingWave, roots: &[f64]) -> Self {
        let general = wave.solver == SolverKind::General;
        let opts = GeneralOptions::default();
        WaveSummary {
            model: wave.model.as_str().into(),
            solver: wave.solver.as_str().into(),
            c_b: params.c_b,
            c_bar: params.c_bar(),
            growth: params.growth.label(),
            consumption: params.consumption.label(),
            sigma: wave.sigma,
            r: wave.r,
            x1: wave.x1,
            c_r_prime: wave.c_r_prime,
            c0: wave.c0,
            c0_prime: wave.c0_prime,
            a: wave.a,
            alpha: wave.alpha,
            r_b: wave.r_b,
            roots: roots.to_vec(),
            residuals: ResidualSummary {
                matching: wave.residuals.matching,
                fixed_point: wave.residuals.fixed_point,
                shooting: wave.residuals.shooting,
                tail_slope: wave.residuals.tail_slope,
            },
            tolerances: ToleranceSummary {
                root_rel: if general { 1e-14 } else { f64::EPSILON },
                slope_bracket: general.then_some(opts.slope_tol),
                fixed_point_rel: general.then_some(opts.fixed_point_tol),
                shooting_cutoff: general.then_some(opts.delta),
                quadrature_panels: general.then_some(opts.panels),
            },
            samples: wave.profile.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub file: String,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub model: String,
    pub gamma: f64,
    pub c_b: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub t_end: f64,
    pub epsilon: f64,
    pub steps: usize,
    pub transport_substeps: usize,
    pub snapshots: Vec<SnapshotEntry>,
    pub front_samples: usize,
    pub final_front: Option<f64>,
    pub fitted_speed: Option<f64>,
    pub fit_window: Option<[f64; 2]>,
    pub fit_residual: Option<f64>,
    pub c_min: f64,
    pub c_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOrdering {
    pub sigma_vitro: f64,
    pub sigma_vivo: f64,
    pub r_vitro: f64,
    pub r_vivo: f64,
    /// `σ_vivo <= σ_vitro` and `R_vivo <= R_vitro`.
    pub ordering_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub model: String,
    pub gamma: f64,
    pub c_b: f64,
    pub c_bar: f64,
    pub sigma_analytic: f64,
    pub sigma_numeric: f64,
    pub relative_gap: f64,
    pub band: [f64; 2],
    pub pass: bool,
    pub fit_window: [f64; 2],
    pub fit_residual: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub ordering: Option<ModelOrdering>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub c_b: f64,
    pub c_bar: f64,
    /// `ok`, `no_wave` or `error`.
    pub status: String,
    pub sigma: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub dir: Option<String>,
    pub message: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formatting_round_trips() {
        for v in [0.0, -0.0, 1.0, 0.1, 1e-300, 4.9e-324, -2.5e17, 123456.789, f64::MAX, 1e-4, 9.99e-5] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits(), "{v}");
        }
        assert_eq!(fmt_f64(1e-250), "1e-250");
        assert_eq!(fmt_f64(0.5), "0.5");
    }

    #[test]
    fn summary_json_round_trip() {
        let params = WaveParameters::reference(tumorwave::NutrientModel::InVitro);
        let wave = tumorwave::analytic::solve(&params).unwrap();
        let s = WaveSummary::new(&params, &wave, &[wave.sigma]);
        let text = serde_json::to_string(&s).unwrap();
        let back: WaveSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(text.contains("\"R\":") && text.contains("\"c_R_prime\":") && text.contains("\"A\":"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn csv_round_trip(rows in proptest::collection::vec((any::<f64>(), -1e3f64..1e3, 0.0f64..1e-200), 0..40)) {
            let rows: Vec<_> = rows.into_iter().filter(|r| r.0.is_finite()).collect();
            let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let b: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let c: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("t.csv");
            write_columns(&path, &["a", "b", "c"], &[&a, &b, &c]).unwrap();
            let (h, cols) = read_columns(&path).unwrap();
            prop_assert_eq!(h, vec!["a", "b", "c"]);
            for (orig, back) in [&a, &b, &c].iter().zip(&cols) {
                prop_assert_eq!(orig.len(), back.len());
                for (x, y) in orig.iter().zip(back) {
                    // Exact in practice; the contract is 15 significant digits.
                    prop_assert!(x == y || ((x - y) / x).abs() < 1e-15);
                }
            }
        }
    }
}
