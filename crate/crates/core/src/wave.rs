//! Traveling-wave record shared by the analytic and general solvers.

use crate::model::NutrientModel;
use alloc::vec::Vec;
// Unused whenever std is in the build and its inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Analytic,
    General,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Analytic => "analytic",
            SolverKind::General => "general",
        }
    }
}

/// Sampled wave profiles in the moving frame. The healthy region is
/// `x > R`, the proliferative rim `[0, R]`, the necrotic tail `x < 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Profile {
    pub x: Vec<f64>,
    pub n: Vec<f64>,
    pub c: Vec<f64>,
    pub p: Vec<f64>,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Index of the sample at exactly `x`, if present.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.x.iter().position(|v| *v == x)
    }
}

#[derive(Debug, Clone)]
pub struct TravelingWave {
    pub model: NutrientModel,
    pub solver: SolverKind,
    /// Speed of the wave.
    pub sigma: f64,
    /// Width of the proliferative rim.
    pub r: f64,
    /// Point of the rim where `c = c̄`.
    pub x1: f64,
    /// `c'(R)/√ψ(1)` in vitro, the coefficient of `e^{-√ψ(1)(x-R)}` in vivo.
    pub c_r_prime: f64,
    /// Nutrient and its slope at the necrotic transition `x = 0`.
    pub c0: f64,
    pub c0_prime: f64,
    /// `c'(0)/c(0)`.
    pub a: f64,
    /// `√(g₋/(g₊+g₋))` for step growth laws.
    pub alpha: Option<f64>,
    /// Upper bound on the rim width from the envelope equation.
    pub r_b: Option<f64>,
    pub residuals: Residuals,
    pub profile: Profile,
}

/// Solver residuals kept with the wave for later audits. Zero where the
/// quantity is exact by construction.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Residuals {
    /// Matching equation for `R` at the returned root.
    pub matching: f64,
    /// `|σ - R ∫₀¹ G(γ(R, s)) ds|` at the returned speed.
    pub fixed_point: f64,
    /// Terminal `ũ` of the last Type II shot.
    pub shooting: f64,
    /// `|c'(0⁻)/c(0⁻) - A|` from the sampled necrotic tail.
    pub tail_slope: f64,
}

/// Grid layout used by the profile builders: `tail` points on
/// `[x_min, 0)` clustered towards 0, `rim` uniform points on `[0, R]`
/// (both ends included) and `healthy` uniform points on `(R, R + 5]`.
/// `x1` is inserted into the rim, so the total is
/// `tail + rim + 1 + healthy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileGrid {
    pub tail: usize,
    pub rim: usize,
    pub healthy: usize,
}

impl Default for ProfileGrid {
    /// 4096 samples over `[-5R - 5, R + 5]`.
    fn default() -> Self {
        ProfileGrid { tail: 1536, rim: 2047, healthy: 512 }
    }
}

impl ProfileGrid {
    pub fn total(&self) -> usize {
        self.tail + self.rim + 1 + self.healthy
    }

    /// Sample points for a rim `[0, r]` with interior point `x1`.
    pub fn points(&self, r: f64, x1: f64) -> Vec<f64> {
        let x_min = -5.0 * r - 5.0;
        let x_max = r + 5.0;
        let mut xs = Vec::with_capacity(self.total());
        // Geometric clustering towards 0: the density tail e^{g₋x/σ} varies
        // fastest right behind the rim.
        let beta = 6.0;
        let scale = (beta.exp() - 1.0).recip();
        for j in (1..=self.tail).rev() {
            let u = j as f64 / self.tail as f64;
            xs.push(x_min * ((beta * u).exp() - 1.0) * scale);
        }
        let rim = self.rim.max(2);
        let mut inserted = false;
        for i in 0..rim {
            let x = if i + 1 == rim { r } else { r * i as f64 / (rim - 1) as f64 };
            if !inserted && x1 <= x {
                if x1 < x {
                    xs.push(x1);
                }
                inserted = true;
            }
            xs.push(x);
        }
        if !inserted {
            xs.push(x1);
        }
        if xs.len() < self.tail + rim + 1 {
            // x1 coincided with a rim node; keep the count fixed.
            xs.push(r + 0.5 * (x_max - r) / (self.healthy as f64 + 1.0));
        }
        for j in 1..=self.healthy {
            xs.push(r + (x_max - r) * j as f64 / self.healthy as f64);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        xs
    }
}
