//! Traveling waves for the Hele-Shaw tumor growth model with nutrients.
//!
//! The crate is split along the way the waves are built:
//!
//! * [`model`] holds the growth law `G`, the consumption law `ψ`, the
//!   pressure law `p = n^γ` and the parameter bundle shared by every solver.
//! * [`numerics`] has the four kernels everything else leans on: bracketed
//!   bisection, composite Gauss quadrature on `[0, 1]`, the Thomas solver and
//!   the shooting integrator for the necrotic-tail nutrient problem.
//! * [`analytic`] solves the step-nonlinearity case in closed form (root of an
//!   explicit scalar function, then explicit profiles).
//! * [`general`] handles C¹ nonlinearities by shooting for `A(σ)`, solving for
//!   the rim length `R_σ` and closing the outer fixed point `σ = -p'(R)`.
//! * [`pde`] is a 1D time-splitting simulation of the compressible model,
//!   used to check the computed speeds against an actual front.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is how NaN gets rejected along with the bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod general;
pub mod model;
pub mod numerics;
pub mod pde;
pub mod wave;

pub use error::{Error, Result};
pub use model::{pressure, ConsumptionSpec, GrowthSpec, NutrientModel, WaveParameters};
pub use wave::{Profile, ProfileGrid, Residuals, SolverKind, TravelingWave};
