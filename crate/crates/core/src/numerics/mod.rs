//! Numerical kernels shared by the wave solvers and the simulation.

pub mod bracket;
pub mod ode;
pub mod quad;
pub mod shooting;
pub mod tridiag;

pub use bracket::{bisect, grow_bracket, Bracket};
pub use quad::{quad01, quad01_split, Weight};
pub use shooting::{integrate_shooting, integrate_shooting_with, ShootOutcome, ShootingState};
pub use tridiag::tridiag_solve;
