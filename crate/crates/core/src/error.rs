use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is out of its admissible range.
    InvalidParams(String),
    /// The existence hypothesis for a traveling wave fails.
    NoWave(String),
    /// The bracket handed to a root finder does not change sign.
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    MaxIterExceeded { iterations: usize },
    /// Thomas elimination met a pivot below `1e-14` in magnitude.
    SingularPivot { row: usize, pivot: f64 },
    /// The adaptive integrator could not make progress.
    StepSizeUnderflow { t: f64, h: f64 },
    /// Shooting needs a C¹ consumption law; step laws go through the analytic solver.
    StepPsiUnsupported,
    /// Same for the growth law.
    StepGrowthUnsupported,
    /// The upper shooting slope did not classify as Type II.
    BracketFailure { slope: f64 },
    CflViolation { dt: f64, dt_max: f64 },
    InsufficientSamples { found: usize, needed: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::NoWave(msg) => write!(f, "no traveling wave: {msg}"),
            Error::NoSignChange { lo, hi, f_lo, f_hi } => write!(
                f,
                "no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})"
            ),
            Error::MaxIterExceeded { iterations } => {
                write!(f, "root finder did not converge in {iterations} iterations")
            }
            Error::SingularPivot { row, pivot } => {
                write!(f, "singular pivot {pivot:e} at row {row}")
            }
            Error::StepSizeUnderflow { t, h } => {
                write!(f, "integrator step size underflow (h = {h:e} at t = {t})")
            }
            Error::StepPsiUnsupported => write!(
                f,
                "step consumption law is not supported by the shooting solver, use the analytic solver"
            ),
            Error::StepGrowthUnsupported => write!(
                f,
                "step growth law is not supported by the general solver, use the analytic solver"
            ),
            Error::BracketFailure { slope } => {
                write!(f, "upper shooting slope {slope} did not classify as Type II")
            }
            Error::CflViolation { dt, dt_max } => {
                write!(f, "time step {dt:e} exceeds the stable step {dt_max:e}")
            }
            Error::InsufficientSamples { found, needed } => {
                write!(f, "only {found} samples in the fit window, need {needed}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for errors that mean "no admissible wave for these parameters",
    /// as opposed to a numerical failure.
    pub fn is_no_wave(&self) -> bool {
        matches!(self, Error::InvalidParams(_) | Error::NoWave(_))
    }
}
