use thiserror::Error;

use crate::state::MeanFieldState;

/// Errors raised while loading or validating a parameter set.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("unknown config key `{key}`")]
    UnknownKey { key: String },
    #[error("config keys `{first}` and `{second}` set the same quantity; use only one")]
    Conflict { first: String, second: String },
    #[error("config key `{key}` has the wrong type: expected {expected}")]
    WrongType { key: String, expected: &'static str },
    #[error("could not parse config: {0}")]
    Parse(String),
    #[error("could not read config `{path}`: {reason}")]
    Io { path: String, reason: String },
}

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericalError {
    #[error("non-finite derived quantity `{0}`")]
    NonFiniteDerived(&'static str),
    #[error("non-finite derivative at t = {t:e} s, state {state:?}")]
    NonFiniteDerivative { t: f64, state: MeanFieldState },
    #[error("explicit step unstable: dt * |lambda_max| = {product:.3} exceeds {limit}")]
    StepTooLarge { product: f64, limit: f64 },
    #[error("invalid trajectory configuration: {0}")]
    InvalidTrajectory(String),
    #[error("softening pole: omega_m + 2 xi2 I = 0 at I = {photon_number:e}")]
    SofteningPole { photon_number: f64 },
    #[error("steady-state scan found no root, which contradicts f(0) < 0 < f(inf)")]
    NoRootFound,
    #[error("drift matrix is not strictly stable (max Re lambda = {max_real_part:e}); no stationary state")]
    NoStationaryState { max_real_part: f64 },
    #[error("diffusion matrix is not symmetric")]
    AsymmetricDiffusion,
    #[error("singular linear system in Lyapunov solve")]
    SingularSystem,
    #[error("covariance integration did not converge within t_end = {t_end:e}")]
    NoConvergence { t_end: f64 },
    #[error("non-positive variance {0:e}")]
    NonPositiveVariance(f64),
    #[error("unphysical reduced covariance matrix: Sigma^2 - 4 det V = {0:e}")]
    UnphysicalReduction(f64),
    #[error("branch point is unstable; fluctuations are only defined on stable points")]
    UnstablePoint,
}
