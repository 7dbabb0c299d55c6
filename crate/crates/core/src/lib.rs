//! Simulator for a membrane-in-the-middle optomechanical cavity that also
//! holds a Bose–Einstein condensate.
//!
//! The membrane couples linearly (ξ₁) and quadratically (ξ₂) to the cavity
//! intensity; the condensate enters through its Bogoliubov mode. The crate
//! covers:
//!
//! * [`meanfield`]: classical mean-field trajectories, full and adiabatic;
//! * [`steadystate`]: coexisting steady states and their stability;
//! * [`fluctuations`]: stationary covariance matrix, quadrature squeezing in
//!   dB and membrane–condensate logarithmic negativity, optionally with
//!   squeezed-vacuum injection;
//! * [`config`] and [`cli`]: parameter files and the `optomech` binary.
//!
//! ```
//! use optomech::{find_branches, Model, SystemParams};
//!
//! let params = SystemParams::reference_defaults().with_delta_c_ratio(80.0);
//! let model = Model::new(params).unwrap();
//! let branches = find_branches(&model).unwrap();
//! assert_eq!(branches.len(), 3);
//! ```

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod fluctuations;
pub mod meanfield;
pub mod model;
pub mod ode;
pub mod output;
pub mod params;
pub mod stability;
pub mod state;
pub mod steadystate;
pub mod tolerances;

pub use error::{ConfigError, NumericalError};
pub use fluctuations::{
    integrate_cm, logarithmic_negativity, observables_at, solve_lyapunov, squeezing_db, CovarianceMatrix,
    FluctuationObservables, Mode,
};
pub use meanfield::{
    effective_frequencies, integrate, rhs_adiabatic, rhs_full, Dynamics, Trajectory, TrajectoryConfig,
};
pub use model::{Linearization, Model, ModelError};
pub use params::{derive_params, DConvention, DerivedParams, SystemParams};
pub use stability::{classify_stability, StabilityVerdict};
pub use state::MeanFieldState;
pub use steadystate::{
    closed_form_displacements, find_branches, sweep_detuning, BranchPoint, BranchTable, ScanOptions,
};
