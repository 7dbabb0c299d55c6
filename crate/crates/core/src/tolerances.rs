//! Numerical tolerances used across the crate, collected in one place.

/// Maximum `|AV + VAᵀ + D|_max / |D|_max` accepted from the Lyapunov solver.
pub const LYAPUNOV_RESIDUAL: f64 = 1e-8;

/// Maximum `|V - Vᵀ|_max / |V|_max` for a covariance matrix.
pub const COVARIANCE_SYMMETRY: f64 = 1e-10;

/// Slack below ½ tolerated for symplectic eigenvalues of a physical state.
pub const SYMPLECTIC_SLACK: f64 = 1e-9;

/// Negative radicands in the symplectic-eigenvalue formula smaller than this
/// (relative to `Σ²`) are rounding noise and clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-10;

/// Relative residual bound for steady-state roots: `|f(I)| ≤ tol · η²`.
pub const STEADY_STATE_RESIDUAL: f64 = 1e-8;

/// Roots closer than `tol · η²/κ²` are treated as one.
pub const ROOT_DEDUP: f64 = 1e-9;

/// Routh first-column entries below `tol · scale` are treated as zero.
pub const ROUTH_ZERO: f64 = 1e-12;

/// `dt · |λ_max|` must stay below this for the explicit fourth-order stepper.
pub const RK4_STABILITY_LIMIT: f64 = 2.5;

/// Covariance integration stops when `|dV/dt|_max < tol · |D|_max`.
pub const CM_STATIONARITY: f64 = 1e-10;

/// Exponent above which a Bose occupation is clamped to zero.
pub const BOSE_EXPONENT_CLAMP: f64 = 700.0;

/// Squeezing-constraint check `|M_s|² = N_s(N_s+1)`, relative.
pub const PURE_SQUEEZING: f64 = 1e-12;
