//! Classical mean-field dynamics, in the full six-variable form and in the
//! adiabatic form where the cavity field is slaved to the two oscillators.
//!
//! The mechanical position obeys `dq̄/dt = +ω_m p̄`, the sign that makes the
//! mean-field Jacobian coincide with the drift matrix.
//!
//! Integration runs in the scaled time `τ = κt` so step sizes and rates are
//! O(1) numbers; inputs and outputs stay in seconds.

use serde::Serialize;

use crate::error::NumericalError;
use crate::model::Model;
use crate::ode::{rk4_step, Vector};
use crate::state::MeanFieldState;
use crate::tolerances::RK4_STABILITY_LIMIT;

/// Which set of mean-field equations to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dynamics {
    Full,
    Adiabatic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryConfig {
    pub dynamics: Dynamics,
    /// Final time, seconds.
    pub t_end: f64,
    /// Fixed step, seconds.
    pub dt: f64,
    /// Record every `sample_stride`-th step.
    pub sample_stride: usize,
    pub initial: MeanFieldState,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MeanFieldState>,
    pub photon_numbers: Vec<f64>,
}

impl Trajectory {
    fn push(&mut self, t: f64, state: MeanFieldState) {
        self.times.push(t);
        self.photon_numbers.push(state.photon_number());
        self.states.push(state);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&MeanFieldState> {
        self.states.last()
    }

    pub fn mech_q(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.mech_q).collect()
    }
}

/// Reduced state of the adiabatic model: positions and velocities of the two
/// oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdiabaticState {
    pub mech_q: f64,
    pub mech_q_dot: f64,
    pub bog_q: f64,
    pub bog_q_dot: f64,
}

impl AdiabaticState {
    /// Velocities follow from `q̇ = ω_m p` and `Q̇ = ω_c P − γ_c Q`.
    pub fn from_mean_field(model: &Model, s: &MeanFieldState) -> Self {
        Self {
            mech_q: s.mech_q,
            mech_q_dot: model.params.omega_m * s.mech_p,
            bog_q: s.bog_q,
            bog_q_dot: model.derived.omega_c * s.bog_p - model.params.gamma_c * s.bog_q,
        }
    }

    /// Full phase-space point with the slaved field amplitude.
    pub fn to_mean_field(&self, model: &Model) -> MeanFieldState {
        let (alpha_re, alpha_im) = adiabatic_alpha(model, self.mech_q, self.bog_q);
        MeanFieldState {
            alpha_re,
            alpha_im,
            mech_q: self.mech_q,
            mech_p: self.mech_q_dot / model.params.omega_m,
            bog_q: self.bog_q,
            bog_p: (self.bog_q_dot + model.params.gamma_c * self.bog_q) / model.derived.omega_c,
        }
    }
}

/// Time derivative of the full mean-field equations at `state`, ordered like
/// [`MeanFieldState::to_array`].
pub fn rhs_full(model: &Model, state: &MeanFieldState) -> Result<[f64; 6], NumericalError> {
    let p = &model.params;
    let d = &model.derived;
    let delta = model.effective_detuning(state);
    let intensity = state.photon_number();
    let (a, b) = (state.alpha_re, state.alpha_im);
    let deriv = [
        -p.kappa * a + delta * b - p.eta,
        -delta * a - p.kappa * b,
        p.omega_m * state.mech_p,
        -(p.omega_m + 2.0 * p.xi2 * intensity) * state.mech_q + p.xi1 * intensity - p.gamma_m * state.mech_p,
        d.omega_c * state.bog_p - p.gamma_c * state.bog_q,
        -d.omega_c * state.bog_q - d.zeta * intensity - p.gamma_c * state.bog_p,
    ];
    if deriv.iter().all(|v| v.is_finite()) {
        Ok(deriv)
    } else {
        Err(NumericalError::NonFiniteDerivative {
            t: f64::NAN,
            state: *state,
        })
    }
}

/// Field amplitude slaved to the oscillator positions: `α = −η/(iΔ + κ)`.
pub fn adiabatic_alpha(model: &Model, mech_q: f64, bog_q: f64) -> (f64, f64) {
    let p = &model.params;
    let delta = model.detuning_at(mech_q, bog_q);
    let denom = p.kappa * p.kappa + delta * delta;
    (-p.eta * p.kappa / denom, p.eta * delta / denom)
}

/// `κ > 100·max(γ_m, γ_c)`: the field relaxes much faster than the oscillators.
pub fn adiabatic_regime_holds(model: &Model) -> bool {
    let p = &model.params;
    p.kappa > 100.0 * p.gamma_m.max(p.gamma_c)
}

/// Second-order oscillator equations driven by the slaved field intensity.
/// Returns `(q̇, q̈, Q̇, Q̈)`.
pub fn rhs_adiabatic(model: &Model, s: &AdiabaticState) -> [f64; 4] {
    let p = &model.params;
    let d = &model.derived;
    let (ar, ai) = adiabatic_alpha(model, s.mech_q, s.bog_q);
    let intensity = ar * ar + ai * ai;
    let omega_m_eff_sq = p.omega_m * (p.omega_m + 2.0 * p.xi2 * intensity);
    let omega_c_eff_sq = d.omega_c * d.omega_c + p.gamma_c * p.gamma_c;
    [
        s.mech_q_dot,
        -p.gamma_m * s.mech_q_dot - omega_m_eff_sq * s.mech_q + p.xi1 * p.omega_m * intensity,
        s.bog_q_dot,
        -2.0 * p.gamma_c * s.bog_q_dot - omega_c_eff_sq * s.bog_q - d.zeta * d.omega_c * intensity,
    ]
}

/// Effective mechanical frequency; goes imaginary when the quadratic coupling
/// softens the spring past zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MechanicalFrequency {
    Real(f64),
    /// `ω_m + 2ξ₂I < 0`; holds `sqrt(−ω_m(ω_m + 2ξ₂I))`.
    SofteningInstability(f64),
}

impl MechanicalFrequency {
    pub fn real(self) -> Option<f64> {
        match self {
            MechanicalFrequency::Real(w) => Some(w),
            MechanicalFrequency::SofteningInstability(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveFrequencies {
    pub mechanical: MechanicalFrequency,
    pub bogoliubov: f64,
}

pub fn effective_frequencies(model: &Model, photon_number: f64) -> EffectiveFrequencies {
    let p = &model.params;
    let d = &model.derived;
    let radicand = p.omega_m * (p.omega_m + 2.0 * p.xi2 * photon_number);
    let mechanical = if radicand >= 0.0 {
        MechanicalFrequency::Real(radicand.sqrt())
    } else {
        MechanicalFrequency::SofteningInstability((-radicand).sqrt())
    };
    EffectiveFrequencies {
        mechanical,
        bogoliubov: (d.omega_c * d.omega_c + p.gamma_c * p.gamma_c).sqrt(),
    }
}

/// Largest explicit step that resolves the optical scale, `0.05/(κ + |Δ|)`,
/// evaluated at `state`.
pub fn resolving_step(model: &Model, state: &MeanFieldState) -> f64 {
    0.05 / (model.params.kappa + model.effective_detuning(state).abs())
}

/// Default step for the adiabatic model, `0.25/κ`. Passages through the
/// cavity resonance sweep the slaved intensity on the `1/κ` scale; coarser
/// steps visibly change the trajectory after the first passage.
pub fn adiabatic_step(model: &Model) -> f64 {
    0.25 / model.params.kappa
}

pub fn integrate(model: &Model, cfg: &TrajectoryConfig) -> Result<Trajectory, NumericalError> {
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return Err(NumericalError::InvalidTrajectory(format!(
            "dt must be > 0, got {}",
            cfg.dt
        )));
    }
    if !(cfg.t_end >= cfg.dt && cfg.t_end.is_finite()) {
        return Err(NumericalError::InvalidTrajectory(format!(
            "t_end must be >= dt, got t_end = {}, dt = {}",
            cfg.t_end, cfg.dt
        )));
    }
    if cfg.sample_stride == 0 {
        return Err(NumericalError::InvalidTrajectory(
            "sample_stride must be positive".into(),
        ));
    }
    if !cfg.initial.is_finite() {
        return Err(NumericalError::InvalidTrajectory("initial state is not finite".into()));
    }
    match cfg.dynamics {
        Dynamics::Full => integrate_full(model, cfg),
        Dynamics::Adiabatic => integrate_adiabatic(model, cfg),
    }
}

fn step_count(cfg: &TrajectoryConfig) -> usize {
    (cfg.t_end / cfg.dt).round() as usize
}

fn integrate_full(model: &Model, cfg: &TrajectoryConfig) -> Result<Trajectory, NumericalError> {
    let kappa = model.params.kappa;
    let lambda_max = model
        .drift_matrix(&cfg.initial)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let product = cfg.dt * lambda_max;
    if product >= RK4_STABILITY_LIMIT {
        return Err(NumericalError::StepTooLarge {
            product,
            limit: RK4_STABILITY_LIMIT,
        });
    }

    let h = cfg.dt * kappa;
    let mut f = |_tau: f64, y: &Vector<6>| {
        let s = MeanFieldState::from_array(y.0);
        // Non-finite values are caught on the state after each step.
        let d = rhs_full(model, &s).unwrap_or([f64::NAN; 6]);
        Vector(d.map(|v| v / kappa))
    };

    let mut out = Trajectory::default();
    let mut y = Vector(cfg.initial.to_array());
    out.push(0.0, cfg.initial);
    for i in 1..=step_count(cfg) {
        y = rk4_step(&mut f, (i - 1) as f64 * h, &y, h);
        let t = i as f64 * cfg.dt;
        if !y.is_finite() {
            return Err(NumericalError::NonFiniteDerivative {
                t,
                state: MeanFieldState::from_array(y.0),
            });
        }
        if i % cfg.sample_stride == 0 {
            out.push(t, MeanFieldState::from_array(y.0));
        }
    }
    Ok(out)
}

fn integrate_adiabatic(model: &Model, cfg: &TrajectoryConfig) -> Result<Trajectory, NumericalError> {
    let kappa = model.params.kappa;
    let h = cfg.dt * kappa;
    let mut f = |_tau: f64, y: &Vector<4>| {
        let s = AdiabaticState {
            mech_q: y.0[0],
            mech_q_dot: y.0[1],
            bog_q: y.0[2],
            bog_q_dot: y.0[3],
        };
        Vector(rhs_adiabatic(model, &s).map(|v| v / kappa))
    };
    let to_state = |y: &Vector<4>| {
        AdiabaticState {
            mech_q: y.0[0],
            mech_q_dot: y.0[1],
            bog_q: y.0[2],
            bog_q_dot: y.0[3],
        }
        .to_mean_field(model)
    };

    let start = AdiabaticState::from_mean_field(model, &cfg.initial);
    let mut y = Vector([start.mech_q, start.mech_q_dot, start.bog_q, start.bog_q_dot]);
    let mut out = Trajectory::default();
    out.push(0.0, to_state(&y));
    for i in 1..=step_count(cfg) {
        y = rk4_step(&mut f, (i - 1) as f64 * h, &y, h);
        let t = i as f64 * cfg.dt;
        if !y.is_finite() {
            return Err(NumericalError::NonFiniteDerivative { t, state: to_state(&y) });
        }
        if i % cfg.sample_stride == 0 {
            out.push(t, to_state(&y));
        }
    }
    Ok(out)
}

/// Angular frequency of an oscillating signal from its zero crossings.
///
/// Uses the last half of the samples, removes their mean, locates sign changes
/// by linear interpolation and returns `π / ⟨interval⟩`. `None` when fewer
/// than two crossings are found.
pub fn zero_crossing_frequency(times: &[f64], values: &[f64]) -> Option<f64> {
    let n = times.len().min(values.len());
    let start = n / 2;
    let (ts, vs) = (&times[start..n], &values[start..n]);
    if vs.len() < 3 {
        return None;
    }
    let mean = vs.iter().sum::<f64>() / vs.len() as f64;
    let mut crossings = Vec::new();
    for i in 1..vs.len() {
        let (a, b) = (vs[i - 1] - mean, vs[i] - mean);
        if a == 0.0 || a.signum() == b.signum() {
            continue;
        }
        let frac = a / (a - b);
        crossings.push(ts[i - 1] + frac * (ts[i] - ts[i - 1]));
    }
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    let mean_interval = span / (crossings.len() - 1) as f64;
    Some(std::f64::consts::PI / mean_interval)
}
