//! Linearization of the quantum Langevin equations about a mean-field point.
//!
//! Fluctuation vector ordering is `(δX, δY, δq, δp, δQ, δP)`.

use std::f64::consts::SQRT_2;

use nalgebra::Matrix6;
use serde::Serialize;

use crate::error::{ConfigError, NumericalError};
use crate::params::{derive_params, DConvention, DerivedParams, SystemParams};
use crate::state::MeanFieldState;

/// A validated parameter set together with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub params: SystemParams,
    pub derived: DerivedParams,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] NumericalError),
}

/// Drift and diffusion matrices at one mean-field point.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearization {
    pub a_matrix: Matrix6<f64>,
    pub d_matrix: Matrix6<f64>,
    /// Effective detuning Δ.
    pub delta_eff: f64,
    /// β = ξ₁ − 2ξ₂q̄.
    pub beta: f64,
    /// ω_b = ω_m + 2ξ₂|α|².
    pub omega_b: f64,
}

/// Diffusion matrix plus flags for the defects the literal convention can
/// produce.
#[derive(Debug, Clone, PartialEq)]
pub struct Diffusion {
    pub matrix: Matrix6<f64>,
    pub positive_semidefinite: bool,
    /// Optical block obeys `D₁₁D₂₂ − D₁₂² ≥ κ²`, the bound any quantum input
    /// noise must satisfy. Pure squeezing saturates it.
    pub satisfies_noise_bound: bool,
}

impl Diffusion {
    pub fn is_physical(&self) -> bool {
        self.positive_semidefinite && self.satisfies_noise_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
}

/// Advisory regime checks for a given intracavity photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    /// Weak-interaction verdict: `U₀I ≤ 10ω_R`.
    pub verdict: Verdict,
    /// `U₀I / (10ω_R)`.
    pub interaction_ratio: f64,
    /// `κ/ω_m`; above one the mechanical sidebands are unresolved.
    pub kappa_over_omega_m: f64,
    pub unresolved_sideband: bool,
}

impl Model {
    pub fn new(params: SystemParams) -> Result<Self, ModelError> {
        params.validate()?;
        let derived = derive_params(&params)?;
        Ok(Self { params, derived })
    }

    /// Δ = δ_c + ζQ̄ − ξ₁q̄ + ξ₂q̄².
    pub fn effective_detuning(&self, state: &MeanFieldState) -> f64 {
        self.detuning_at(state.mech_q, state.bog_q)
    }

    pub(crate) fn detuning_at(&self, q: f64, big_q: f64) -> f64 {
        let p = &self.params;
        p.delta_c + self.derived.zeta * big_q - p.xi1 * q + p.xi2 * q * q
    }

    pub fn drift_matrix(&self, state: &MeanFieldState) -> Matrix6<f64> {
        let p = &self.params;
        let d = &self.derived;
        let delta = self.effective_detuning(state);
        let beta = p.xi1 - 2.0 * p.xi2 * state.mech_q;
        let omega_b = p.omega_m + 2.0 * p.xi2 * state.photon_number();
        let ar = SQRT_2 * state.alpha_re;
        let ai = SQRT_2 * state.alpha_im;
        let (k, z) = (p.kappa, d.zeta);
        #[rustfmt::skip]
        let a = Matrix6::new(
            -k,         delta,     -ai * beta, 0.0,        ai * z,      0.0,
            -delta,     -k,        ar * beta,  0.0,        -ar * z,     0.0,
            0.0,        0.0,       0.0,        p.omega_m,  0.0,         0.0,
            ar * beta,  ai * beta, -omega_b,   -p.gamma_m, 0.0,         0.0,
            0.0,        0.0,       0.0,        0.0,        -p.gamma_c,  d.omega_c,
            -ar * z,    -ai * z,   0.0,        0.0,        -d.omega_c,  -p.gamma_c,
        );
        a
    }

    pub fn diffusion_matrix(&self) -> Diffusion {
        let p = &self.params;
        let d = &self.derived;
        let gm = p.gamma_m * (2.0 * d.n_m + 1.0);
        let gc = p.gamma_c * (2.0 * d.n_c + 1.0);
        let mut m = Matrix6::from_diagonal(&nalgebra::Vector6::new(p.kappa, p.kappa, 0.0, gm, gc, gc));
        let mut psd = true;
        let mut bound = true;
        if p.squeezing_enabled {
            let base = p.n_s + 0.5;
            let k2 = 2.0 * p.kappa;
            m[(0, 0)] = k2 * (base + d.m_s_re);
            m[(1, 1)] = match p.d_convention {
                DConvention::Standard => k2 * (base - d.m_s_re),
                DConvention::Literal => k2 * (base + d.m_s_re),
            };
            m[(0, 1)] = k2 * d.m_s_im;
            m[(1, 0)] = k2 * d.m_s_im;
            // Optical 2x2 block is the only place D can go indefinite.
            let (a, b, c) = (m[(0, 0)], m[(1, 1)], m[(0, 1)]);
            let scale = k2 * base;
            let det = a * b - c * c;
            psd = a >= -1e-12 * scale && b >= -1e-12 * scale && det >= -1e-12 * scale * scale;
            bound = det >= p.kappa * p.kappa - 1e-9 * scale * scale;
        }
        Diffusion {
            matrix: m,
            positive_semidefinite: psd,
            satisfies_noise_bound: bound,
        }
    }

    pub fn linearize(&self, state: &MeanFieldState) -> Linearization {
        let p = &self.params;
        Linearization {
            a_matrix: self.drift_matrix(state),
            d_matrix: self.diffusion_matrix().matrix,
            delta_eff: self.effective_detuning(state),
            beta: p.xi1 - 2.0 * p.xi2 * state.mech_q,
            omega_b: p.omega_m + 2.0 * p.xi2 * state.photon_number(),
        }
    }

    pub fn validity_check(&self, photon_number: f64) -> ValidityReport {
        let p = &self.params;
        let ratio = p.u0 * photon_number / (10.0 * p.omega_r);
        let kappa_over_omega_m = p.kappa / p.omega_m;
        ValidityReport {
            verdict: if ratio <= 1.0 { Verdict::Pass } else { Verdict::Warn },
            interaction_ratio: ratio,
            kappa_over_omega_m,
            unresolved_sideband: kappa_over_omega_m > 1.0,
        }
    }

    /// Copy of this model with ξ₂ = `ratio`·ξ₁; derived quantities do not
    /// depend on ξ₂.
    pub fn with_xi2_ratio(&self, ratio: f64) -> Self {
        Self {
            params: self.params.with_xi2_ratio(ratio),
            derived: self.derived,
        }
    }

    /// Copy with a new detuning δ_c (rad/s).
    pub fn with_delta_c(&self, delta_c: f64) -> Self {
        let mut params = self.params;
        params.delta_c = delta_c;
        Self {
            params,
            derived: self.derived,
        }
    }

    pub fn with_squeezing(&self, enabled: bool) -> Self {
        Self {
            params: self.params.with_squeezing(enabled),
            derived: self.derived,
        }
    }
}
