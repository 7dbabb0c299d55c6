//! Physical inputs and the quantities derived from them once per parameter set.
//!
//! Every rate and frequency is stored in rad/s.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, NumericalError};
use crate::tolerances::BOSE_EXPONENT_CLAMP;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;

/// How the optical block of the diffusion matrix is filled when squeezed
/// vacuum is injected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DConvention {
    /// `D₂₂ = 2κ(N_s + ½ − Re M_s)`: positive semidefinite for every squeezed bath.
    #[default]
    Standard,
    /// `D₂₂ = 2κ(N_s + ½ + Re M_s)`, identical to `D₁₁`. Kept for comparison;
    /// violates the quantum noise bound for any `N_s > 0` and is indefinite
    /// for some phases.
    Literal,
}

impl DConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            DConvention::Standard => "standard",
            DConvention::Literal => "literal",
        }
    }
}

/// All physical inputs of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Cavity amplitude decay rate κ.
    pub kappa: f64,
    /// Bare mechanical frequency ω_m.
    pub omega_m: f64,
    /// Mechanical damping γ_m.
    pub gamma_m: f64,
    /// Bogoliubov-mode damping γ_c.
    pub gamma_c: f64,
    /// Linear optomechanical coupling ξ₁.
    pub xi1: f64,
    /// Quadratic optomechanical coupling ξ₂ (signed).
    pub xi2: f64,
    /// Pump amplitude η.
    pub eta: f64,
    /// Stark-shifted cavity detuning δ_c.
    pub delta_c: f64,
    /// Recoil frequency ω_R.
    pub omega_r: f64,
    /// s-wave scattering frequency ω_sw.
    pub omega_sw: f64,
    /// Atom number N.
    pub n_atoms: f64,
    /// Optical lattice barrier height per photon U₀.
    pub u0: f64,
    /// Bath temperature in kelvin.
    pub temperature: f64,
    /// Squeezed-vacuum photon number N_s.
    pub n_s: f64,
    /// Squeezing phase φ in radians.
    pub phi: f64,
    pub squeezing_enabled: bool,
    pub d_convention: DConvention,
}

impl SystemParams {
    /// The reference experimental parameter set: κ = 2π·1.3 MHz,
    /// ω_m = 10⁵ rad/s, γ_m = 2π·100 Hz, γ_c = 0.001κ, ξ₁ = 0.05κ, η = 100κ,
    /// ω_R = 2.37·10⁴ rad/s, ω_sw = 0.5ω_R, N = 10⁵, T = 0.1 µK, N_s = 10, φ = π.
    ///
    /// ξ₂ = 0, δ_c = 50κ and squeezing injection is off.
    pub fn reference_defaults() -> Self {
        let kappa = 2.0 * PI * 1.3e6;
        let omega_r = 2.37e4;
        Self {
            kappa,
            omega_m: 1e5,
            gamma_m: 2.0 * PI * 100.0,
            gamma_c: 0.001 * kappa,
            xi1: 0.05 * kappa,
            xi2: 0.0,
            eta: 100.0 * kappa,
            delta_c: 50.0 * kappa,
            omega_r,
            omega_sw: 0.5 * omega_r,
            n_atoms: 1e5,
            u0: 1.05e4,
            temperature: 1e-7,
            n_s: 10.0,
            phi: PI,
            squeezing_enabled: false,
            d_convention: DConvention::Standard,
        }
    }

    /// Copy with ξ₂ set to `ratio · ξ₁`.
    pub fn with_xi2_ratio(mut self, ratio: f64) -> Self {
        self.xi2 = ratio * self.xi1;
        self
    }

    /// Copy with δ_c set to `ratio · κ`.
    pub fn with_delta_c_ratio(mut self, ratio: f64) -> Self {
        self.delta_c = ratio * self.kappa;
        self
    }

    /// Copy with η set to `ratio · κ`.
    pub fn with_eta_ratio(mut self, ratio: f64) -> Self {
        self.eta = ratio * self.kappa;
        self
    }

    pub fn with_squeezing(mut self, enabled: bool) -> Self {
        self.squeezing_enabled = enabled;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("kappa", self.kappa),
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
            ("gamma_c", self.gamma_c),
            ("omega_r", self.omega_r),
            ("n_atoms", self.n_atoms),
            ("u0", self.u0),
            ("temperature", self.temperature),
        ];
        for (key, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(invalid(key, format!("must be finite and > 0, got {value}")));
            }
        }
        let non_negative = [
            ("omega_sw", self.omega_sw),
            ("xi1", self.xi1),
            ("eta", self.eta),
            ("n_s", self.n_s),
        ];
        for (key, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(invalid(key, format!("must be finite and >= 0, got {value}")));
            }
        }
        for (key, value) in [("xi2", self.xi2), ("delta_c", self.delta_c), ("phi", self.phi)] {
            if !value.is_finite() {
                return Err(invalid(key, format!("must be finite, got {value}")));
            }
        }
        Ok(())
    }
}

fn invalid(key: &str, reason: String) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_owned(),
        reason,
    }
}

/// Quantities computed once per parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    /// Bogoliubov quadrature scale χ.
    pub chi: f64,
    /// Bogoliubov frequency ω_c, rad/s.
    pub omega_c: f64,
    /// BEC–field coupling ζ, rad/s.
    pub zeta: f64,
    /// Mechanical thermal occupation.
    pub n_m: f64,
    /// Bogoliubov thermal occupation.
    pub n_c: f64,
    /// Squeezing strength r.
    pub r_sq: f64,
    pub m_s_re: f64,
    pub m_s_im: f64,
}

/// Mean thermal occupation `1/(exp(ħω/k_B T) − 1)`, clamped to zero when the
/// exponent exceeds [`BOSE_EXPONENT_CLAMP`].
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    let x = HBAR * omega / (K_B * temperature);
    if x > BOSE_EXPONENT_CLAMP {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

pub fn derive_params(p: &SystemParams) -> Result<DerivedParams, NumericalError> {
    let low = 4.0 * p.omega_r + 0.5 * p.omega_sw;
    let high = 4.0 * p.omega_r + 1.5 * p.omega_sw;
    let chi = (high / low).powf(0.25);
    let omega_c = (low * high).sqrt();
    let zeta = p.n_atoms.sqrt() * p.u0 / (2.0 * chi);
    let n_m = bose_occupation(p.omega_m, p.temperature);
    let n_c = bose_occupation(omega_c, p.temperature);
    let r_sq = p.n_s.sqrt().asinh();
    let m_abs = 0.5 * (2.0 * r_sq).sinh();
    let (m_s_re, m_s_im) = (m_abs * p.phi.cos(), m_abs * p.phi.sin());

    let checks = [
        ("chi", chi),
        ("omega_c", omega_c),
        ("zeta", zeta),
        ("n_m", n_m),
        ("n_c", n_c),
        ("r_sq", r_sq),
        ("m_s_re", m_s_re),
        ("m_s_im", m_s_im),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, v)| !v.is_finite()) {
        return Err(NumericalError::NonFiniteDerived(name));
    }
    Ok(DerivedParams {
        chi,
        omega_c,
        zeta,
        n_m,
        n_c,
        r_sq,
        m_s_re,
        m_s_im,
    })
}

/// Lattice depth per photon `U₀ = g₀²/Δ_a` from the vacuum Rabi frequency and
/// the pump–atom detuning (both rad/s).
pub fn lattice_depth_per_photon(g0: f64, delta_a: f64) -> f64 {
    g0 * g0 / delta_a
}
