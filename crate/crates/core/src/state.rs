use serde::Serialize;

/// Classical phase-space point: optical amplitude plus mechanical and
/// Bogoliubov quadratures (all dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MeanFieldState {
    pub alpha_re: f64,
    pub alpha_im: f64,
    /// Mechanical position quadrature q̄.
    pub mech_q: f64,
    /// Mechanical momentum quadrature p̄.
    pub mech_p: f64,
    /// Bogoliubov quadrature Q̄.
    pub bog_q: f64,
    /// Bogoliubov quadrature P̄.
    pub bog_p: f64,
}

impl MeanFieldState {
    pub const ZERO: Self = Self {
        alpha_re: 0.0,
        alpha_im: 0.0,
        mech_q: 0.0,
        mech_p: 0.0,
        bog_q: 0.0,
        bog_p: 0.0,
    };

    /// Intracavity photon number |α|².
    pub fn photon_number(&self) -> f64 {
        self.alpha_re * self.alpha_re + self.alpha_im * self.alpha_im
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.alpha_re,
            self.alpha_im,
            self.mech_q,
            self.mech_p,
            self.bog_q,
            self.bog_p,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            alpha_re: a[0],
            alpha_im: a[1],
            mech_q: a[2],
            mech_p: a[3],
            bog_q: a[4],
            bog_p: a[5],
        }
    }
}
