//! Stationary Gaussian fluctuations: the Lyapunov equation `AV + VAᵀ = −D`,
//! quadrature squeezing and logarithmic negativity.
//!
//! Quadratures are normalised so the vacuum variance is ½.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Matrix6};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::NumericalError;
use crate::model::Model;
use crate::ode::rk4_step;
use crate::stability::classify_stability;
use crate::steadystate::{sweep_detuning, BranchPoint, ScanOptions};
use crate::tolerances::{CM_STATIONARITY, RADICAND_CLAMP, SYMPLECTIC_SLACK};

/// Vacuum (zero-point) variance of a quadrature.
pub const ZERO_POINT_VARIANCE: f64 = 0.5;

/// Stationary covariance matrix of `(δX, δY, δq, δp, δQ, δP)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub v: Matrix6<f64>,
}

/// One of the three bosonic modes, selecting a 2×2 diagonal block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Optical,
    Mechanical,
    Bogoliubov,
}

impl Mode {
    fn offset(self) -> usize {
        match self {
            Mode::Optical => 0,
            Mode::Mechanical => 2,
            Mode::Bogoliubov => 4,
        }
    }
}

impl CovarianceMatrix {
    /// `|V − Vᵀ|_max / |V|_max`.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.v.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (self.v - self.v.transpose()).amax() / scale
    }

    /// `|AV + VAᵀ + D|_max / |D|_max`.
    pub fn lyapunov_residual(&self, a: &Matrix6<f64>, d: &Matrix6<f64>) -> f64 {
        let r = (a * self.v + self.v * a.transpose() + d).amax();
        let scale = d.amax();
        if scale == 0.0 {
            r
        } else {
            r / scale
        }
    }

    /// 4×4 covariance matrix of two modes, in the order given.
    pub fn two_mode(&self, first: Mode, second: Mode) -> Matrix4<f64> {
        let idx = [first.offset(), first.offset() + 1, second.offset(), second.offset() + 1];
        Matrix4::from_fn(|i, j| self.v[(idx[i], idx[j])])
    }

    /// Every two-mode reduction has symplectic eigenvalues ≥ ½ (within slack).
    pub fn is_physical(&self) -> bool {
        let pairs = [
            (Mode::Optical, Mode::Mechanical),
            (Mode::Optical, Mode::Bogoliubov),
            (Mode::Mechanical, Mode::Bogoliubov),
        ];
        pairs.iter().all(|&(a, b)| {
            let (low, _) = symplectic_eigenvalues(&self.two_mode(a, b));
            low >= ZERO_POINT_VARIANCE - SYMPLECTIC_SLACK
        })
    }
}

/// Symplectic eigenvalues `(ν₋, ν₊)` of a two-mode covariance matrix
/// `[[B, C], [Cᵀ, B′]]`, from `Δ = det B + det B′ + 2 det C`.
pub fn symplectic_eigenvalues(v: &Matrix4<f64>) -> (f64, f64) {
    let (b, bp, c) = blocks(v);
    let delta = b.determinant() + bp.determinant() + 2.0 * c.determinant();
    let det = v.determinant();
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    (
        (0.5 * (delta - disc)).max(0.0).sqrt(),
        (0.5 * (delta + disc)).max(0.0).sqrt(),
    )
}

fn blocks(v: &Matrix4<f64>) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
    (
        v.fixed_view::<2, 2>(0, 0).into_owned(),
        v.fixed_view::<2, 2>(2, 2).into_owned(),
        v.fixed_view::<2, 2>(0, 2).into_owned(),
    )
}

/// Solves `AV + VAᵀ = −D` exactly through the 36×36 vectorized system
/// `(I⊗A + A⊗I) vec V = −vec D`.
pub fn solve_lyapunov(a: &Matrix6<f64>, d: &Matrix6<f64>) -> Result<CovarianceMatrix, NumericalError> {
    let verdict = classify_stability(a);
    if !verdict.stable {
        return Err(NumericalError::NoStationaryState {
            max_real_part: -verdict.margin,
        });
    }
    if (d - d.transpose()).amax() > 1e-12 * d.amax() {
        return Err(NumericalError::AsymmetricDiffusion);
    }
    // Common rescaling of A and D leaves V unchanged and evens out the entries.
    let scale = a.amax();
    let a_s = a / scale;
    let d_s = d / scale;

    let n = 6;
    let mut k = DMatrix::<f64>::zeros(n * n, n * n);
    // Column-major vec: vec(AV) = (I⊗A) vec V, vec(VAᵀ) = (A⊗I) vec V.
    for col in 0..n {
        for row in 0..n {
            let r = col * n + row;
            for m in 0..n {
                k[(r, col * n + m)] += a_s[(row, m)];
                k[(r, m * n + row)] += a_s[(col, m)];
            }
        }
    }
    let rhs = DVector::from_iterator(n * n, d_s.iter().map(|x| -x));
    let lu = k.clone().lu();
    let mut x = lu.solve(&rhs).ok_or(NumericalError::SingularSystem)?;
    // One step of iterative refinement.
    let residual = &rhs - &k * &x;
    if let Some(correction) = lu.solve(&residual) {
        x += correction;
    }
    let v = Matrix6::from_column_slice(x.as_slice());
    Ok(CovarianceMatrix {
        v: 0.5 * (v + v.transpose()),
    })
}

/// Integrates `dV/dt = AV + VAᵀ + D` from the vacuum `V(0) = ½I` with a
/// fixed fourth-order step until `|dV/dt|_max < 1e-10 · |D|_max` (or, for
/// `D = 0`, relative to `|A|_max · |V(0)|_max`).
pub fn integrate_cm(
    a: &Matrix6<f64>,
    d: &Matrix6<f64>,
    t_end: f64,
    dt: f64,
) -> Result<CovarianceMatrix, NumericalError> {
    let mut rhs = |_t: f64, v: &Matrix6<f64>| a * v + v * a.transpose() + d;
    let mut v = Matrix6::identity() * ZERO_POINT_VARIANCE;
    let reference = if d.amax() > 0.0 {
        d.amax()
    } else {
        a.amax() * ZERO_POINT_VARIANCE
    };
    let threshold = CM_STATIONARITY * reference;
    let steps = (t_end / dt).ceil() as usize;
    for i in 0..steps {
        if i % 8 == 0 && rhs(0.0, &v).amax() < threshold {
            return Ok(CovarianceMatrix {
                v: 0.5 * (v + v.transpose()),
            });
        }
        v = rk4_step(&mut rhs, i as f64 * dt, &v, dt);
        if !v.iter().all(|x| x.is_finite()) {
            break;
        }
    }
    if rhs(0.0, &v).amax() < threshold {
        return Ok(CovarianceMatrix {
            v: 0.5 * (v + v.transpose()),
        });
    }
    Err(NumericalError::NoConvergence { t_end })
}

/// Squeezing in dB relative to the zero-point variance: `−10 log₁₀(σ/½)`.
pub fn squeezing_db(variance: f64) -> Result<f64, NumericalError> {
    if !(variance > 0.0) {
        return Err(NumericalError::NonPositiveVariance(variance));
    }
    Ok(-10.0 * (variance / ZERO_POINT_VARIANCE).log10())
}

/// Logarithmic negativity (natural log) between two modes.
pub fn logarithmic_negativity(cm: &CovarianceMatrix, first: Mode, second: Mode) -> Result<f64, NumericalError> {
    log_negativity_two_mode(&cm.two_mode(first, second))
}

/// Logarithmic negativity of a 4×4 two-mode covariance matrix
/// `[[B, C], [Cᵀ, B′]]`: `max(0, −ln 2η⁻)` where η⁻ is the smallest
/// symplectic eigenvalue of the partial transpose.
pub fn log_negativity_two_mode(v: &Matrix4<f64>) -> Result<f64, NumericalError> {
    let (b, bp, c) = blocks(v);
    let sigma = b.determinant() + bp.determinant() - 2.0 * c.determinant();
    let det = v.determinant();
    let mut radicand = sigma * sigma - 4.0 * det;
    if radicand < 0.0 {
        if radicand >= -RADICAND_CLAMP * sigma * sigma {
            radicand = 0.0;
        } else {
            return Err(NumericalError::UnphysicalReduction(radicand));
        }
    }
    let inner = (sigma - radicand.sqrt()).max(0.0);
    let eta_minus = std::f64::consts::FRAC_1_SQRT_2 * inner.sqrt();
    Ok((-(2.0 * eta_minus).ln()).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationObservables {
    /// σ_q = V₃₃.
    pub sigma_mech_q: f64,
    /// V₄₄.
    pub sigma_mech_p: f64,
    /// σ_Q = V₅₅.
    pub sigma_bog_q: f64,
    /// V₆₆.
    pub sigma_bog_p: f64,
    pub squeezing_mech_db: f64,
    pub squeezing_bog_db: f64,
    /// Membrane–condensate logarithmic negativity.
    pub log_negativity: f64,
}

pub fn observables_from(cm: &CovarianceMatrix) -> Result<FluctuationObservables, NumericalError> {
    let v = &cm.v;
    Ok(FluctuationObservables {
        sigma_mech_q: v[(2, 2)],
        sigma_mech_p: v[(3, 3)],
        sigma_bog_q: v[(4, 4)],
        sigma_bog_p: v[(5, 5)],
        squeezing_mech_db: squeezing_db(v[(2, 2)])?,
        squeezing_bog_db: squeezing_db(v[(4, 4)])?,
        log_negativity: logarithmic_negativity(cm, Mode::Mechanical, Mode::Bogoliubov)?,
    })
}

/// Stationary covariance matrix at a stable steady state.
pub fn covariance_at(model: &Model, point: &BranchPoint) -> Result<CovarianceMatrix, NumericalError> {
    if !point.stable {
        return Err(NumericalError::UnstablePoint);
    }
    let model = model.with_delta_c(point.delta_c);
    let a = model.drift_matrix(&point.state);
    let d = model.diffusion_matrix().matrix;
    solve_lyapunov(&a, &d)
}

pub fn observables_at(model: &Model, point: &BranchPoint) -> Result<FluctuationObservables, NumericalError> {
    observables_from(&covariance_at(model, point)?)
}

/// One row of a fluctuation sweep. `observables` is `None` where the tracked
/// branch is missing or unstable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableRow {
    pub delta_c_over_kappa: f64,
    pub xi2_over_xi1: f64,
    pub squeezing_injected: bool,
    pub photon_number: Option<f64>,
    pub observables: Option<FluctuationObservables>,
}

/// Observables along branch 1 (the continuation of the first steady state at
/// the start of `deltas`) for every combination of ξ₂/ξ₁ and injection
/// setting. Rows are grouped by ξ₂ first, then injection, then detuning.
pub fn sweep_observables(
    model: &Model,
    deltas: &[f64],
    xi2_ratios: &[f64],
    injections: &[bool],
    options: ScanOptions,
) -> Result<Vec<ObservableRow>, NumericalError> {
    let kappa = model.params.kappa;
    let mut rows = Vec::with_capacity(deltas.len() * xi2_ratios.len() * injections.len());
    for &ratio in xi2_ratios {
        let base = model.with_xi2_ratio(ratio);
        let table = sweep_detuning(&base, deltas, options)?;
        let branch: Vec<Option<BranchPoint>> = table.branch(1).into_iter().map(|b| b.copied()).collect();
        for &injected in injections {
            let m = base.with_squeezing(injected);
            let group: Vec<ObservableRow> = deltas
                .par_iter()
                .zip(branch.par_iter())
                .map(|(&delta, point)| {
                    let observables = match point {
                        Some(p) if p.stable => Some(observables_at(&m, p)?),
                        _ => None,
                    };
                    Ok(ObservableRow {
                        delta_c_over_kappa: delta / kappa,
                        xi2_over_xi1: ratio,
                        squeezing_injected: injected,
                        photon_number: point.map(|p| p.photon_number),
                        observables,
                    })
                })
                .collect::<Result<_, NumericalError>>()?;
            rows.extend(group);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;

    #[test]
    fn decoupled_identity_case() {
        let a = -Matrix6::identity();
        let d = Matrix6::identity() * 2.0;
        let cm = solve_lyapunov(&a, &d).unwrap();
        assert!((cm.v - Matrix6::identity()).amax() < 1e-14);
    }

    #[test]
    fn scaled_identity_gives_half_diffusion() {
        let m = Model::new(SystemParams::reference_defaults()).unwrap();
        let k = m.params.kappa;
        let d = m.diffusion_matrix().matrix;
        let cm = solve_lyapunov(&(-Matrix6::identity() * k), &d).unwrap();
        assert!((cm.v - d / (2.0 * k)).amax() < 1e-14);
    }

    #[test]
    fn unstable_drift_has_no_stationary_state() {
        let mut a = -Matrix6::identity();
        a[(3, 3)] = 0.5;
        let err = solve_lyapunov(&a, &Matrix6::identity()).unwrap_err();
        assert!(matches!(err, NumericalError::NoStationaryState { .. }));
    }

    #[test]
    fn asymmetric_diffusion_is_rejected() {
        let mut d = Matrix6::identity();
        d[(0, 1)] = 0.3;
        assert_eq!(
            solve_lyapunov(&-Matrix6::identity(), &d).unwrap_err(),
            NumericalError::AsymmetricDiffusion
        );
    }

    #[test]
    fn integration_converges_to_identity() {
        let cm = integrate_cm(&-Matrix6::identity(), &(Matrix6::identity() * 2.0), 100.0, 0.01).unwrap();
        assert!((cm.v - Matrix6::identity()).amax() < 1e-9);
    }

    #[test]
    fn integration_without_noise_decays() {
        let cm = integrate_cm(&-Matrix6::identity(), &Matrix6::zeros(), 100.0, 0.01).unwrap();
        assert!(cm.v.amax() < 1e-10);
    }

    #[test]
    fn integration_reports_non_convergence() {
        let err = integrate_cm(&-Matrix6::identity(), &(Matrix6::identity() * 4.0), 0.5, 0.01).unwrap_err();
        assert!(matches!(err, NumericalError::NoConvergence { .. }));
    }

    #[test]
    fn squeezing_scale() {
        assert_eq!(squeezing_db(0.5).unwrap(), 0.0);
        assert!((squeezing_db(0.25).unwrap() - 3.010_299_956_639_812).abs() < 1e-12);
        assert!((squeezing_db(0.05).unwrap() - 10.0).abs() < 1e-12);
        assert!(squeezing_db(0.0).is_err());
        assert!(squeezing_db(-1.0).is_err());
    }

    #[test]
    fn vacuum_pair_is_separable() {
        let v = Matrix4::identity() * 0.5;
        assert_eq!(log_negativity_two_mode(&v).unwrap(), 0.0);
        let (lo, hi) = symplectic_eigenvalues(&v);
        assert!((lo - 0.5).abs() < 1e-15 && (hi - 0.5).abs() < 1e-15);
    }

    fn two_mode_squeezed(r: f64) -> Matrix4<f64> {
        let (c, s) = (0.5 * (2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
        #[rustfmt::skip]
        let v = Matrix4::new(
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        );
        v
    }

    #[test]
    fn two_mode_squeezed_vacuum() {
        for r in [0.1, 0.5, 1.0] {
            let en = log_negativity_two_mode(&two_mode_squeezed(r)).unwrap();
            assert!((en - 2.0 * r).abs() < 1e-9, "r = {r}: {en}");
        }
    }

    #[test]
    fn unphysical_reduction_is_rejected() {
        // Σ² − 4 det V < 0 well beyond rounding.
        #[rustfmt::skip]
        let v = Matrix4::new(
            0.0, 0.0, 0.0, 1.5,
            0.0, 0.0, 2.0, -0.5,
            0.0, 2.0, 0.0, 1.0,
            1.5, -0.5, 1.0, 1.0,
        );
        assert!(matches!(
            log_negativity_two_mode(&v),
            Err(NumericalError::UnphysicalReduction(_))
        ));
    }

    #[test]
    fn unstable_point_is_rejected() {
        let m = Model::new(SystemParams::reference_defaults()).unwrap();
        let p = BranchPoint {
            delta_c: 0.0,
            photon_number: 0.0,
            state: crate::state::MeanFieldState::ZERO,
            stable: false,
            margin: -1.0,
            branch_id: 1,
        };
        assert_eq!(observables_at(&m, &p).unwrap_err(), NumericalError::UnstablePoint);
    }

    #[test]
    fn decoupled_oscillators_reach_thermal_equilibrium() {
        let mut p = SystemParams::reference_defaults();
        p.u0 = 1e-300;
        p.xi1 = 0.0;
        p.xi2 = 0.0;
        p.temperature = 5e-6;
        let m = Model::new(p).unwrap();
        let point = crate::steadystate::find_branches(&m).unwrap()[0];
        let cm = covariance_at(&m, &point).unwrap();
        let d = &m.derived;
        assert!((cm.v[(2, 2)] - (d.n_m + 0.5)).abs() < 1e-9 * (d.n_m + 0.5));
        assert!((cm.v[(3, 3)] - (d.n_m + 0.5)).abs() < 1e-9 * (d.n_m + 0.5));
        assert!((cm.v[(4, 4)] - (d.n_c + 0.5)).abs() < 1e-9 * (d.n_c + 0.5));
        assert!((cm.v[(0, 0)] - 0.5).abs() < 1e-12);
    }
}
