#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix6};
use optomech::meanfield::{integrate, Dynamics, TrajectoryConfig};
use optomech::{MeanFieldState, Model, SystemParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn reference_model() -> Model {
    Model::new(SystemParams::reference_defaults()).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> Matrix6<f64> {
    Matrix6::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

pub fn max_real_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `M − (max Re λ(M) + 0.1)·I`: slowest decay rate exactly 0.1.
pub fn random_stable(rng: &mut ChaCha8Rng) -> Matrix6<f64> {
    let m = random_matrix(rng);
    let shift = max_real_eigenvalue(&DMatrix::from_column_slice(6, 6, m.as_slice())) + 0.1;
    m - Matrix6::identity() * shift
}

/// `G·Gᵀ` with uniform entries: symmetric positive semidefinite.
pub fn random_psd(rng: &mut ChaCha8Rng) -> Matrix6<f64> {
    let g = random_matrix(rng);
    g * g.transpose()
}

/// Linear driven cavity (no mechanical or atomic coupling) started empty:
/// `α(t) = −η/(κ + iΔ) · (1 − e^{−(κ + iΔ)t})`.
pub fn linear_cavity(delta_c_over_kappa: f64) -> Model {
    let mut p = SystemParams::reference_defaults().with_delta_c_ratio(delta_c_over_kappa);
    p.u0 = 1e-300;
    p.xi1 = 0.0;
    p.xi2 = 0.0;
    Model::new(p).unwrap()
}

pub fn linear_cavity_field(model: &Model, t: f64) -> (f64, f64) {
    let p = &model.params;
    let (k, d) = (p.kappa, p.delta_c);
    let decay = (-k * t).exp();
    let (c, s) = ((d * t).cos(), (d * t).sin());
    // 1 − e^{−(κ+iΔ)t}
    let (one_re, one_im) = (1.0 - decay * c, decay * s);
    // −η/(κ + iΔ) = −η(κ − iΔ)/(κ² + Δ²)
    let denom = k * k + d * d;
    let (ss_re, ss_im) = (-p.eta * k / denom, p.eta * d / denom);
    (ss_re * one_re - ss_im * one_im, ss_re * one_im + ss_im * one_re)
}

/// Least-squares slope of log(error) against log(dt) over step halvings of
/// the full model on the linear cavity.
pub fn rk4_convergence_slope() -> f64 {
    let model = linear_cavity(5.0);
    let kappa = model.params.kappa;
    let t_end = 2.0 / kappa;
    let (exact_re, exact_im) = linear_cavity_field(&model, t_end);
    let points: Vec<(f64, f64)> = [100usize, 200, 400, 800]
        .iter()
        .map(|&n| {
            let dt = t_end / n as f64;
            let cfg = TrajectoryConfig {
                dynamics: Dynamics::Full,
                t_end,
                dt,
                sample_stride: n,
                initial: MeanFieldState::ZERO,
            };
            let last = *integrate(&model, &cfg).unwrap().last().unwrap();
            let err = (last.alpha_re - exact_re).hypot(last.alpha_im - exact_im);
            (dt.ln(), err.ln())
        })
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn two_mode_squeezed(r: f64) -> nalgebra::Matrix4<f64> {
    let (c, s) = (0.5 * (2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
    #[rustfmt::skip]
    let v = nalgebra::Matrix4::new(
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    );
    v
}

pub fn rel_diff(a: &Matrix6<f64>, b: &Matrix6<f64>) -> f64 {
    (a - b).amax() / b.amax()
}
