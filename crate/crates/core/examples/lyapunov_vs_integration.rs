//! Stationary covariance from the direct Lyapunov solve, cross-checked by
//! integrating dV/dt = AV + VAᵀ + D from the vacuum.
//!
//! cargo run --release --example lyapunov_vs_integration

use optomech::fluctuations::{covariance_at, Mode};
use optomech::{find_branches, integrate_cm, logarithmic_negativity, squeezing_db, Model, SystemParams};

fn main() {
    let model = Model::new(
        SystemParams::reference_defaults()
            .with_xi2_ratio(0.01)
            .with_delta_c_ratio(200.0),
    )
    .unwrap();
    let point = find_branches(&model)
        .unwrap()
        .into_iter()
        .rev()
        .find(|b| b.stable)
        .unwrap();
    let a = model.drift_matrix(&point.state);
    let d = model.diffusion_matrix().matrix;

    let direct = covariance_at(&model, &point).unwrap();
    println!(
        "I = {:.4}, stability margin {:.1} s^-1",
        point.photon_number, point.margin
    );
    println!("Lyapunov residual {:.2e}", direct.lyapunov_residual(&a, &d));

    let rho = a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let started = std::time::Instant::now();
    let integrated = integrate_cm(&a, &d, 50.0 / point.margin, 1.0 / rho).unwrap();
    let rel = (integrated.v - direct.v).amax() / direct.v.amax();
    println!("time integration agrees to {rel:.2e} ({:.2?})", started.elapsed());

    println!("S_q = {:.3} dB", squeezing_db(direct.v[(2, 2)]).unwrap());
    println!(
        "E_N(membrane, condensate) = {:.4}",
        logarithmic_negativity(&direct, Mode::Mechanical, Mode::Bogoliubov).unwrap()
    );
}
