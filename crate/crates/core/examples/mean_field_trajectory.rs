//! Adiabatic mean-field trajectories at δ_c = 50κ for ξ₂ ∈ {+0.003, 0, −0.003}ξ₁.
//! The membrane oscillates faster for positive quadratic coupling.
//!
//! cargo run --release --example mean_field_trajectory

use optomech::meanfield::{adiabatic_step, zero_crossing_frequency};
use optomech::{integrate, Dynamics, MeanFieldState, Model, SystemParams, TrajectoryConfig};

fn main() {
    let base = Model::new(SystemParams::reference_defaults().with_delta_c_ratio(50.0)).unwrap();
    let cfg = TrajectoryConfig {
        dynamics: Dynamics::Adiabatic,
        t_end: 1.0 / base.params.gamma_m,
        dt: adiabatic_step(&base),
        sample_stride: 1,
        initial: MeanFieldState::ZERO,
    };
    for ratio in [0.003, 0.0, -0.003] {
        let model = base.with_xi2_ratio(ratio);
        let traj = integrate(&model, &cfg).unwrap();
        let f = zero_crossing_frequency(&traj.times, &traj.mech_q()).unwrap();
        let last = traj.last().unwrap();
        println!(
            "xi2/xi1 = {ratio:+.3}: q oscillates at {f:.5e} rad/s (omega_m = {:.1e}), final I = {:.3}",
            model.params.omega_m,
            last.photon_number()
        );
    }
}
